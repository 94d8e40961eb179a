#include "sic/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sic {
namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

// Squared localization envelope (pi r_c^2)^(-1/2) exp(-(x-z)^2 / r_c^2)
// summed over periodic images. Images beyond |x - z| > 28 r_c underflow to
// zero, so the sum is exact with a small image count.
double wrapped_sq_envelope(double x, double z, double r_c, double length) {
  const int n_img = static_cast<int>(std::ceil(28.0 * r_c / length)) + 1;
  const double norm = 1.0 / (kSqrtPi * r_c);
  double acc = 0.0;
  for (int n = -n_img; n <= n_img; ++n) {
    const double u = (x - z + n * length) / r_c;
    acc += norm * std::exp(-u * u);
  }
  return acc;
}

double wrap_into(double v, double lo, double length) {
  return v - length * std::floor((v - lo) / length);
}

} // namespace

double decoherence_time(double e_nl, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("decoherence_time: hbar must be > 0");
  if (e_nl < 0.0) throw std::invalid_argument("decoherence_time: energy must be >= 0");
  if (e_nl == 0.0) return std::numeric_limits<double>::infinity();
  return hbar / e_nl;
}

double CollapseParams::effective_rate() const {
  if (rate_source == RateSource::FixedRate) return rate;
  if (e_nl == 0.0) return 0.0; // infinite tau, exactly no hits
  return e_nl / hbar;
}

std::vector<std::string> CollapseParams::validate() const {
  std::vector<std::string> errs;
  if (!(hbar > 0.0)) errs.push_back("hbar must be > 0");
  if (!(rate >= 0.0)) errs.push_back("rate must be >= 0");
  if (!(e_nl >= 0.0)) errs.push_back("e_nl must be >= 0");
  if (!(r_c > 0.0)) errs.push_back("r_c must be > 0");
  return errs;
}

void CollapseParams::ensure_valid() const {
  const auto errs = validate();
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid collapse params:";
  for (const auto& e : errs) os << " [" << e << "]";
  throw std::invalid_argument(os.str());
}

std::vector<double> sample_hit_times(double rate, double duration, Rng& rng) {
  if (rate < 0.0) throw std::invalid_argument("sample_hit_times: rate must be >= 0");
  if (!(duration > 0.0)) throw std::invalid_argument("sample_hit_times: duration must be > 0");
  std::vector<double> out;
  if (rate == 0.0) return out;
  double t = rng.exponential(rate);
  while (t <= duration) {
    out.push_back(t);
    t += rng.exponential(rate);
  }
  return out;
}

std::vector<double> fixed_hit_times(double rate, double duration) {
  if (rate < 0.0) throw std::invalid_argument("fixed_hit_times: rate must be >= 0");
  if (!(duration > 0.0)) throw std::invalid_argument("fixed_hit_times: duration must be > 0");
  std::vector<double> out;
  if (rate == 0.0) return out;
  for (long long k = 1;; ++k) {
    const double t = static_cast<double>(k) / rate;
    if (t > duration) break;
    out.push_back(t);
  }
  return out;
}

std::array<double, 2> sample_hit_center(const WavefunctionGrid& psi, double r_c, Rng& rng) {
  psi.ensure_valid();
  if (!(r_c > 0.0)) throw std::invalid_argument("sample_hit_center: r_c must be > 0");
  const double norm = psi.norm_sq();
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("sample_hit_center: wavefunction is not normalized");

  // A grid cell carries probability mass |psi|^2 dx^D; drawing a cell and
  // displacing by a Gaussian of width r_c/sqrt(2) per dimension realizes
  // p(z) = ||L_z psi||^2 with the periodic envelope used by apply_hit.
  const std::size_t npts = psi.total_points();
  std::vector<double> cum(npts);
  double acc = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    const auto& z = psi.amplitudes[i];
    acc += z.real() * z.real() + z.imag() * z.imag();
    cum[i] = acc;
  }
  const double u = rng.uniform() * acc;
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  if (idx >= npts) idx = npts - 1;

  const int nx = psi.extent[0];
  const int cell_index[2] = {static_cast<int>(idx % static_cast<std::size_t>(nx)),
                             static_cast<int>(idx / static_cast<std::size_t>(nx))};
  std::array<double, 2> center{0.0, 0.0};
  const double sigma = r_c / std::sqrt(2.0);
  for (int d = 0; d < psi.dims; ++d) {
    const double x0 = psi.coordinate(cell_index[d], d);
    const double lo = psi.coordinate(0, d);
    center[static_cast<std::size_t>(d)] =
        wrap_into(x0 + sigma * rng.normal(), lo, psi.domain_length(d));
  }
  return center;
}

WavefunctionGrid apply_hit(const WavefunctionGrid& psi, const std::array<double, 2>& z,
                           double r_c) {
  psi.ensure_valid();
  if (!(r_c > 0.0)) throw std::invalid_argument("apply_hit: r_c must be > 0");

  WavefunctionGrid out = psi;
  const int nx = psi.extent[0];
  const int ny = psi.extent[1];

  std::array<std::vector<double>, 2> w;
  for (int d = 0; d < psi.dims; ++d) {
    const double lo = psi.coordinate(0, d);
    const double length = psi.domain_length(d);
    const double zd = wrap_into(z[static_cast<std::size_t>(d)], lo, length);
    const int n = psi.extent[d];
    w[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      w[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
          wrapped_sq_envelope(psi.coordinate(i, d), zd, r_c, length);
  }

  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double weight = w[0][static_cast<std::size_t>(ix)];
      if (psi.dims == 2) weight *= w[1][static_cast<std::size_t>(iy)];
      out.amplitudes[static_cast<std::size_t>(iy) * nx + ix] *= std::sqrt(weight);
    }

  const double surviving = std::sqrt(out.norm_sq());
  if (surviving < 1e-300) throw DegenerateHit();
  const double scale = 1.0 / surviving;
  for (auto& a : out.amplitudes) a *= scale;
  return out;
}

} // namespace sic
