#include "sic/quantum_grid.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "sic/fft.hpp"

namespace sic {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Plans depend only on the axis length, so a per-thread cache is safe: cache
// hits return bit-identical tables to a fresh construction.
const SpectralPlan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<SpectralPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralPlan>(n);
  return *slot;
}

double axis_momentum(int j, int n, double dx) {
  const int wrapped = (j < n / 2) ? j : j - n;
  return kTwoPi * static_cast<double>(wrapped) / (static_cast<double>(n) * dx);
}

// Per-step kinetic phases exp(-i hbar k^2 dt / (2m)) for one axis.
std::vector<std::complex<double>> kinetic_phase_table(int n, double dx, double mass,
                                                      double hbar, double dt) {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double k = axis_momentum(j, n, dx);
    const double ang = -hbar * k * k * dt / (2.0 * mass);
    out[static_cast<std::size_t>(j)] = std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return out;
}

std::vector<std::complex<double>> potential_phase_table(const PotentialGrid& v, double hbar,
                                                        double half_dt) {
  std::vector<std::complex<double>> out(v.values.size());
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const double ang = -v.values[i] * half_dt / hbar;
    out[i] = std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return out;
}

void pointwise_multiply(std::vector<std::complex<double>>& a,
                        const std::vector<std::complex<double>>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void check_shapes(const WavefunctionGrid& psi, const PotentialGrid& v) {
  psi.ensure_valid();
  if (v.extent != psi.extent || v.values.size() != psi.total_points())
    throw std::invalid_argument("potential grid shape does not match wavefunction grid");
  for (const double x : v.values)
    if (!std::isfinite(x)) throw std::invalid_argument("potential contains non-finite values");
}

long long checked_step_count(double duration, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  const double ratio = duration / dt;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, std::abs(ratio)))
    throw std::invalid_argument("duration is not an integer multiple of dt");
  return n;
}

// Forward transform along every axis (in place).
void spectral_forward(WavefunctionGrid& psi) {
  const int nx = psi.extent[0];
  const int ny = psi.extent[1];
  const auto& px = plan_for(static_cast<std::size_t>(nx));
  for (int iy = 0; iy < ny; ++iy)
    px.forward(psi.amplitudes.data() + static_cast<std::size_t>(iy) * nx);
  if (psi.dims == 2) {
    const auto& py = plan_for(static_cast<std::size_t>(ny));
    std::vector<std::complex<double>> col(static_cast<std::size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy)
        col[static_cast<std::size_t>(iy)] =
            psi.amplitudes[static_cast<std::size_t>(iy) * nx + ix];
      py.forward(col.data());
      for (int iy = 0; iy < ny; ++iy)
        psi.amplitudes[static_cast<std::size_t>(iy) * nx + ix] =
            col[static_cast<std::size_t>(iy)];
    }
  }
}

void spectral_inverse(WavefunctionGrid& psi) {
  const int nx = psi.extent[0];
  const int ny = psi.extent[1];
  if (psi.dims == 2) {
    const auto& py = plan_for(static_cast<std::size_t>(ny));
    std::vector<std::complex<double>> col(static_cast<std::size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy)
        col[static_cast<std::size_t>(iy)] =
            psi.amplitudes[static_cast<std::size_t>(iy) * nx + ix];
      py.inverse(col.data());
      for (int iy = 0; iy < ny; ++iy)
        psi.amplitudes[static_cast<std::size_t>(iy) * nx + ix] =
            col[static_cast<std::size_t>(iy)];
    }
  }
  const auto& px = plan_for(static_cast<std::size_t>(nx));
  for (int iy = 0; iy < ny; ++iy)
    px.inverse(psi.amplitudes.data() + static_cast<std::size_t>(iy) * nx);
}

void apply_kinetic_phases(WavefunctionGrid& psi,
                          const std::vector<std::complex<double>>& phx,
                          const std::vector<std::complex<double>>& phy) {
  const int nx = psi.extent[0];
  const int ny = psi.extent[1];
  if (psi.dims == 1) {
    for (int ix = 0; ix < nx; ++ix)
      psi.amplitudes[static_cast<std::size_t>(ix)] *= phx[static_cast<std::size_t>(ix)];
    return;
  }
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      psi.amplitudes[static_cast<std::size_t>(iy) * nx + ix] *=
          phx[static_cast<std::size_t>(ix)] * phy[static_cast<std::size_t>(iy)];
}

// Core loop shared by the public evolution entry points. Phase tables are a
// function of (grid, dt) alone and every step reuses them, so splitting a
// duration across calls reproduces the exact same arithmetic sequence.
WavefunctionGrid evolve_steps(const WavefunctionGrid& psi, const PotentialGrid& v,
                              double dt, long long n_steps) {
  WavefunctionGrid out = psi;
  if (n_steps == 0) return out;

  const bool skip_potential = v.all_zero(); // e^{-i*0} == 1 exactly; skipping is a no-op
  const auto phx = kinetic_phase_table(out.extent[0], out.dx, out.mass, out.hbar, dt);
  std::vector<std::complex<double>> phy;
  if (out.dims == 2)
    phy = kinetic_phase_table(out.extent[1], out.dx, out.mass, out.hbar, dt);
  std::vector<std::complex<double>> vhalf;
  if (!skip_potential) vhalf = potential_phase_table(v, out.hbar, 0.5 * dt);

  for (long long s = 0; s < n_steps; ++s) {
    if (!skip_potential) pointwise_multiply(out.amplitudes, vhalf);
    spectral_forward(out);
    apply_kinetic_phases(out, phx, phy);
    spectral_inverse(out);
    if (!skip_potential) pointwise_multiply(out.amplitudes, vhalf);
  }
  return out;
}

} // namespace

std::vector<std::string> WavefunctionGrid::validate() const {
  std::vector<std::string> errs;
  const auto power_of_two = [](int n) { return n >= 2 && (n & (n - 1)) == 0; };
  if (dims != 1 && dims != 2) errs.push_back("dims must be 1 or 2");
  if (!power_of_two(extent[0])) errs.push_back("extent[0] must be a power of two >= 2");
  if (dims == 2 && !power_of_two(extent[1]))
    errs.push_back("extent[1] must be a power of two >= 2 for 2D grids");
  if (dims == 1 && extent[1] != 1) errs.push_back("extent[1] must be 1 for 1D grids");
  if (!(dx > 0.0)) errs.push_back("dx must be > 0");
  if (!(mass > 0.0)) errs.push_back("mass must be > 0");
  if (!(hbar > 0.0)) errs.push_back("hbar must be > 0");
  if (amplitudes.size() != total_points())
    errs.push_back("amplitude array length does not match extents");
  return errs;
}

void WavefunctionGrid::ensure_valid() const {
  const auto errs = validate();
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid wavefunction grid:";
  for (const auto& e : errs) os << " [" << e << "]";
  throw std::invalid_argument(os.str());
}

WavefunctionGrid gaussian_packet(int points, double dx, double mass, double hbar,
                                 double center, double sigma, double momentum) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be > 0");
  WavefunctionGrid psi;
  psi.dims = 1;
  psi.extent = {points, 1};
  psi.dx = dx;
  psi.mass = mass;
  psi.hbar = hbar;
  psi.amplitudes.resize(static_cast<std::size_t>(points));
  psi.ensure_valid();
  for (int i = 0; i < points; ++i) {
    const double x = psi.coordinate(i, 0);
    const double envelope = std::exp(-(x - center) * (x - center) / (4.0 * sigma * sigma));
    const double phase = momentum * x / hbar;
    psi.amplitudes[static_cast<std::size_t>(i)] =
        envelope * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  const double scale = 1.0 / std::sqrt(psi.norm_sq());
  for (auto& z : psi.amplitudes) z *= scale;
  return psi;
}

WavefunctionGrid split_step(const WavefunctionGrid& psi, const PotentialGrid& v, double dt) {
  check_shapes(psi, v);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  return evolve_steps(psi, v, dt, 1);
}

WavefunctionGrid evolve_unitary(const WavefunctionGrid& psi, const PotentialGrid& v,
                                double duration, double dt) {
  check_shapes(psi, v);
  const long long n = checked_step_count(duration, dt);
  return evolve_steps(psi, v, dt, n);
}

double energy_expectation(const WavefunctionGrid& psi, const PotentialGrid& v) {
  check_shapes(psi, v);
  WavefunctionGrid hat = psi;
  spectral_forward(hat);
  const int nx = psi.extent[0];
  const int ny = psi.extent[1];
  const double npoints = static_cast<double>(psi.total_points());

  double kinetic = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const double kx = axis_momentum(ix, nx, psi.dx);
      const double ky = psi.dims == 2 ? axis_momentum(iy, ny, psi.dx) : 0.0;
      const auto& z = hat.amplitudes[static_cast<std::size_t>(iy) * nx + ix];
      const double mag2 = z.real() * z.real() + z.imag() * z.imag();
      kinetic += (psi.hbar * psi.hbar * (kx * kx + ky * ky) / (2.0 * psi.mass)) * mag2;
    }
  kinetic *= psi.cell() / npoints; // Parseval weight for the unscaled transform

  double potential = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const auto& z = psi.amplitudes[i];
    potential += v.values[i] * (z.real() * z.real() + z.imag() * z.imag());
  }
  potential *= psi.cell();
  return kinetic + potential;
}

std::pair<WavefunctionGrid, std::vector<HitEvent>> evolve_with_collapse(
    const WavefunctionGrid& psi, const PotentialGrid& v, double duration, double dt,
    const CollapseParams& params, std::uint64_t seed) {
  check_shapes(psi, v);
  params.ensure_valid();
  const long long n = checked_step_count(duration, dt);

  Rng rng(seed);
  const double rate = params.effective_rate();
  std::vector<double> raw_times;
  if (rate > 0.0) {
    raw_times = params.interval_mode == CollapseParams::IntervalMode::Fixed
                    ? fixed_hit_times(rate, duration)
                    : sample_hit_times(rate, duration, rng);
  }

  // Snap to the nearest step boundary (bias <= dt/2). Times are already
  // ascending, and rounding preserves that; hits sharing a boundary apply
  // in draw order.
  std::vector<long long> hit_steps;
  hit_steps.reserve(raw_times.size());
  for (const double t : raw_times) {
    long long k = std::llround(t / dt);
    if (k < 0) k = 0;
    if (k > n) k = n;
    hit_steps.push_back(k);
  }

  WavefunctionGrid cur = psi;
  std::vector<HitEvent> log;
  log.reserve(hit_steps.size());
  long long done = 0;
  for (const long long k : hit_steps) {
    cur = evolve_steps(cur, v, dt, k - done);
    done = k;
    int attempts = 0;
    for (;;) {
      ++attempts;
      const auto z = sample_hit_center(cur, params.r_c, rng);
      try {
        cur = apply_hit(cur, z, params.r_c);
        HitEvent ev;
        ev.t = static_cast<double>(k) * dt;
        ev.center = z;
        log.push_back(ev);
        break;
      } catch (const DegenerateHit&) {
        if (attempts >= 100) throw TrajectoryAborted(attempts);
      }
    }
  }
  cur = evolve_steps(cur, v, dt, n - done);
  return {std::move(cur), std::move(log)};
}

} // namespace sic
