#include "sic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sic {
namespace {

WavefunctionGrid blank_grid(const DoubleSlitGeometry& geom) {
  WavefunctionGrid psi;
  psi.dims = 1;
  psi.extent = {geom.grid_points, 1};
  psi.dx = geom.dx;
  psi.mass = geom.mass;
  psi.hbar = geom.hbar;
  psi.amplitudes.assign(static_cast<std::size_t>(geom.grid_points), {0.0, 0.0});
  return psi;
}

void add_path(WavefunctionGrid& psi, double center, double width) {
  for (int i = 0; i < psi.extent[0]; ++i) {
    const double x = psi.coordinate(i, 0);
    psi.amplitudes[static_cast<std::size_t>(i)] +=
        std::exp(-(x - center) * (x - center) / (2.0 * width * width));
  }
}

void normalize(WavefunctionGrid& psi) {
  const double scale = 1.0 / std::sqrt(psi.norm_sq());
  for (auto& z : psi.amplitudes) z *= scale;
}

std::vector<double> density_of(const WavefunctionGrid& psi) {
  std::vector<double> out(psi.total_points());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& z = psi.amplitudes[i];
    out[i] = z.real() * z.real() + z.imag() * z.imag();
  }
  return out;
}

} // namespace

std::vector<std::string> DoubleSlitGeometry::validate() const {
  std::vector<std::string> errs;
  const auto power_of_two = [](int n) { return n >= 2 && (n & (n - 1)) == 0; };
  if (!(dx > 0.0)) errs.push_back("dx must be > 0");
  if (!(mass > 0.0)) errs.push_back("mass must be > 0");
  if (!(hbar > 0.0)) errs.push_back("hbar must be > 0");
  if (!(flight_time > 0.0)) errs.push_back("flight_time must be > 0");
  if (!power_of_two(grid_points) || grid_points < 64)
    errs.push_back("grid_points must be a power of two >= 64");
  if (!(separation > 2.0 * width))
    errs.push_back("separation must exceed twice the slit width (resolved slits)");
  if (dx > 0.0) {
    if (separation < 4.0 * dx) errs.push_back("separation must be >= 4*dx (grid-resolved)");
    if (width < 4.0 * dx) errs.push_back("width must be >= 4*dx (grid-resolved)");
  }
  return errs;
}

void DoubleSlitGeometry::ensure_valid() const {
  const auto errs = validate();
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid double-slit geometry:";
  for (const auto& e : errs) os << " [" << e << "]";
  throw std::invalid_argument(os.str());
}

WavefunctionGrid prepare_two_slit_state(const DoubleSlitGeometry& geom) {
  geom.ensure_valid();
  WavefunctionGrid psi = blank_grid(geom);
  add_path(psi, -0.5 * geom.separation, geom.width);
  add_path(psi, +0.5 * geom.separation, geom.width);
  normalize(psi);
  return psi;
}

WavefunctionGrid prepare_single_slit_state(const DoubleSlitGeometry& geom, int which) {
  geom.ensure_valid();
  if (which != -1 && which != 1)
    throw std::invalid_argument("prepare_single_slit_state: which must be -1 or +1");
  WavefunctionGrid psi = blank_grid(geom);
  add_path(psi, 0.5 * which * geom.separation, geom.width);
  normalize(psi);
  return psi;
}

VisibilityScan visibility(const std::vector<double>& density, const DoubleSlitGeometry& geom) {
  geom.ensure_valid();
  const int n = geom.grid_points;
  if (density.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("visibility: density length does not match geometry grid");
  double integral = 0.0;
  double peak = 0.0;
  for (const double v : density) {
    if (!(v >= -1e-12)) throw std::invalid_argument("visibility: density must be non-negative");
    integral += v;
    peak = std::max(peak, v);
  }
  integral *= geom.dx;
  if (std::abs(integral - 1.0) > 1e-3)
    throw std::invalid_argument("visibility: density must integrate to approximately 1");

  const double spacing = geom.fringe_spacing();
  VisibilityScan out;
  if (spacing < 4.0 * geom.dx || spacing > 0.25 * n * geom.dx) {
    out.low_contrast = true; // fringe period unresolvable on this grid
    return out;
  }

  // Divide out the local envelope: a cyclic moving average over exactly one
  // fringe period cancels the oscillating term and keeps the envelope.
  const long long h = std::max<long long>(1, std::llround(spacing / (2.0 * geom.dx)));
  std::vector<double> prefix(static_cast<std::size_t>(3 * n) + 1, 0.0);
  for (long long i = 0; i < 3 * static_cast<long long>(n); ++i)
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + density[static_cast<std::size_t>(i % n)];
  const double window = static_cast<double>(2 * h + 1);
  const double floor = 1e-12 * peak;
  std::vector<double> ratio(static_cast<std::size_t>(n), 1.0);
  for (long long i = 0; i < n; ++i) {
    const long long lo = n + i - h;
    const long long hi = n + i + h + 1;
    const double avg =
        (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) / window;
    if (avg > floor) ratio[static_cast<std::size_t>(i)] = density[static_cast<std::size_t>(i)] / avg;
  }

  const long long c = n / 2; // x = 0 lives exactly at this index
  const auto clamp_index = [&](long long i) {
    return std::min<long long>(n - 1, std::max<long long>(0, i));
  };
  const long long wmax = std::llround(0.55 * spacing / geom.dx);
  const long long o1 = std::llround(0.25 * spacing / geom.dx);
  const long long o2 = std::llround(0.75 * spacing / geom.dx);

  double imax = 0.0;
  for (long long i = clamp_index(c - wmax); i <= clamp_index(c + wmax); ++i)
    imax = std::max(imax, ratio[static_cast<std::size_t>(i)]);
  double imin_left = std::numeric_limits<double>::infinity();
  for (long long i = clamp_index(c - o2); i <= clamp_index(c - o1); ++i)
    imin_left = std::min(imin_left, ratio[static_cast<std::size_t>(i)]);
  double imin_right = std::numeric_limits<double>::infinity();
  for (long long i = clamp_index(c + o1); i <= clamp_index(c + o2); ++i)
    imin_right = std::min(imin_right, ratio[static_cast<std::size_t>(i)]);
  const double imin = 0.5 * (imin_left + imin_right);

  const double denom = imax + imin;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    out.low_contrast = true;
    return out;
  }
  double v = (imax - imin) / denom;
  if (v < 0.0) {
    v = 0.0;
    out.low_contrast = true;
  }
  if (v > 1.0) v = 1.0;
  if (imax - imin <= 1e-4 * denom) out.low_contrast = true;
  out.v = v;
  return out;
}

long long auto_step_count(double rate, double flight_time) {
  long long steps = 128;
  const double needed = rate * flight_time / 0.01; // keep rate * dt <= 0.01
  while (static_cast<double>(steps) < needed && steps < (1LL << 24)) steps <<= 1;
  return steps;
}

EnsembleResult run_ensemble(const DoubleSlitGeometry& geom, const CollapseParams& params,
                            long long n, std::uint64_t master_seed,
                            const EnsembleOptions& opts) {
  geom.ensure_valid();
  params.ensure_valid();
  if (n < 1) throw std::invalid_argument("run_ensemble: n must be >= 1");

  const double rate = params.effective_rate();
  const long long steps = opts.steps > 0 ? opts.steps : auto_step_count(rate, geom.flight_time);
  const double dt = geom.flight_time / static_cast<double>(steps);

  const WavefunctionGrid psi0 = prepare_two_slit_state(geom);
  const PotentialGrid vzero = PotentialGrid::zero_like(psi0);
  const std::size_t npts = psi0.total_points();

  // rate == 0 consumes no randomness, so every trajectory is the same
  // unitary flight; compute it once and push the identical density through
  // the unchanged aggregation arithmetic below.
  std::vector<double> shared_density;
  if (rate == 0.0) {
    const auto one = evolve_with_collapse(psi0, vzero, geom.flight_time, dt, params,
                                          derive_stream_seed(master_seed, 0));
    shared_density = density_of(one.first);
  }

  // Fixed batch layout; each batch accumulates serially in trajectory order
  // and batches merge serially in index order, so the totals are identical
  // for every worker count.
  const long long nbatch = std::min<long long>(20, n);
  struct Batch {
    std::vector<double> density;
    std::vector<HitRecord> hits;
    long long included = 0;
    long long aborted = 0;
    long long hit_count = 0;
  };
  std::vector<Batch> batches(static_cast<std::size_t>(nbatch));

#ifdef _OPENMP
  const int nthreads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
  for (long long b = 0; b < nbatch; ++b) {
    Batch& batch = batches[static_cast<std::size_t>(b)];
    batch.density.assign(npts, 0.0);
    const long long lo = b * n / nbatch;
    const long long hi = (b + 1) * n / nbatch;
    for (long long i = lo; i < hi; ++i) {
      if (rate == 0.0) {
        for (std::size_t k = 0; k < npts; ++k) batch.density[k] += shared_density[k];
        ++batch.included;
        continue;
      }
      try {
        const auto traj = evolve_with_collapse(psi0, vzero, geom.flight_time, dt, params,
                                               derive_stream_seed(master_seed,
                                                                  static_cast<std::uint64_t>(i)));
        const auto& amps = traj.first.amplitudes;
        for (std::size_t k = 0; k < npts; ++k)
          batch.density[k] += amps[k].real() * amps[k].real() + amps[k].imag() * amps[k].imag();
        ++batch.included;
        batch.hit_count += static_cast<long long>(traj.second.size());
        for (const auto& ev : traj.second)
          batch.hits.push_back({i, ev.t, ev.center[0]});
      } catch (const TrajectoryAborted&) {
        ++batch.aborted;
      }
    }
  }

  EnsembleResult res;
  res.steps_used = steps;
  std::vector<double> total(npts, 0.0);
  long long included = 0, hit_count = 0;
  for (const auto& batch : batches) {
    for (std::size_t k = 0; k < npts; ++k) total[k] += batch.density[k];
    included += batch.included;
    res.aborted += batch.aborted;
    hit_count += batch.hit_count;
    res.hit_log.insert(res.hit_log.end(), batch.hits.begin(), batch.hits.end());
  }
  if (res.aborted * 100 > n)
    throw std::runtime_error("run_ensemble: more than 1% of trajectories aborted (" +
                             std::to_string(res.aborted) + " of " + std::to_string(n) + ")");
  if (included == 0) throw std::runtime_error("run_ensemble: no trajectories completed");

  res.mean_density.assign(npts, 0.0);
  const double inv = 1.0 / static_cast<double>(included);
  for (std::size_t k = 0; k < npts; ++k) res.mean_density[k] = total[k] * inv;
  for (const double v : res.mean_density) res.density_integral += v;
  res.density_integral *= geom.dx;

  const VisibilityScan scan = visibility(res.mean_density, geom);
  res.visibility.v = scan.v;
  res.visibility.low_contrast = scan.low_contrast;
  res.visibility.n_trajectories = included;
  res.visibility.mean_hits = static_cast<double>(hit_count) / static_cast<double>(included);

  // Standard error from batch-mean visibilities.
  std::vector<double> batch_v;
  for (const auto& batch : batches) {
    if (batch.included == 0) continue;
    std::vector<double> mean(npts);
    const double bi = 1.0 / static_cast<double>(batch.included);
    for (std::size_t k = 0; k < npts; ++k) mean[k] = batch.density[k] * bi;
    batch_v.push_back(visibility(mean, geom).v);
  }
  if (batch_v.size() >= 2) {
    double m = 0.0;
    for (const double v : batch_v) m += v;
    m /= static_cast<double>(batch_v.size());
    double var = 0.0;
    for (const double v : batch_v) var += (v - m) * (v - m);
    var /= static_cast<double>(batch_v.size() - 1);
    res.visibility.stderr_ = std::sqrt(var / static_cast<double>(batch_v.size()));
  }
  return res;
}

std::vector<SweepRow> coherence_sweep(const DoubleSlitGeometry& geom,
                                      const CollapseParams& params_template,
                                      const std::vector<double>& rates, long long n,
                                      std::uint64_t master_seed,
                                      const EnsembleOptions& opts) {
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (rates[j] < 0.0)
      throw std::invalid_argument("coherence_sweep: rates must be non-negative");
    if (j > 0 && rates[j] < rates[j - 1])
      throw std::invalid_argument("coherence_sweep: rates must be sorted ascending");
  }
  std::vector<SweepRow> rows;
  rows.reserve(rates.size());
  for (std::size_t j = 0; j < rates.size(); ++j) {
    CollapseParams params = params_template;
    params.rate_source = CollapseParams::RateSource::FixedRate;
    params.rate = rates[j];
    const auto res = run_ensemble(geom, params, n,
                                  derive_stream_seed(master_seed, static_cast<std::uint64_t>(j)),
                                  opts);
    SweepRow row;
    row.rate = rates[j];
    row.lambda_t = rates[j] * geom.flight_time;
    row.v = res.visibility.v;
    row.stderr_ = res.visibility.stderr_;
    row.mean_hits = res.visibility.mean_hits;
    row.steps_used = res.steps_used;
    rows.push_back(row);
  }
  return rows;
}

} // namespace sic
