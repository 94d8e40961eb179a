// Timing harness comparing the optimized lattice kernels against the serial
// reference implementation, plus an end-to-end ensemble throughput figure.
// Numbers are medians of repeated wall-clock samples; pass --quick for a
// shorter run. On a single-core host the OpenMP ensemble speedup is ~1 by
// construction (results are byte-identical at any worker count).
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "sic/experiments.hpp"
#include "sic/rng.hpp"
#include "sic/ym_lattice.hpp"
#include "sic/ym_reference.hpp"

using namespace sic;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double median_seconds(int reps, const std::function<void()>& fn) {
  std::vector<double> samples;
  samples.reserve(reps);
  for (int r = 0; r < reps; ++r) samples.push_back(time_once(fn));
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

void report(const char* name, double ref_s, double opt_s, const char* unit) {
  std::printf("%-34s reference %10.3f ms/%s   kernels %10.3f ms/%s   speedup %5.2fx\n",
              name, 1e3 * ref_s, unit, 1e3 * opt_s, unit, ref_s / opt_s);
}

FieldConfiguration random_fields(const LatticeSpec& spec, std::uint64_t seed) {
  FieldConfiguration cfg = zero_configuration(spec);
  Rng rng(seed);
  for (double& x : cfg.A) x = 0.3 * rng.uniform_symmetric();
  for (double& x : cfg.E) x = 0.3 * rng.uniform_symmetric();
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const int reps = quick ? 3 : 7;

  LatticeSpec spec;
  spec.group = GroupKind::SU3;
  spec.spatial_dims = 3;
  spec.sites_per_dim = quick ? 8 : 12;
  spec.coupling = 0.5;
  const FieldConfiguration cfg = random_fields(spec, derive_stream_seed(11, 0));
  std::printf("lattice: SU(3), %dx%dx%d, %zu sites\n", spec.sites_per_dim,
              spec.sites_per_dim, spec.sites_per_dim, spec.site_count());

  {
    Evolver ev(spec);
    // Warm the scratch buffers so allocation is not measured.
    FieldConfiguration warm = cfg;
    ev.step(warm);

    const double ref_step = median_seconds(reps, [&] {
      FieldConfiguration c = cfg;
      c = ym_ref::step(c, spec);
    });
    const double opt_step = median_seconds(reps, [&] {
      FieldConfiguration c = cfg;
      ev.step(c);
    });
    report("leapfrog step", ref_step, opt_step, "step");

    const double ref_energy = median_seconds(reps, [&] { (void)ym_ref::total_energy(cfg, spec); });
    const double opt_energy = median_seconds(reps, [&] { (void)ev.energy(cfg); });
    report("energy breakdown", ref_energy, opt_energy, "call");

    const double ref_gauss = median_seconds(reps, [&] { (void)ym_ref::gauss_residual(cfg, spec); });
    const double opt_gauss = median_seconds(reps, [&] { (void)ev.gauss(cfg); });
    report("Gauss residual", ref_gauss, opt_gauss, "call");
  }

  {
    DoubleSlitGeometry geom;
    geom.grid_points = quick ? 1024 : 4096;
    geom.flight_time = quick ? 512 : 2048;
    CollapseParams params;
    params.rate = 1.0 / geom.flight_time;
    params.r_c = 8.0;
    const long long n = quick ? 20 : 100;

    EnsembleOptions one;
    one.threads = 1;
    EnsembleOptions many;
    many.threads = 0; // runtime default

    const double t1 = time_once([&] { (void)run_ensemble(geom, params, n, 42, one); });
    const double tn = time_once([&] { (void)run_ensemble(geom, params, n, 42, many); });
    std::printf("ensemble (%lld traj, lambda T = 1)  1 worker %8.1f ms   default workers %8.1f ms   speedup %5.2fx\n",
                n, 1e3 * t1, 1e3 * tn, t1 / tn);
    std::printf("note: outputs are byte-identical at every worker count; speedup tracks core count.\n");
  }

  return 0;
}
