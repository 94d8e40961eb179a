#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sic/collapse.hpp"
#include "sic/quantum_grid.hpp"

namespace sic {

// Transverse-coordinate double-slit setup. The state just downstream of the
// slits is an equal superposition of Gaussian paths exp(-(x -+ d/2)^2/(2w^2))
// at zero momentum; the screen reading is the position density after free
// flight for flight_time on the same grid.
struct DoubleSlitGeometry {
  double separation = 80.0;  // d, path-center distance
  double width = 8.0;        // w, Gaussian width of each path amplitude
  double flight_time = 2048.0;
  int grid_points = 4096;
  double dx = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  bool operator==(const DoubleSlitGeometry&) const = default;

  // Far-field fringe period on the screen: 2 pi hbar T / (m d).
  double fringe_spacing() const {
    return 2.0 * 3.1415926535897932384626433832795 * hbar * flight_time /
           (mass * separation);
  }

  std::vector<std::string> validate() const;
  void ensure_valid() const;
};

struct VisibilityResult {
  double v = 0.0;
  double stderr_ = 0.0;
  double mean_hits = 0.0;
  long long n_trajectories = 0;
  bool low_contrast = false;
};

// Outcome of the fringe-contrast extraction alone (no ensemble statistics).
struct VisibilityScan {
  double v = 0.0;
  bool low_contrast = false;
};

struct HitRecord {
  long long trajectory = 0;
  double t = 0.0;
  double center = 0.0;
};

struct EnsembleOptions {
  // Time steps for the flight; 0 selects the smallest power of two >= 128
  // with rate * dt <= 0.01 (the hit-snapping accuracy policy).
  long long steps = 0;
  // OpenMP worker count for the trajectory loop; 0 = runtime default.
  // Results are byte-identical for every setting by construction.
  int threads = 0;
};

struct EnsembleResult {
  std::vector<double> mean_density; // |psi_T|^2 averaged over trajectories
  double density_integral = 0.0;    // sum(mean_density) * dx
  VisibilityResult visibility;
  std::vector<HitRecord> hit_log;   // ordered by trajectory id
  long long aborted = 0;
  long long steps_used = 0;
};

struct SweepRow {
  double rate = 0.0;
  double lambda_t = 0.0;
  double v = 0.0;
  double stderr_ = 0.0;
  double mean_hits = 0.0;
  long long steps_used = 0;
};

WavefunctionGrid prepare_two_slit_state(const DoubleSlitGeometry& geom);

// One path only (which = -1 or +1); used to build the incoherent reference.
WavefunctionGrid prepare_single_slit_state(const DoubleSlitGeometry& geom, int which);

// Fringe contrast (I_max - I_min)/(I_max + I_min) of the central fringe and
// its adjacent minima, both located through the analytic fringe spacing.
// The local envelope (moving average over exactly one fringe period) is
// divided out first so envelope curvature does not read as contrast.
// Structureless densities return the low-contrast flag instead of failing.
VisibilityScan visibility(const std::vector<double>& density, const DoubleSlitGeometry& geom);

long long auto_step_count(double rate, double flight_time);

// n stochastic trajectories from (master_seed, trajectory index); densities
// averaged with a fixed batch layout whose serial in-order merge makes the
// result independent of worker count. Aborted trajectories are excluded and
// reported; more than 1% aborted fails the ensemble.
EnsembleResult run_ensemble(const DoubleSlitGeometry& geom, const CollapseParams& params,
                            long long n, std::uint64_t master_seed,
                            const EnsembleOptions& opts = {});

// One run_ensemble per rate on the shared geometry, rate j seeded from
// substream j of the master seed; rates must be sorted and non-negative.
std::vector<SweepRow> coherence_sweep(const DoubleSlitGeometry& geom,
                                      const CollapseParams& params_template,
                                      const std::vector<double>& rates, long long n,
                                      std::uint64_t master_seed,
                                      const EnsembleOptions& opts = {});

} // namespace sic
