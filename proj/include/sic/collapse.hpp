#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sic/rng.hpp"
#include "sic/wavefunction.hpp"

namespace sic {

// hbar in GeV*seconds, for converting a nonlinear energy in GeV to a
// decoherence time in seconds.
inline constexpr double kHbarGeVSeconds = 6.582119569e-25;

// Intrinsic decoherence time tau = hbar / E_nl. Zero energy returns +inf
// (abelian case: no nonlinear energy, no collapse). Negative energy rejected.
double decoherence_time(double e_nl, double hbar);

struct CollapseParams {
  enum class RateSource { FixedRate, DerivedFromEnergy };
  enum class IntervalMode { Poisson, Fixed };

  double hbar = 1.0;            // natural units 1; physical kHbarGeVSeconds
  RateSource rate_source = RateSource::FixedRate;
  double rate = 0.0;            // 1/time, used when FixedRate
  double e_nl = 0.0;            // energy, used when DerivedFromEnergy
  double r_c = 1.0;             // localization width, grid length units
  IntervalMode interval_mode = IntervalMode::Poisson;

  // FixedRate -> rate; DerivedFromEnergy -> e_nl / hbar (exactly 0 when
  // e_nl == 0, the infinite-tau case).
  double effective_rate() const;

  std::vector<std::string> validate() const;
  void ensure_valid() const;
};

struct HitEvent {
  double t = 0.0;
  std::array<double, 2> center{0.0, 0.0}; // center[1] == 0 for 1D grids
};

class DegenerateHit : public std::runtime_error {
 public:
  DegenerateHit() : std::runtime_error(
      "degenerate hit: localized norm below 1e-300, resample the center") {}
};

// Ordered hit times in (0, T]: homogeneous Poisson via exponential
// inter-arrival draws. rate == 0 gives an empty list and consumes no draws.
std::vector<double> sample_hit_times(double rate, double duration, Rng& rng);

// Deterministic-interval variant: hits at k/rate for k = 1, 2, ... <= T.
std::vector<double> fixed_hit_times(double rate, double duration);

// Draws the localization center with density p(z) = ||L_z psi||^2 where L_z
// is the Gaussian multiplier of width r_c: a grid cell is drawn with its
// probability mass, then displaced by a Gaussian of width r_c/sqrt(2) per
// dimension and wrapped into the periodic domain. With the wrapped envelope
// used by apply_hit this sampler realizes p(z) exactly on the torus.
// Rejects unnormalized psi (|norm^2 - 1| > 1e-9).
std::array<double, 2> sample_hit_center(const WavefunctionGrid& psi, double r_c, Rng& rng);

// psi'(x) = N(x; z, r_c) psi(x), renormalized, where N^2 is the periodic
// image sum of the squared Gaussian envelope (pi r_c^2)^(-1/2)
// exp(-(x-z)^2/r_c^2) in each dimension. Throws DegenerateHit when the
// surviving norm is below 1e-300.
WavefunctionGrid apply_hit(const WavefunctionGrid& psi, const std::array<double, 2>& z,
                           double r_c);

} // namespace sic
