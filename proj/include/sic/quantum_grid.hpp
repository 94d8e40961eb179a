#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sic/collapse.hpp"
#include "sic/wavefunction.hpp"

namespace sic {

class TrajectoryAborted : public std::runtime_error {
 public:
  explicit TrajectoryAborted(int attempts)
      : std::runtime_error("trajectory aborted: hit-center resampling failed " +
                           std::to_string(attempts) +
                           " times (state norm concentrated below envelope floor)"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// One Strang split step: half potential, full spectral kinetic, half
// potential. Unitary by construction; norm preserved to rounding.
WavefunctionGrid split_step(const WavefunctionGrid& psi, const PotentialGrid& v, double dt);

// n = T/dt split steps. T must be an integer multiple of dt (checked, no
// silent rounding; tolerance 1e-9 relative covers only decimal-literal
// noise). Every step applies identical per-step phase tables, so
// evolve(T1) followed by evolve(T2) is bit-identical to evolve(T1 + T2).
WavefunctionGrid evolve_unitary(const WavefunctionGrid& psi, const PotentialGrid& v,
                                double duration, double dt);

// <psi| p^2/2m + V |psi> via the spectral kinetic term.
double energy_expectation(const WavefunctionGrid& psi, const PotentialGrid& v);

// Stochastic trajectory: Poisson (or fixed-interval) hit times on [0, T]
// snapped to the nearest step boundary (bias <= dt/2, documented), unitary
// segments between hits, and a sampled localization at each hit. A
// degenerate hit center is resampled up to 100 times before the trajectory
// aborts. rate == 0 runs the identical code path as evolve_unitary and
// returns an empty log.
std::pair<WavefunctionGrid, std::vector<HitEvent>> evolve_with_collapse(
    const WavefunctionGrid& psi, const PotentialGrid& v, double duration, double dt,
    const CollapseParams& params, std::uint64_t seed);

} // namespace sic
