#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace sic {

// Complex wavefunction on a centered periodic grid, 1D or 2D. Grid point
// (ix, iy) sits at ((ix - nx/2) dx, (iy - ny/2) dx); storage is x-fastest.
// Grid sizes are powers of two (spectral-transform constraint, documented).
struct WavefunctionGrid {
  int dims = 1;
  std::array<int, 2> extent{0, 1}; // extent[1] == 1 when dims == 1
  double dx = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<std::complex<double>> amplitudes;

  std::size_t total_points() const {
    return static_cast<std::size_t>(extent[0]) * static_cast<std::size_t>(extent[1]);
  }
  double cell() const { return dims == 2 ? dx * dx : dx; }
  double domain_length(int d) const { return extent[d] * dx; }
  double coordinate(int index, int d) const { return (index - extent[d] / 2) * dx; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& z : amplitudes) s += z.real() * z.real() + z.imag() * z.imag();
    return s * cell();
  }

  std::vector<std::string> validate() const;
  void ensure_valid() const; // throws std::invalid_argument listing all problems
};

struct PotentialGrid {
  std::array<int, 2> extent{0, 1};
  std::vector<double> values;

  static PotentialGrid zero_like(const WavefunctionGrid& psi) {
    PotentialGrid v;
    v.extent = psi.extent;
    v.values.assign(psi.total_points(), 0.0);
    return v;
  }
  bool all_zero() const {
    for (const double x : values)
      if (x != 0.0) return false;
    return true;
  }
};

// Unit-norm Gaussian packet exp(-(x-c)^2/(4 sigma^2) + i k.x) sampled on the
// grid and normalized discretely. sigma is the density standard deviation.
WavefunctionGrid gaussian_packet(int points, double dx, double mass, double hbar,
                                 double center, double sigma, double momentum);

} // namespace sic
