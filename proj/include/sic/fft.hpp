#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sic {

// Iterative radix-2 decimation-in-time transform with precomputed bit
// reversal and per-stage twiddle tables. Kept in-repo instead of binding an
// external FFT library: results must be byte-identical across runs and
// worker counts, so no plan-state, no alignment-dependent algorithm
// selection, and no hidden threading are wanted. Grids are powers of two by
// contract.
class SpectralPlan {
 public:
  explicit SpectralPlan(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
      throw std::invalid_argument("SpectralPlan: size must be a power of two");
    rev_.resize(n);
    std::size_t bits = 0;
    while ((static_cast<std::size_t>(1) << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (static_cast<std::size_t>(1) << b)) r |= static_cast<std::size_t>(1) << (bits - 1 - b);
      rev_[i] = r;
    }
    tw_.resize(n > 1 ? n - 1 : 0);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      for (std::size_t j = 0; j < half; ++j) {
        const double ang = -two_pi * static_cast<double>(j) / static_cast<double>(len);
        tw_[half - 1 + j] = std::complex<double>(std::cos(ang), std::sin(ang));
      }
    }
  }

  std::size_t size() const { return n_; }

  // Unscaled forward transform: X_k = sum_x data[x] e^{-2 pi i k x / n}.
  void forward(std::complex<double>* data) const { run(data, false); }

  // Inverse transform scaled by 1/n, so inverse(forward(x)) == x up to
  // rounding. 1/n is a power of two, hence the scaling itself is exact.
  void inverse(std::complex<double>* data) const { run(data, true); }

 private:
  void run(std::complex<double>* data, bool conj) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i)
      if (rev_[i] > i) std::swap(data[i], data[rev_[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::complex<double>* stage = &tw_[half - 1];
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const std::complex<double> w = conj ? std::conj(stage[j]) : stage[j];
          std::complex<double>& lo = data[start + j];
          std::complex<double>& hi = data[start + j + half];
          const std::complex<double> v(hi.real() * w.real() - hi.imag() * w.imag(),
                                       hi.real() * w.imag() + hi.imag() * w.real());
          hi = lo - v;
          lo += v;
        }
      }
    }
    if (conj) {
      const double scale = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<std::complex<double>> tw_;
};

} // namespace sic
