#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>

#include "sic/collapse.hpp"
#include "sic/quantum_grid.hpp"

using namespace sic;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

WavefunctionGrid uniform_state(int n) {
  WavefunctionGrid psi;
  psi.extent = {n, 1};
  psi.amplitudes.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return psi;
}

WavefunctionGrid delta_state(int n, int cell_index) {
  WavefunctionGrid psi;
  psi.extent = {n, 1};
  psi.amplitudes.assign(n, 0.0);
  psi.amplitudes[cell_index] = 1.0; // dx = 1: unit norm
  return psi;
}

double circular_resultant(const std::vector<double>& zs, double length) {
  double cs = 0.0, sn = 0.0;
  for (const double z : zs) {
    cs += std::cos(2.0 * kPi * z / length);
    sn += std::sin(2.0 * kPi * z / length);
  }
  return std::hypot(cs, sn) / zs.size();
}

} // namespace

TEST_CASE("decoherence time reproduces hbar / E and its scaling") {
  const double tau = decoherence_time(0.2, kHbarGeVSeconds);
  CHECK(tau == doctest::Approx(3.2910597845e-24).epsilon(1e-10));
  CHECK(tau >= 1e-24);
  CHECK(tau <= 1e-23);
  // doubling the energy halves the time, bit-exactly (scaling by 2 is exact)
  CHECK(decoherence_time(0.4, kHbarGeVSeconds) == tau / 2.0);
  CHECK(decoherence_time(0.2, 1.0) == 5.0);
  CHECK(std::isinf(decoherence_time(0.0, kHbarGeVSeconds)));
  CHECK_THROWS_AS((void)decoherence_time(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)decoherence_time(0.2, 0.0), std::invalid_argument);
}

TEST_CASE("effective rate: fixed passes through, derived is E / hbar") {
  CollapseParams p;
  p.rate_source = CollapseParams::RateSource::FixedRate;
  p.rate = 0.125;
  CHECK(p.effective_rate() == 0.125);
  p.rate_source = CollapseParams::RateSource::DerivedFromEnergy;
  p.e_nl = 0.2;
  p.hbar = kHbarGeVSeconds;
  CHECK(p.effective_rate() == doctest::Approx(0.2 / kHbarGeVSeconds).epsilon(1e-14));
  p.e_nl = 0.0;
  CHECK(p.effective_rate() == 0.0); // exactly: infinite tau, no hits
}

TEST_CASE("params validation") {
  CollapseParams p;
  CHECK(p.validate().empty());
  p.rate = -1.0;
  CHECK(!p.validate().empty());
  p = CollapseParams{};
  p.e_nl = -0.5;
  CHECK(!p.validate().empty());
  p = CollapseParams{};
  p.r_c = 0.0;
  CHECK(!p.validate().empty());
  p.r_c = -2.0;
  CHECK_THROWS_AS(p.ensure_valid(), std::invalid_argument);
  p = CollapseParams{};
  p.hbar = 0.0;
  CHECK(!p.validate().empty());
}

TEST_CASE("zero rate draws no hit times and consumes no randomness") {
  Rng a(55), b(55);
  const auto times = sample_hit_times(0.0, 100.0, a);
  CHECK(times.empty());
  CHECK(a.raw() == b.raw()); // generator untouched
}

TEST_CASE("hit times are sorted, in range, with Poisson statistics") {
  const double rate = 0.2, duration = 25.0; // lambda T = 5
  const int n = 10000;
  long long total = 0;
  double sum_sq = 0.0;
  for (int s = 0; s < n; ++s) {
    Rng rng(derive_stream_seed(31337, s));
    const auto times = sample_hit_times(rate, duration, rng);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(times[i] > 0.0);
      CHECK(times[i] <= duration);
      if (i > 0) CHECK(times[i] > times[i - 1]);
    }
    total += static_cast<long long>(times.size());
    sum_sq += static_cast<double>(times.size()) * times.size();
  }
  const double mean = static_cast<double>(total) / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - 5.0) <= 3.0 * std::sqrt(5.0 / n));   // ~[4.93, 5.07]
  CHECK(var >= 4.6);
  CHECK(var <= 5.4);
}

TEST_CASE("mean inter-arrival time is 1 / rate") {
  // Long window so the censoring bias at the interval end (one dropped
  // partial gap out of ~lambda T of them) stays well inside the band.
  const double rate = 0.5, duration = 5000.0;
  double sum = 0.0;
  long long count = 0;
  for (int s = 0; s < 50; ++s) {
    Rng rng(derive_stream_seed(999, s));
    const auto times = sample_hit_times(rate, duration, rng);
    double prev = 0.0;
    for (const double t : times) {
      sum += t - prev;
      prev = t;
      ++count;
    }
  }
  CHECK(count > 100000);
  const double mean_gap = sum / count;
  CHECK(mean_gap == doctest::Approx(1.0 / rate).epsilon(0.02));
}

TEST_CASE("fixed interval times are k / rate") {
  const auto times = fixed_hit_times(2.0 / 64.0, 64.0);
  REQUIRE(times.size() == 2);
  CHECK(times[0] == doctest::Approx(32.0));
  CHECK(times[1] == doctest::Approx(64.0));
  CHECK(fixed_hit_times(0.0, 100.0).empty());
  const auto three = fixed_hit_times(3.0 / 10.0, 10.0);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("hit centers around a point mass are Gaussian with width r_c / sqrt(2)") {
  const int n = 256;
  const auto psi = delta_state(n, n / 2 + 10); // located at x = 10
  const double r_c = 6.0;
  Rng rng(2718);
  const int draws = 20000;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto z = sample_hit_center(psi, r_c, rng);
    mean += z[0];
    m2 += z[0] * z[0];
  }
  mean /= draws;
  const double var = m2 / draws - mean * mean;
  const double want_sd = r_c / std::sqrt(2.0);
  CHECK(std::abs(mean - 10.0) <= 3.0 * want_sd / std::sqrt(draws));
  CHECK(std::sqrt(var) == doctest::Approx(want_sd).epsilon(0.03));
}

TEST_CASE("hit centers split evenly between two symmetric peaks") {
  const int n = 512;
  WavefunctionGrid psi;
  psi.extent = {n, 1};
  psi.amplitudes.assign(n, 0.0);
  const double d = 80.0, w = 8.0;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = psi.coordinate(i, 0);
    const double g = std::exp(-(x - d / 2) * (x - d / 2) / (4 * w * w)) +
                     std::exp(-(x + d / 2) * (x + d / 2) / (4 * w * w));
    psi.amplitudes[i] = g;
    s += g * g;
  }
  for (auto& z : psi.amplitudes) z /= std::sqrt(s);

  Rng rng(31);
  const int draws = 20000;
  int right = 0;
  for (int i = 0; i < draws; ++i) {
    const auto z = sample_hit_center(psi, 8.0, rng);
    if (z[0] > 0.0) ++right;
  }
  const double frac = static_cast<double>(right) / draws;
  CHECK(std::abs(frac - 0.5) <= 3.0 * 0.5 / std::sqrt(draws));
}

TEST_CASE("hit centers on a uniform state are uniform on the torus") {
  const int n = 128;
  const auto psi = uniform_state(n);
  Rng rng(444);
  std::vector<double> zs(20000);
  for (auto& z : zs) z = sample_hit_center(psi, 5.0, rng)[0];
  for (const double z : zs) {
    CHECK(z >= -64.0);
    CHECK(z < 64.0);
  }
  CHECK(circular_resultant(zs, 128.0) <= 3.5 / std::sqrt(20000.0));
}

TEST_CASE("unnormalized states are rejected by the sampler") {
  auto psi = uniform_state(64);
  for (auto& z : psi.amplitudes) z *= 1.1;
  Rng rng(1);
  CHECK_THROWS_AS((void)sample_hit_center(psi, 3.0, rng), std::invalid_argument);
}

TEST_CASE("apply_hit returns a unit-norm state concentrated at the center") {
  auto psi = uniform_state(256);
  const auto out = apply_hit(psi, {13.0, 0.0}, 4.0);
  CHECK(std::abs(out.norm_sq() - 1.0) <= 1e-12);
  double near = 0.0;
  for (int i = 0; i < 256; ++i) {
    double d = std::abs(out.coordinate(i, 0) - 13.0);
    d = std::min(d, 256.0 - d);
    if (d <= 5.0 * 4.0) near += std::norm(out.amplitudes[i]);
  }
  CHECK(near >= 0.99);
}

TEST_CASE("a hit at the center of a narrow packet barely disturbs it") {
  // sigma << r_c: the envelope is flat across the packet, fidelity ~ 1
  const auto psi = gaussian_packet(512, 1.0, 1.0, 1.0, -20.0, 2.0, 0.0);
  const auto out = apply_hit(psi, {-20.0, 0.0}, 20.0);
  std::complex<double> ov = 0.0;
  for (int i = 0; i < 512; ++i)
    ov += std::conj(psi.amplitudes[i]) * out.amplitudes[i];
  CHECK(std::norm(ov * psi.cell()) >= 0.99);
}

TEST_CASE("degenerate hits are reported, not silently renormalized") {
  const auto psi = delta_state(64, 32);          // all mass at x = 0
  CHECK_THROWS_AS((void)apply_hit(psi, {31.0, 0.0}, 0.5), DegenerateHit);
}

TEST_CASE("hit-averaged density equals the pre-hit density (1e5 draws)") {
  // E_z[rho_hit] = rho: localization does not shift the ensemble density.
  // Binomial per-bin error at n draws: sd_i = sqrt(p_i (1 - p_i) / n) / cell.
  const int n = 64;
  const auto psi = gaussian_packet(n, 1.0, 1.0, 1.0, 3.0, 6.0, 0.0);
  const double r_c = 4.0;
  const int draws = 100000;
  Rng rng(60601);
  std::vector<double> acc(n, 0.0);
  for (int k = 0; k < draws; ++k) {
    const auto z = sample_hit_center(psi, r_c, rng);
    const auto out = apply_hit(psi, z, r_c);
    for (int i = 0; i < n; ++i) acc[i] += std::norm(out.amplitudes[i]);
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mean = acc[i] / draws;
    const double truth = std::norm(psi.amplitudes[i]);
    const double p = truth * psi.cell();
    const double sd = std::sqrt(std::max(p * (1.0 - p), 1e-12) / draws) / psi.cell();
    worst = std::max(worst, std::abs(mean - truth) / sd);
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("two-point superposition: per-hit coherence factor and the decay law") {
  // Two positions +-d/2 under the width-r_c localization operator. Averaging
  // over hit centers multiplies the off-diagonal element by exactly
  // f = exp(-d^2 / (4 r_c^2)); k Poisson hits give
  // sum_k P_k f^k = exp(-lambda T (1 - f)), which approaches exp(-lambda T)
  // only in the point-localization regime f -> 0.
  const double d = 80.0, r_c = 8.0; // the double-slit defaults: d = 10 w = 10 r_c
  const double f_analytic = std::exp(-d * d / (4.0 * r_c * r_c));

  // numeric integral of the normalized envelope product over centers
  const double x1 = -d / 2, x2 = d / 2;
  double f_num = 0.0;
  const double lo = -400.0, hi = 400.0;
  const int steps = 400000;
  const double h = (hi - lo) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double z = lo + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    const double e1 = std::exp(-(x1 - z) * (x1 - z) / (2.0 * r_c * r_c));
    const double e2 = std::exp(-(x2 - z) * (x2 - z) / (2.0 * r_c * r_c));
    f_num += w * e1 * e2;
  }
  f_num *= h / (std::sqrt(kPi) * r_c); // envelope^2 normalization
  CHECK(f_num == doctest::Approx(f_analytic).epsilon(1e-10));

  for (const double lambda_t : {0.5, 1.0, 10.0}) {
    // Poisson average of f^k, summed far past the mass of the distribution
    double series = 0.0, pk = std::exp(-lambda_t);
    for (int k = 0; k <= 200; ++k) {
      series += pk * std::pow(f_analytic, k);
      pk *= lambda_t / (k + 1);
    }
    const double closed = std::exp(-lambda_t * (1.0 - f_analytic));
    CHECK(series == doctest::Approx(closed).epsilon(1e-12));
    // at r_c = d/10 the correction to exp(-lambda T) is below 2e-4 relative
    CHECK(std::abs(closed - std::exp(-lambda_t)) <=
          2e-4 * lambda_t * std::exp(-lambda_t) + 1e-300);
  }
}

TEST_CASE("hit centers wrap: packet at the domain edge keeps circular mean") {
  // A torus-symmetric packet straddling the +x edge (wrapped distance in the
  // exponent, unlike gaussian_packet, which clips at the boundary).
  const int n = 256;
  const double c = 124.0, sigma = 3.0;
  WavefunctionGrid psi;
  psi.extent = {n, 1};
  psi.amplitudes.resize(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = std::abs(psi.coordinate(i, 0) - c);
    d = std::min(d, n - d);
    const double g = std::exp(-d * d / (4.0 * sigma * sigma));
    psi.amplitudes[i] = g;
    s += g * g;
  }
  for (auto& z : psi.amplitudes) z /= std::sqrt(s);

  Rng rng(808);
  double cs = 0.0, sn = 0.0;
  int wrapped_side = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const auto z = sample_hit_center(psi, 12.0, rng);
    CHECK(z[0] >= -128.0);
    CHECK(z[0] < 128.0);
    if (z[0] < -100.0) ++wrapped_side; // mass carried across the seam
    cs += std::cos(2.0 * kPi * z[0] / n);
    sn += std::sin(2.0 * kPi * z[0] / n);
  }
  CHECK(wrapped_side > 100);
  const double ang = std::atan2(sn / draws, cs / draws);
  const double mean = ang * n / (2.0 * kPi);
  // center spread ~ sqrt(sigma^2 + r_c^2/2) = 9.0; 4 sigma of the mean
  CHECK(std::abs(mean - c) <= 4.0 * 9.0 / std::sqrt(20000.0));
}
