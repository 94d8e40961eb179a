#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "sic/gauge_algebra.hpp"

using namespace sic;
using cplx = std::complex<double>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

namespace {

Mat3 zero3() { return Mat3{}; }

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r = zero3();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat3 sub(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

cplx trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

// The eight Gell-Mann matrices, written out entry by entry. Everything the
// structure-constant table must satisfy follows from these via
// f_abc = -2i Tr([l_a/2, l_b/2] l_c/2) * 2  (with Tr(T_a T_b) = delta/2).
std::array<Mat3, 8> gell_mann() {
  std::array<Mat3, 8> l{};
  const double s3 = std::sqrt(3.0);
  l[0][0][1] = 1;        l[0][1][0] = 1;
  l[1][0][1] = {0, -1};  l[1][1][0] = {0, 1};
  l[2][0][0] = 1;        l[2][1][1] = -1;
  l[3][0][2] = 1;        l[3][2][0] = 1;
  l[4][0][2] = {0, -1};  l[4][2][0] = {0, 1};
  l[5][1][2] = 1;        l[5][2][1] = 1;
  l[6][1][2] = {0, -1};  l[6][2][1] = {0, 1};
  l[7][0][0] = 1.0 / s3; l[7][1][1] = 1.0 / s3; l[7][2][2] = -2.0 / s3;
  return l;
}

// f_abc from the matrix algebra itself: [T_a, T_b] = i f_abc T_c with
// T_a = lambda_a / 2 and Tr(T_a T_b) = delta_ab / 2 gives
// f_abc = -2i Tr([T_a, T_b] T_c).
double su3_f_oracle(int a, int b, int c) {
  static const auto l = gell_mann();
  Mat3 ta, tb, tc;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ta[i][j] = 0.5 * l[a][i][j];
      tb[i][j] = 0.5 * l[b][i][j];
      tc[i][j] = 0.5 * l[c][i][j];
    }
  const Mat3 comm = sub(mul(ta, tb), mul(tb, ta));
  const cplx v = trace(mul(comm, tc));
  return (cplx(0, -2) * v).real();
}

std::vector<double> random_vec(int n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

} // namespace

TEST_CASE("U(1) is the trivial algebra") {
  const auto g = GaugeGroup::u1();
  CHECK(g.adjoint_dim() == 1);
  CHECK(g.structure().empty());
  CHECK(g.f(0, 0, 0) == 0.0);
  const auto c = commutator(g, {0.7}, {-1.3});
  CHECK(c.size() == 1);
  CHECK(c[0] == 0.0); // bit-exact, not approximate
}

TEST_CASE("SU(2) structure constants are the Levi-Civita symbol") {
  const auto g = GaugeGroup::su2();
  CHECK(g.adjoint_dim() == 3);
  CHECK(g.f(0, 1, 2) == 1.0);
  CHECK(g.f(1, 0, 2) == -1.0);
  CHECK(g.f(1, 2, 0) == 1.0);
  CHECK(g.f(0, 0, 2) == 0.0);
  CHECK(g.structure().size() == 6);

  // [e1, e2] = e3 and cyclic
  const auto e1 = std::vector<double>{1, 0, 0};
  const auto e2 = std::vector<double>{0, 1, 0};
  const auto e3 = std::vector<double>{0, 0, 1};
  CHECK(commutator(g, e1, e2) == e3);
  CHECK(commutator(g, e2, e3) == e1);
  CHECK(commutator(g, e3, e1) == e2);
}

TEST_CASE("SU(3) table matches the Gell-Mann matrix computation") {
  const auto g = GaugeGroup::su3();
  CHECK(g.adjoint_dim() == 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        INFO("a=", a, " b=", b, " c=", c);
        CHECK(std::abs(g.f(a, b, c) - su3_f_oracle(a, b, c)) <= 1e-12);
      }
}

TEST_CASE("structure lists are sparse, ordered, antisymmetric") {
  for (const auto kind : {GroupKind::SU2, GroupKind::SU3}) {
    const auto g = GaugeGroup::make(kind);
    const auto& entries = g.structure();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      CHECK(e.coeff != 0.0);
      CHECK(g.f(e.a, e.b, e.c) == e.coeff);
      if (i > 0) {
        const auto& p = entries[i - 1];
        const bool ordered = std::array{p.a, p.b, p.c} < std::array{e.a, e.b, e.c};
        CHECK(ordered);
      }
    }
    // antisymmetry in every index pair, on the dense table
    const int n = g.adjoint_dim();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          CHECK(g.f(a, b, c) == -g.f(b, a, c));
          CHECK(g.f(a, b, c) == -g.f(a, c, b));
        }
  }
  CHECK(GaugeGroup::su3().structure().size() == 54);
}

TEST_CASE("Jacobi identity holds to 1e-12") {
  for (const auto kind : {GroupKind::SU2, GroupKind::SU3}) {
    const auto g = GaugeGroup::make(kind);
    const int n = g.adjoint_dim();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int e = 0; e < n; ++e) {
            double s = 0.0;
            for (int d = 0; d < n; ++d)
              s += g.f(a, b, d) * g.f(d, c, e) + g.f(b, c, d) * g.f(d, a, e) +
                   g.f(c, a, d) * g.f(d, b, e);
            CHECK(std::abs(s) <= 1e-12);
          }
  }
}

TEST_CASE("commutator agrees with the dense triple loop on random vectors") {
  std::mt19937_64 gen(2024);
  for (const auto kind : {GroupKind::SU2, GroupKind::SU3}) {
    const auto g = GaugeGroup::make(kind);
    const int n = g.adjoint_dim();
    for (int rep = 0; rep < 50; ++rep) {
      const auto u = random_vec(n, gen);
      const auto v = random_vec(n, gen);
      const auto got = commutator(g, u, v);
      for (int a = 0; a < n; ++a) {
        double want = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) want += g.f(a, b, c) * u[b] * v[c];
        CHECK(got[a] == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("commutator algebraic identities") {
  std::mt19937_64 gen(7);
  const auto g = GaugeGroup::su3();
  const auto u = random_vec(8, gen);
  const auto v = random_vec(8, gen);
  const auto uv = commutator(g, u, v);
  const auto vu = commutator(g, v, u);
  for (int a = 0; a < 8; ++a) CHECK(uv[a] == doctest::Approx(-vu[a]).epsilon(1e-14));
  const auto uu = commutator(g, u, u);
  // inner([u,v], u) = 0 by total antisymmetry
  CHECK(std::abs(inner(uv, u)) <= 1e-12);
  CHECK(std::abs(inner(uv, v)) <= 1e-12);
  for (int a = 0; a < 8; ++a) CHECK(std::abs(uu[a]) <= 1e-14);
}

TEST_CASE("inner product basics") {
  CHECK(inner({1, 2, 3}, {4, -5, 6}) == doctest::Approx(12.0));
  CHECK(inner({}, {}) == 0.0);
  CHECK_THROWS_AS((void)inner({1, 2}, {1}), std::invalid_argument);
}

TEST_CASE("dimension and range errors are rejected") {
  const auto g = GaugeGroup::su2();
  CHECK_THROWS_AS((void)commutator(g, {1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS((void)commutator(g, {1, 2, 3, 4}, {1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS((void)g.f(3, 0, 0), std::out_of_range);
  CHECK_THROWS_AS((void)g.f(0, -1, 0), std::out_of_range);
}

TEST_CASE("group names parse and print") {
  CHECK(GaugeGroup::parse("U1") == GroupKind::U1);
  CHECK(GaugeGroup::parse("SU2") == GroupKind::SU2);
  CHECK(GaugeGroup::parse("SU3") == GroupKind::SU3);
  CHECK(!GaugeGroup::parse("SU4").has_value());
  CHECK(GaugeGroup::su3().name() == "SU3");
  for (const auto kind : {GroupKind::U1, GroupKind::SU2, GroupKind::SU3})
    CHECK(GaugeGroup::parse(GaugeGroup::make(kind).name()) == kind);
}
