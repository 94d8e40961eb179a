#include "sic/gauge_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace sic {
namespace {

struct BaseEntry {
  int a, b, c; // 1-based
  double coeff;
};

// Gell-Mann basis table; all other nonzero components follow by total
// antisymmetry.
constexpr BaseEntry kSu3Base[] = {
    {1, 2, 3, 1.0},  {1, 4, 7, 0.5},  {1, 5, 6, -0.5},
    {2, 4, 6, 0.5},  {2, 5, 7, 0.5},  {3, 4, 5, 0.5},
    {3, 6, 7, -0.5}, {4, 5, 8, 0.8660254037844386467637231707529},
    {6, 7, 8, 0.8660254037844386467637231707529},
};

void set_antisymmetric(std::vector<double>& dense, int dim, int a, int b, int c,
                       double v) {
  const auto at = [&](int i, int j, int k) -> double& {
    return dense[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  };
  at(a, b, c) = v;
  at(b, c, a) = v;
  at(c, a, b) = v;
  at(a, c, b) = -v;
  at(c, b, a) = -v;
  at(b, a, c) = -v;
}

} // namespace

GaugeGroup::GaugeGroup(GroupKind kind, int dim) : kind_(kind), dim_(dim) {
  dense_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  if (kind == GroupKind::SU2) {
    set_antisymmetric(dense_, dim, 0, 1, 2, 1.0);
  } else if (kind == GroupKind::SU3) {
    for (const auto& e : kSu3Base)
      set_antisymmetric(dense_, dim, e.a - 1, e.b - 1, e.c - 1, e.coeff);
  }
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        const double v = dense_[(static_cast<std::size_t>(a) * dim + b) * dim + c];
        if (v != 0.0) entries_.push_back({a, b, c, v});
      }
}

GaugeGroup GaugeGroup::make(GroupKind kind) {
  switch (kind) {
    case GroupKind::U1: return GaugeGroup(kind, 1);
    case GroupKind::SU2: return GaugeGroup(kind, 3);
    case GroupKind::SU3: return GaugeGroup(kind, 8);
  }
  throw std::invalid_argument("GaugeGroup: unknown kind");
}

double GaugeGroup::f(int a, int b, int c) const {
  if (a < 0 || b < 0 || c < 0 || a >= dim_ || b >= dim_ || c >= dim_)
    throw std::out_of_range("GaugeGroup::f: adjoint index out of range");
  return dense_[(static_cast<std::size_t>(a) * dim_ + b) * dim_ + c];
}

std::string_view GaugeGroup::name() const {
  switch (kind_) {
    case GroupKind::U1: return "U1";
    case GroupKind::SU2: return "SU2";
    case GroupKind::SU3: return "SU3";
  }
  return "?";
}

std::optional<GroupKind> GaugeGroup::parse(std::string_view name) {
  if (name == "U1" || name == "u1") return GroupKind::U1;
  if (name == "SU2" || name == "su2") return GroupKind::SU2;
  if (name == "SU3" || name == "su3") return GroupKind::SU3;
  return std::nullopt;
}

void commutator_into(const GaugeGroup& g, const double* u, const double* v,
                     double* res) {
  const int dim = g.adjoint_dim();
  for (int a = 0; a < dim; ++a) res[a] = 0.0;
  for (const auto& e : g.structure()) res[e.a] += e.coeff * u[e.b] * v[e.c];
}

std::vector<double> commutator(const GaugeGroup& g, const std::vector<double>& u,
                               const std::vector<double>& v) {
  const auto dim = static_cast<std::size_t>(g.adjoint_dim());
  if (u.size() != dim || v.size() != dim)
    throw std::invalid_argument("commutator: adjoint dimension mismatch");
  std::vector<double> res(dim, 0.0);
  commutator_into(g, u.data(), v.data(), res.data());
  return res;
}

double inner(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("inner: adjoint dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

} // namespace sic
