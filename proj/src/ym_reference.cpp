#include "sic/ym_reference.hpp"

#include <cmath>

namespace sic::ym_ref {
namespace {

struct Coords {
  int c[3];
};

Coords decode(std::size_t site, int N, int dims) {
  Coords out{{0, 0, 0}};
  auto rem = site;
  for (int d = 0; d < dims; ++d) {
    out.c[d] = static_cast<int>(rem % static_cast<std::size_t>(N));
    rem /= static_cast<std::size_t>(N);
  }
  return out;
}

std::size_t encode(const Coords& co, int N, int dims) {
  std::size_t s = 0;
  for (int d = dims - 1; d >= 0; --d)
    s = s * static_cast<std::size_t>(N) + static_cast<std::size_t>(co.c[d]);
  return s;
}

std::size_t shifted(std::size_t site, int dir, int delta, const LatticeSpec& spec) {
  if (dir >= spec.spatial_dims) return site;
  Coords co = decode(site, spec.sites_per_dim, spec.spatial_dims);
  co.c[dir] = (co.c[dir] + spec.sites_per_dim + delta) % spec.sites_per_dim;
  return encode(co, spec.sites_per_dim, spec.spatial_dims);
}

double component(const std::vector<double>& field, std::size_t site, int dir, int a, int dim) {
  return field[(site * 3 + static_cast<std::size_t>(dir)) * dim + a];
}

// Central difference of field component (dir_f, a) along dir_d.
double ddx(const std::vector<double>& field, std::size_t site, int dir_d, int dir_f, int a,
           const LatticeSpec& spec, int dim) {
  const double up = component(field, shifted(site, dir_d, +1, spec), dir_f, a, dim);
  const double dn = component(field, shifted(site, dir_d, -1, spec), dir_f, a, dim);
  return (up - dn) / (2.0 * spec.spacing);
}

// F_ij^a with an explicit coupling argument so the abelianized energy can
// reuse the identical formula at g = 0.
double f_component(const std::vector<double>& A, std::size_t site, int i, int j, int a,
                   const LatticeSpec& spec, const GaugeGroup& group, double g) {
  const int dim = group.adjoint_dim();
  double v = ddx(A, site, i, j, a, spec, dim) - ddx(A, site, j, i, a, spec, dim);
  for (int b = 0; b < dim; ++b)
    for (int c = 0; c < dim; ++c)
      v += g * group.f(a, b, c) * component(A, site, i, b, dim) *
           component(A, site, j, c, dim);
  return v;
}

} // namespace

std::vector<double> field_strength(const FieldConfiguration& cfg, const LatticeSpec& spec,
                                   std::size_t site, int i, int j) {
  if (i == j) throw std::invalid_argument("field_strength: i == j is not a useful query");
  if (i < 0 || j < 0 || i >= 3 || j >= 3)
    throw std::invalid_argument("field_strength: direction index out of range");
  if (site >= spec.site_count())
    throw std::invalid_argument("field_strength: site index out of range");
  const GaugeGroup group = GaugeGroup::make(spec.group);
  std::vector<double> out(static_cast<std::size_t>(group.adjoint_dim()));
  for (int a = 0; a < group.adjoint_dim(); ++a)
    out[static_cast<std::size_t>(a)] =
        f_component(cfg.A, site, i, j, a, spec, group, spec.coupling);
  return out;
}

Derivatives equations_of_motion(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  const GaugeGroup group = GaugeGroup::make(spec.group);
  const int dim = group.adjoint_dim();
  const std::size_t sites = spec.site_count();
  const double g = spec.coupling;

  Derivatives d;
  d.dA = cfg.E;
  d.dE.assign(cfg.E.size(), 0.0);

  // dE_i^a(x) = sum_j [ d_j F_ji^a(x) + g f^{abc} A_j^b(x) F_ji^c(x) ],
  // with every F evaluated from its defining formula on the spot.
  for (std::size_t s = 0; s < sites; ++s)
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < dim; ++a) {
        double acc = 0.0;
        for (int j = 0; j < 3; ++j) {
          if (j == i) continue;
          const std::size_t sp = shifted(s, j, +1, spec);
          const std::size_t sm = shifted(s, j, -1, spec);
          acc += (f_component(cfg.A, sp, j, i, a, spec, group, g) -
                  f_component(cfg.A, sm, j, i, a, spec, group, g)) /
                 (2.0 * spec.spacing);
          for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
              acc += g * group.f(a, b, c) * component(cfg.A, s, j, b, dim) *
                     f_component(cfg.A, s, j, i, c, spec, group, g);
        }
        d.dE[(s * 3 + static_cast<std::size_t>(i)) * dim + a] = acc;
      }
  return d;
}

EnergyBreakdown total_energy(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  const GaugeGroup group = GaugeGroup::make(spec.group);
  const int dim = group.adjoint_dim();
  const std::size_t sites = spec.site_count();

  double cell = 1.0;
  for (int d = 0; d < spec.spatial_dims; ++d) cell *= spec.spacing;

  double tot = 0.0, quad = 0.0;
  for (std::size_t s = 0; s < sites; ++s) {
    double e2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < dim; ++a) {
        const double v = component(cfg.E, s, i, a, dim);
        e2 += v * v;
      }
    double f2_full = 0.0, f2_lin = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        for (int a = 0; a < dim; ++a) {
          const double vf = f_component(cfg.A, s, i, j, a, spec, group, spec.coupling);
          const double vl = f_component(cfg.A, s, i, j, a, spec, group, 0.0);
          f2_full += vf * vf;
          f2_lin += vl * vl;
        }
      }
    tot += 0.5 * e2 + 0.25 * f2_full;
    quad += 0.5 * e2 + 0.25 * f2_lin;
  }

  EnergyBreakdown out;
  out.quadratic = cell * quad;
  out.nonlinear = cell * tot - out.quadratic;
  out.total = out.quadratic + out.nonlinear;
  return out;
}

GaussResult gauss_residual(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  const GaugeGroup group = GaugeGroup::make(spec.group);
  const int dim = group.adjoint_dim();
  const std::size_t sites = spec.site_count();

  GaussResult out;
  out.residual.assign(sites * static_cast<std::size_t>(dim), 0.0);
  for (std::size_t s = 0; s < sites; ++s)
    for (int a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        acc += ddx(cfg.E, s, i, i, a, spec, dim);
        for (int b = 0; b < dim; ++b)
          for (int c = 0; c < dim; ++c)
            acc += spec.coupling * group.f(a, b, c) * component(cfg.A, s, i, b, dim) *
                   component(cfg.E, s, i, c, dim);
      }
      out.residual[s * static_cast<std::size_t>(dim) + a] = acc;
      out.max_abs = std::max(out.max_abs, std::abs(acc));
    }
  return out;
}

FieldConfiguration step(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  spec.ensure_valid();
  FieldConfiguration out = cfg;
  const double dt = spec.dt;

  Derivatives d1 = ym_ref::equations_of_motion(out, spec);
  for (std::size_t k = 0; k < out.E.size(); ++k) out.E[k] += 0.5 * dt * d1.dE[k];
  for (std::size_t k = 0; k < out.A.size(); ++k) out.A[k] += dt * out.E[k];
  Derivatives d2 = ym_ref::equations_of_motion(out, spec);
  for (std::size_t k = 0; k < out.E.size(); ++k) out.E[k] += 0.5 * dt * d2.dE[k];
  out.time += dt;
  return out;
}

} // namespace sic::ym_ref
