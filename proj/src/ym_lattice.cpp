#include "sic/ym_lattice.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

#include "sic/numio.hpp"
#include "sic/rng.hpp"

namespace sic {
namespace {

constexpr std::size_t kBlockSites = 1024; // fixed reduction block; see energy()

// Pair index for directions i < j: (0,1)->0, (0,2)->1, (1,2)->2.
inline int pair_index(int i, int j) { return i + j - 1; }

void ensure_shape(const FieldConfiguration& cfg, const LatticeSpec& spec,
                  const GaugeGroup& group) {
  const std::size_t want =
      spec.site_count() * kVectorComponents * static_cast<std::size_t>(group.adjoint_dim());
  if (cfg.A.size() != want || cfg.E.size() != want)
    throw std::invalid_argument("field configuration shape does not match lattice spec");
}

} // namespace

std::vector<std::string> LatticeSpec::validate() const {
  std::vector<std::string> errs;
  if (spatial_dims < 1 || spatial_dims > 3)
    errs.push_back("spatial_dims must be 1, 2, or 3");
  if (sites_per_dim < 4) errs.push_back("sites_per_dim must be >= 4");
  if (sites_per_dim % 2 != 0) errs.push_back("sites_per_dim must be even");
  if (!(spacing > 0.0)) errs.push_back("spacing must be > 0");
  if (!(dt > 0.0)) errs.push_back("dt must be > 0");
  else if (spacing > 0.0 && dt / spacing > 0.5)
    errs.push_back("stability guard violated: dt/spacing must be <= 0.5");
  if (!(coupling >= 0.0)) errs.push_back("coupling must be >= 0");
  return errs;
}

void LatticeSpec::ensure_valid() const {
  const auto errs = validate();
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid lattice spec:";
  for (const auto& e : errs) os << " [" << e << "]";
  throw std::invalid_argument(os.str());
}

std::size_t LatticeSpec::site_count() const {
  std::size_t n = 1;
  for (int d = 0; d < spatial_dims; ++d) n *= static_cast<std::size_t>(sites_per_dim);
  return n;
}

EvolutionDiverged::EvolutionDiverged(long long step_index, double time)
    : std::runtime_error("evolution diverged at step " + fmt_int(step_index) +
                         " (t = " + fmt_double(time) + "): non-finite field component"),
      step_index_(step_index),
      time_(time) {}

Evolver::Evolver(const LatticeSpec& spec)
    : spec_(spec), group_(GaugeGroup::make(spec.group)) {
  spec_.ensure_valid();
  sites_ = spec_.site_count();
  const int N = spec_.sites_per_dim;
  const int D = spec_.spatial_dims;

  nplus_.assign(sites_ * 3, 0);
  nminus_.assign(sites_ * 3, 0);
  for (std::size_t s = 0; s < sites_; ++s) {
    int coord[3] = {0, 0, 0};
    std::size_t rem = s;
    for (int d = 0; d < D; ++d) {
      coord[d] = static_cast<int>(rem % static_cast<std::size_t>(N));
      rem /= static_cast<std::size_t>(N);
    }
    for (int dir = 0; dir < 3; ++dir) {
      if (dir >= D) {
        // Fields do not vary along reduced directions; a self-neighbor makes
        // the central difference vanish identically.
        nplus_[s * 3 + dir] = static_cast<std::int32_t>(s);
        nminus_[s * 3 + dir] = static_cast<std::int32_t>(s);
        continue;
      }
      std::size_t stride = 1;
      for (int d = 0; d < dir; ++d) stride *= static_cast<std::size_t>(N);
      const int up = (coord[dir] + 1) % N;
      const int dn = (coord[dir] + N - 1) % N;
      nplus_[s * 3 + dir] =
          static_cast<std::int32_t>(s + (static_cast<std::size_t>(up - coord[dir])) * stride);
      nminus_[s * 3 + dir] =
          static_cast<std::int32_t>(s + (static_cast<std::size_t>(dn - coord[dir])) * stride);
    }
  }

  const std::size_t comps = sites_ * 3 * static_cast<std::size_t>(group_.adjoint_dim());
  fs_.assign(comps, 0.0);
  force_.assign(comps, 0.0);
}

void Evolver::field_strength_all(const std::vector<double>& A, std::vector<double>& F) const {
  const int dim = group_.adjoint_dim();
  const double inv2a = 1.0 / (2.0 * spec_.spacing);
  const double g = spec_.coupling;
  const auto& entries = group_.structure();
  const std::size_t n = sites_;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(n); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const int p = pair_index(i, j);
        double* out = &F[(s * 3 + static_cast<std::size_t>(p)) * dim];
        const double* Ai = &A[(s * 3 + static_cast<std::size_t>(i)) * dim];
        const double* Aj = &A[(s * 3 + static_cast<std::size_t>(j)) * dim];
        const double* Aj_ip = &A[(static_cast<std::size_t>(nplus_[s * 3 + i]) * 3 + j) * dim];
        const double* Aj_im = &A[(static_cast<std::size_t>(nminus_[s * 3 + i]) * 3 + j) * dim];
        const double* Ai_jp = &A[(static_cast<std::size_t>(nplus_[s * 3 + j]) * 3 + i) * dim];
        const double* Ai_jm = &A[(static_cast<std::size_t>(nminus_[s * 3 + j]) * 3 + i) * dim];
        for (int a = 0; a < dim; ++a)
          out[a] = (Aj_ip[a] - Aj_im[a]) * inv2a - (Ai_jp[a] - Ai_jm[a]) * inv2a;
        for (const auto& e : entries)
          out[e.a] += g * e.coeff * Ai[e.b] * Aj[e.c];
      }
    }
  }
}

void Evolver::force_all(const std::vector<double>& A, std::vector<double>& force) {
  const int dim = group_.adjoint_dim();
  const double inv2a = 1.0 / (2.0 * spec_.spacing);
  const double g = spec_.coupling;
  const auto& entries = group_.structure();
  const std::size_t n = sites_;

  field_strength_all(A, fs_);
  force.resize(A.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(n); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    for (int i = 0; i < 3; ++i) {
      double* out = &force[(s * 3 + static_cast<std::size_t>(i)) * dim];
      for (int a = 0; a < dim; ++a) out[a] = 0.0;
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue; // F_ii == 0 contributes nothing
        // F_ji = sign * F_pair with pairs stored for first < second.
        const int p = (j < i) ? pair_index(j, i) : pair_index(i, j);
        const double sign = (j < i) ? 1.0 : -1.0;
        const double* Fp_jp =
            &fs_[(static_cast<std::size_t>(nplus_[s * 3 + j]) * 3 + p) * dim];
        const double* Fp_jm =
            &fs_[(static_cast<std::size_t>(nminus_[s * 3 + j]) * 3 + p) * dim];
        const double* Fp_s = &fs_[(s * 3 + static_cast<std::size_t>(p)) * dim];
        const double* Aj = &A[(s * 3 + static_cast<std::size_t>(j)) * dim];
        for (int a = 0; a < dim; ++a)
          out[a] += sign * (Fp_jp[a] - Fp_jm[a]) * inv2a;
        for (const auto& e : entries)
          out[e.a] += g * e.coeff * Aj[e.b] * sign * Fp_s[e.c];
      }
    }
  }
}

EnergyBreakdown Evolver::energy(const FieldConfiguration& cfg) {
  ensure_shape(cfg, spec_, group_);
  const int dim = group_.adjoint_dim();
  const double inv2a = 1.0 / (2.0 * spec_.spacing);
  const double g = spec_.coupling;
  const auto& entries = group_.structure();
  const std::size_t n = sites_;
  const std::size_t nblocks = (n + kBlockSites - 1) / kBlockSites;

  // Fixed-size blocks with a serial in-order merge keep the sum independent
  // of the worker count, which the determinism contract requires.
  std::vector<double> tot_part(nblocks, 0.0), quad_part(nblocks, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bb = 0; bb < static_cast<std::ptrdiff_t>(nblocks); ++bb) {
    const auto b = static_cast<std::size_t>(bb);
    const std::size_t lo = b * kBlockSites;
    const std::size_t hi = std::min(n, lo + kBlockSites);
    double tot = 0.0, quad = 0.0;
    std::vector<double> comm(static_cast<std::size_t>(dim));
    for (std::size_t s = lo; s < hi; ++s) {
      double e2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double* Ei = &cfg.E[(s * 3 + static_cast<std::size_t>(i)) * dim];
        for (int a = 0; a < dim; ++a) e2 += Ei[a] * Ei[a];
      }
      double f2_full = 0.0, f2_lin = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          const double* Ai = &cfg.A[(s * 3 + static_cast<std::size_t>(i)) * dim];
          const double* Aj = &cfg.A[(s * 3 + static_cast<std::size_t>(j)) * dim];
          const double* Aj_ip =
              &cfg.A[(static_cast<std::size_t>(nplus_[s * 3 + i]) * 3 + j) * dim];
          const double* Aj_im =
              &cfg.A[(static_cast<std::size_t>(nminus_[s * 3 + i]) * 3 + j) * dim];
          const double* Ai_jp =
              &cfg.A[(static_cast<std::size_t>(nplus_[s * 3 + j]) * 3 + i) * dim];
          const double* Ai_jm =
              &cfg.A[(static_cast<std::size_t>(nminus_[s * 3 + j]) * 3 + i) * dim];
          for (int a = 0; a < dim; ++a) comm[static_cast<std::size_t>(a)] = 0.0;
          for (const auto& e : entries)
            comm[static_cast<std::size_t>(e.a)] += e.coeff * Ai[e.b] * Aj[e.c];
          for (int a = 0; a < dim; ++a) {
            const double lin = (Aj_ip[a] - Aj_im[a]) * inv2a - (Ai_jp[a] - Ai_jm[a]) * inv2a;
            const double full = lin + g * comm[static_cast<std::size_t>(a)];
            f2_lin += lin * lin;
            f2_full += full * full;
          }
        }
      }
      // 1/4 sum over ordered (i,j) equals 1/2 sum over pairs i < j.
      tot += 0.5 * e2 + 0.5 * f2_full;
      quad += 0.5 * e2 + 0.5 * f2_lin;
    }
    tot_part[b] = tot;
    quad_part[b] = quad;
  }

  double cell = 1.0;
  for (int d = 0; d < spec_.spatial_dims; ++d) cell *= spec_.spacing;
  double tot = 0.0, quad = 0.0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    tot += tot_part[b];
    quad += quad_part[b];
  }
  EnergyBreakdown out;
  out.quadratic = cell * quad;
  out.nonlinear = cell * tot - out.quadratic;
  out.total = out.quadratic + out.nonlinear; // exact recomposition by construction
  return out;
}

GaussResult Evolver::gauss(const FieldConfiguration& cfg) const {
  ensure_shape(cfg, spec_, group_);
  const int dim = group_.adjoint_dim();
  const double inv2a = 1.0 / (2.0 * spec_.spacing);
  const double g = spec_.coupling;
  const auto& entries = group_.structure();
  const std::size_t n = sites_;

  GaussResult out;
  out.residual.assign(n * static_cast<std::size_t>(dim), 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(n); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    double* res = &out.residual[s * static_cast<std::size_t>(dim)];
    for (int i = 0; i < 3; ++i) {
      const double* Ei_p = &cfg.E[(static_cast<std::size_t>(nplus_[s * 3 + i]) * 3 + i) * dim];
      const double* Ei_m = &cfg.E[(static_cast<std::size_t>(nminus_[s * 3 + i]) * 3 + i) * dim];
      const double* Ai = &cfg.A[(s * 3 + static_cast<std::size_t>(i)) * dim];
      const double* Ei = &cfg.E[(s * 3 + static_cast<std::size_t>(i)) * dim];
      for (int a = 0; a < dim; ++a) res[a] += (Ei_p[a] - Ei_m[a]) * inv2a;
      for (const auto& e : entries) res[e.a] += g * e.coeff * Ai[e.b] * Ei[e.c];
    }
  }

  double mx = 0.0;
  for (const double v : out.residual) mx = std::max(mx, std::abs(v));
  out.max_abs = mx;
  return out;
}

void Evolver::check_finite(const FieldConfiguration& cfg) const {
  for (const double v : cfg.A)
    if (!std::isfinite(v)) throw EvolutionDiverged(steps_taken_, cfg.time);
  for (const double v : cfg.E)
    if (!std::isfinite(v)) throw EvolutionDiverged(steps_taken_, cfg.time);
}

void Evolver::step(FieldConfiguration& cfg) {
  ensure_shape(cfg, spec_, group_);
  const double dt = spec_.dt;
  const std::size_t m = cfg.A.size();

  force_all(cfg.A, force_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(m); ++k)
    cfg.E[static_cast<std::size_t>(k)] += 0.5 * dt * force_[static_cast<std::size_t>(k)];

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(m); ++k)
    cfg.A[static_cast<std::size_t>(k)] += dt * cfg.E[static_cast<std::size_t>(k)];

  force_all(cfg.A, force_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(m); ++k)
    cfg.E[static_cast<std::size_t>(k)] += 0.5 * dt * force_[static_cast<std::size_t>(k)];

  cfg.time += dt;
  ++steps_taken_;
  check_finite(cfg);
}

FieldConfiguration zero_configuration(const LatticeSpec& spec) {
  spec.ensure_valid();
  const GaugeGroup group = GaugeGroup::make(spec.group);
  FieldConfiguration cfg;
  const std::size_t comps =
      spec.site_count() * 3 * static_cast<std::size_t>(group.adjoint_dim());
  cfg.A.assign(comps, 0.0);
  cfg.E.assign(comps, 0.0);
  return cfg;
}

FieldConfiguration random_initial_data(const LatticeSpec& spec, std::uint64_t seed,
                                       double amp_constant, double amp_ripple) {
  FieldConfiguration cfg = zero_configuration(spec);
  const GaugeGroup group = GaugeGroup::make(spec.group);
  const int dim = group.adjoint_dim();
  const int N = spec.sites_per_dim;
  const std::size_t sites = spec.site_count();

  Rng rng(seed);
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> c0(3 * static_cast<std::size_t>(dim));
  std::vector<double> c1(3 * static_cast<std::size_t>(dim));
  std::vector<double> phase(3 * static_cast<std::size_t>(dim));
  for (int dir = 0; dir < 3; ++dir)
    for (int a = 0; a < dim; ++a) {
      const std::size_t k = static_cast<std::size_t>(dir) * dim + a;
      c0[k] = amp_constant * rng.uniform_symmetric();
      c1[k] = amp_ripple * rng.uniform_symmetric();
      phase[k] = two_pi * rng.uniform();
    }

  for (std::size_t s = 0; s < sites; ++s) {
    const double x = static_cast<double>(s % static_cast<std::size_t>(N));
    for (int dir = 0; dir < 3; ++dir)
      for (int a = 0; a < dim; ++a) {
        const std::size_t k = static_cast<std::size_t>(dir) * dim + a;
        cfg.A[(s * 3 + static_cast<std::size_t>(dir)) * dim + a] =
            c0[k] + c1[k] * std::cos(two_pi * x / N + phase[k]);
      }
  }
  return cfg;
}

std::vector<double> field_strength(const FieldConfiguration& cfg, const LatticeSpec& spec,
                                   std::size_t site, int i, int j) {
  if (i == j) throw std::invalid_argument("field_strength: i == j is not a useful query");
  if (i < 0 || j < 0 || i >= 3 || j >= 3)
    throw std::invalid_argument("field_strength: direction index out of range");
  if (site >= spec.site_count())
    throw std::invalid_argument("field_strength: site index out of range");

  Evolver ev(spec);
  ensure_shape(cfg, spec, ev.group());
  const int dim = ev.group().adjoint_dim();
  std::vector<double> F(cfg.A.size());
  ev.field_strength_all(cfg.A, F);

  const bool swapped = i > j;
  const int p = swapped ? pair_index(j, i) : pair_index(i, j);
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const double v = F[(site * 3 + static_cast<std::size_t>(p)) * dim + a];
    out[static_cast<std::size_t>(a)] = swapped ? -v : v;
  }
  return out;
}

Derivatives equations_of_motion(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  Evolver ev(spec);
  ensure_shape(cfg, spec, ev.group());
  Derivatives d;
  d.dA = cfg.E;
  ev.force_all(cfg.A, d.dE);
  return d;
}

FieldConfiguration step(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  Evolver ev(spec);
  FieldConfiguration out = cfg;
  ev.step(out);
  return out;
}

EnergyBreakdown total_energy(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  Evolver ev(spec);
  return ev.energy(cfg);
}

GaussResult gauss_residual(const FieldConfiguration& cfg, const LatticeSpec& spec) {
  Evolver ev(spec);
  return ev.gauss(cfg);
}

} // namespace sic
