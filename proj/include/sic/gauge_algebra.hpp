#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sic {

enum class GroupKind { U1, SU2, SU3 };

// One nonzero structure constant f^{abc} (0-based indices).
struct StructureEntry {
  int a, b, c;
  double coeff;
};

// Lie-algebra metadata for the three supported gauge groups. U(1) is carried
// as adjoint dimension 1 with f == 0 so the abelian limit is a data choice,
// not a separate code path.
class GaugeGroup {
 public:
  static GaugeGroup make(GroupKind kind);
  static GaugeGroup u1() { return make(GroupKind::U1); }
  static GaugeGroup su2() { return make(GroupKind::SU2); }
  static GaugeGroup su3() { return make(GroupKind::SU3); }

  GroupKind kind() const { return kind_; }
  int adjoint_dim() const { return dim_; }

  // Dense lookup; indices 0-based, out of range rejected.
  double f(int a, int b, int c) const;

  // Every nonzero f^{abc}, lexicographically ordered on (a, b, c). Kernels
  // iterate this sparse list; the dense table exists for oracle checks.
  const std::vector<StructureEntry>& structure() const { return entries_; }

  std::string_view name() const;
  static std::optional<GroupKind> parse(std::string_view name);

 private:
  GaugeGroup(GroupKind kind, int dim);

  GroupKind kind_;
  int dim_;
  std::vector<double> dense_;        // dim^3, f[a*dim*dim + b*dim + c]
  std::vector<StructureEntry> entries_;
};

// res^a = sum_{b,c} f^{abc} u^b v^c. Raw-pointer form for kernels; callers
// guarantee all three arrays have adjoint_dim components. `res` is
// overwritten and must not alias u or v.
void commutator_into(const GaugeGroup& g, const double* u, const double* v, double* res);

// Checked value form; throws std::invalid_argument on dimension mismatch.
std::vector<double> commutator(const GaugeGroup& g, const std::vector<double>& u,
                               const std::vector<double>& v);

// Euclidean adjoint inner product sum_a u^a v^a.
double inner(const std::vector<double>& u, const std::vector<double>& v);

} // namespace sic
