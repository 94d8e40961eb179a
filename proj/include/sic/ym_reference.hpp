#pragma once

#include "sic/ym_lattice.hpp"

// Serial reference implementation of every lattice operation, coded directly
// from the defining formulas: dense triple-loop structure-constant sums,
// per-call coordinate arithmetic, no shared workspaces, no parallelism.
// Deliberately independent of the kernel code paths in ym_lattice.cpp; the
// test suite pins the optimized kernels against these, and the benchmark
// target measures the gap.
namespace sic::ym_ref {

std::vector<double> field_strength(const FieldConfiguration& cfg, const LatticeSpec& spec,
                                   std::size_t site, int i, int j);

Derivatives equations_of_motion(const FieldConfiguration& cfg, const LatticeSpec& spec);

EnergyBreakdown total_energy(const FieldConfiguration& cfg, const LatticeSpec& spec);

GaussResult gauss_residual(const FieldConfiguration& cfg, const LatticeSpec& spec);

FieldConfiguration step(const FieldConfiguration& cfg, const LatticeSpec& spec);

} // namespace sic::ym_ref
