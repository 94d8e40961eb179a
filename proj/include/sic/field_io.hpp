#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "sic/ym_lattice.hpp"

namespace sic {

// Text snapshot of a lattice run: header with every LatticeSpec field plus
// elapsed time, then the A and E arrays one site per line. Format is
// versioned; loaders reject unknown versions. Numbers are written in
// shortest round-trip form, so save/load is bit-exact.
void save_snapshot(std::ostream& os, const FieldConfiguration& cfg, const LatticeSpec& spec);
void save_snapshot_file(const std::string& path, const FieldConfiguration& cfg,
                        const LatticeSpec& spec);

std::pair<LatticeSpec, FieldConfiguration> load_snapshot(std::istream& is);
std::pair<LatticeSpec, FieldConfiguration> load_snapshot_file(const std::string& path);

// Energy time-series CSV: step,time,total,quadratic,nonlinear,gauss_max.
extern const char* const kEnergyCsvHeader;
std::string energy_csv_row(long long step, double time, const EnergyBreakdown& e,
                           double gauss_max);

} // namespace sic
