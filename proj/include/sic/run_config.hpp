#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sic/collapse.hpp"
#include "sic/experiments.hpp"
#include "sic/ym_lattice.hpp"

namespace sic {

// Full declarative description of one run. Every field has a default so a
// minimal config is just `mode = ...`; the CLI can override seed, output
// directory, and trajectory count. parse_config(emit_config(c)) == c.
struct RunConfig {
  std::string mode;                 // ym-evolve | tau | double-slit | sweep
  std::uint64_t master_seed = 42;
  std::string output_dir = "runs/out";

  // [lattice]
  LatticeSpec lattice;              // defaults: SU2, 1D, 16 sites, a=1, g=1, dt=0.01
  long long lattice_steps = 1000;
  long long sample_every = 10;
  double init_amplitude = 0.15;
  double init_ripple = 0.005;

  // [collapse]
  std::string hbar_units = "natural"; // natural | physical
  std::optional<double> rate;         // fixed hit rate; exclusive with enl_gev
  std::optional<double> enl_gev;      // nonlinear energy driving the rate
  double r_c = 8.0;
  std::string interval_mode = "poisson"; // poisson | fixed

  // [slit]
  DoubleSlitGeometry slit;
  long long slit_steps = 0;          // 0 = automatic step-count policy
  long long trajectories = 2000;

  // [sweep]
  std::vector<double> sweep_rates = {0.0, 0.000244140625, 0.00048828125,
                                     0.0009765625, 0.001953125};

  bool operator==(const RunConfig&) const = default;

  // Assembled collapse parameters for the quantum modes (hbar from
  // hbar_units; rate source from whichever of rate/enl_gev is set).
  CollapseParams collapse_params() const;
};

struct ConfigParseResult {
  std::optional<RunConfig> config; // set only when errors is empty
  std::vector<std::string> errors; // every problem, not just the first
};

// Parses the documented key-value format (top-level keys plus [lattice],
// [collapse], [slit], [sweep] sections; '#' comments). Unknown keys and
// sections are rejected. mode_override, when non-empty, replaces the mode
// key before validation (the CLI subcommand). All validation errors are
// collected and returned together.
ConfigParseResult parse_config(std::string_view text, std::string_view mode_override = "");

// Canonical text form: every key in documented order, shortest round-trip
// numbers. parse_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const RunConfig& cfg);

// Re-runs the semantic checks on an assembled config (used after CLI
// overrides). Empty result means valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

} // namespace sic
