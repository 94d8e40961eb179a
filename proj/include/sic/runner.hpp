#pragma once

#include <string>

#include "sic/run_config.hpp"

namespace sic {

// Options resolved from the command line on top of the parsed config.
struct RunOverrides {
  std::string output_dir; // --out, wins over SICSIM_OUT and the config value
  bool quiet = false;
};

// Executes one run in the requested mode, writing all outputs (CSV files,
// snapshots, manifest.json) under the resolved output directory. Returns the
// process exit code: 0 on success, 3 on a physics/runtime failure (which is
// reported on stderr as "run error [module]: ...").
int run(const RunConfig& cfg, const RunOverrides& overrides);

// Directory precedence: overrides.output_dir, then $SICSIM_OUT, then
// cfg.output_dir.
std::string resolve_output_dir(const RunConfig& cfg, const RunOverrides& overrides);

} // namespace sic
