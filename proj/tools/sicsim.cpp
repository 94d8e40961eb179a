#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "sic/run_config.hpp"
#include "sic/runner.hpp"
#include "sic/version.hpp"

namespace {

// Exit codes: 0 success, 2 usage or configuration error, 3 run failure.
constexpr int kExitUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(sic::kToolName) + " " + sic::kToolVersion +
               ": lattice gauge dynamics with energy-driven wavefunction collapse"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  long long trajectories = 0;
  bool quiet = false;

  CLI::App* subs[] = {
      app.add_subcommand("ym-evolve", "evolve lattice gauge fields, track energy split"),
      app.add_subcommand("tau", "decoherence timescale from nonlinear energy"),
      app.add_subcommand("double-slit", "stochastic-collapse interference ensemble"),
      app.add_subcommand("sweep", "fringe visibility across collapse rates"),
  };
  for (CLI::App* sub : subs) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--out", out_dir, "output directory (wins over SICSIM_OUT and config)");
    sub->add_option("--trajectories", trajectories,
                    "trajectory count override (double-slit, sweep)");
    sub->add_flag("--quiet", quiet, "suppress informational stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string mode = sub->get_name();

  std::string config_text;
  if (sub->count("--config") > 0) {
    const auto text = read_file(config_path);
    if (!text) {
      std::cerr << "config error: cannot read '" << config_path << "'\n";
      return kExitUsage;
    }
    config_text = *text;
  }

  sic::ConfigParseResult parsed = sic::parse_config(config_text, mode);
  if (!parsed.config.has_value()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return kExitUsage;
  }
  sic::RunConfig cfg = *parsed.config;
  if (sub->count("--seed") > 0) cfg.master_seed = seed;
  if (sub->count("--trajectories") > 0) cfg.trajectories = trajectories;
  if (const auto errs = sic::validate_config(cfg); !errs.empty()) {
    for (const auto& e : errs) std::cerr << "config error: " << e << "\n";
    return kExitUsage;
  }

  sic::RunOverrides overrides;
  overrides.output_dir = out_dir;
  overrides.quiet = quiet;
  return sic::run(cfg, overrides);
}
