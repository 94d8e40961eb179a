#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "sic/collapse.hpp"
#include "sic/run_config.hpp"

using namespace sic;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("sic_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

const char* sicsim_bin() {
  const char* bin = std::getenv("SICSIM_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SICSIM_BIN must point at the sicsim binary");
  return bin;
}

fs::path golden_dir() {
  const char* dir = std::getenv("GOLDEN_DIR");
  REQUIRE_MESSAGE(dir != nullptr, "GOLDEN_DIR must point at docs/golden");
  return fs::path(dir);
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path dir = fresh_dir("io");
  const fs::path out = dir / "out.txt";
  const fs::path err = dir / "err.txt";
  std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
  cmd += std::string(sicsim_bin()) + " " + args + " > " + out.string() + " 2> " +
         err.string();
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

} // namespace

TEST_CASE("empty config with a mode override yields the documented defaults") {
  const auto res = parse_config("", "tau");
  REQUIRE(res.errors.empty());
  REQUIRE(res.config.has_value());
  const RunConfig& c = *res.config;
  CHECK(c.mode == "tau");
  CHECK(c.master_seed == 42);
  CHECK(!c.rate.has_value());
  CHECK(!c.enl_gev.has_value()); // tau substitutes 0.2 GeV at run time
  CHECK(c.lattice.sites_per_dim == 16);
  CHECK(c.slit.grid_points == 4096);
  CHECK(c.sweep_rates.size() == 5);
}

TEST_CASE("full config parses into the matching fields") {
  const char* text =
      "# comment line\n"
      "mode = sweep\n"
      "seed = 17\n"
      "output_dir = runs/demo\n"
      "\n"
      "[lattice]\n"
      "group = SU3\n"
      "spatial_dims = 2   # trailing comment\n"
      "sites_per_dim = 8\n"
      "spacing = 0.5\n"
      "coupling = 0.25\n"
      "dt = 0.002\n"
      "steps = 123\n"
      "sample_every = 3\n"
      "init_amplitude = 0.2\n"
      "init_ripple = 0.01\n"
      "[collapse]\n"
      "hbar_units = physical\n"
      "enl_gev = 0.3\n"
      "r_c = 6.5\n"
      "interval_mode = fixed\n"
      "[slit]\n"
      "separation = 64\n"
      "width = 6\n"
      "flight_time = 512\n"
      "grid_points = 1024\n"
      "dx = 0.5\n"
      "mass = 2\n"
      "hbar = 0.5\n"
      "steps = 256\n"
      "trajectories = 100\n"
      "[sweep]\n"
      "rates = 0, 0.001, 0.002\n";
  const auto res = parse_config(text);
  if (!res.errors.empty()) FAIL("parse error: " << res.errors[0]);
  REQUIRE(res.config.has_value());
  const RunConfig& c = *res.config;
  CHECK(c.mode == "sweep");
  CHECK(c.master_seed == 17);
  CHECK(c.output_dir == "runs/demo");
  CHECK(c.lattice.group == GroupKind::SU3);
  CHECK(c.lattice.spatial_dims == 2);
  CHECK(c.lattice.sites_per_dim == 8);
  CHECK(c.lattice.spacing == 0.5);
  CHECK(c.lattice.coupling == 0.25);
  CHECK(c.lattice.dt == 0.002);
  CHECK(c.lattice_steps == 123);
  CHECK(c.sample_every == 3);
  CHECK(c.init_amplitude == 0.2);
  CHECK(c.init_ripple == 0.01);
  CHECK(c.hbar_units == "physical");
  CHECK(!c.rate.has_value());
  CHECK(c.enl_gev == 0.3);
  CHECK(c.r_c == 6.5);
  CHECK(c.interval_mode == "fixed");
  CHECK(c.slit.separation == 64.0);
  CHECK(c.slit.width == 6.0);
  CHECK(c.slit.flight_time == 512.0);
  CHECK(c.slit.grid_points == 1024);
  CHECK(c.slit.dx == 0.5);
  CHECK(c.slit.mass == 2.0);
  CHECK(c.slit.hbar == 0.5);
  CHECK(c.slit_steps == 256);
  CHECK(c.trajectories == 100);
  CHECK(c.sweep_rates == std::vector<double>{0.0, 0.001, 0.002});
}

TEST_CASE("all errors are reported, not just the first") {
  const char* text =
      "mode = warp\n"
      "seed = minus\n"
      "[lattice]\n"
      "sites_per_dim = 7\n"
      "dt = 0.9\n"
      "[mystery]\n"
      "x = 1\n";
  const auto res = parse_config(text, "ym-evolve");
  CHECK(!res.config.has_value());
  CHECK(res.errors.size() >= 4); // bad seed, odd sites, dt guard, unknown section
  bool saw_line = false, saw_guard = false;
  for (const auto& e : res.errors) {
    if (e.find("line") != std::string::npos) saw_line = true;
    if (e.find("0.5") != std::string::npos) saw_guard = true;
  }
  CHECK(saw_line);
  CHECK(saw_guard);
}

TEST_CASE("unknown and duplicate keys are rejected") {
  const auto res = parse_config("mode = tau\nunknown_key = 1\n");
  CHECK(!res.config.has_value());
  const auto res2 = parse_config("mode = tau\nseed = 1\nseed = 2\n");
  CHECK(!res2.config.has_value());
  REQUIRE(!res2.errors.empty());
  CHECK(res2.errors[0].find("duplicate") != std::string::npos);
  const auto res3 = parse_config("[slit]\nwobble = 3\n", "double-slit");
  CHECK(!res3.config.has_value());
}

TEST_CASE("dt / spacing = 0.6 trips the stability guard") {
  const auto res = parse_config("mode = ym-evolve\n[lattice]\ndt = 0.6\n");
  REQUIRE(!res.config.has_value());
  bool found = false;
  for (const auto& e : res.errors)
    if (e.find("0.5") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("rate and enl_gev are exclusive; tau mode rejects rate") {
  const auto both =
      parse_config("mode = double-slit\n[collapse]\nrate = 0.001\nenl_gev = 0.2\n");
  CHECK(!both.config.has_value());
  const auto tau_rate = parse_config("mode = tau\n[collapse]\nrate = 0.5\n");
  CHECK(!tau_rate.config.has_value());
  const auto ok = parse_config("mode = tau\n[collapse]\nenl_gev = 0.2\n");
  CHECK(ok.config.has_value());
}

TEST_CASE("emit / parse round-trip is the identity") {
  RunConfig c;
  c.mode = "sweep";
  c.master_seed = 987654321;
  c.output_dir = "runs/roundtrip";
  c.lattice.group = GroupKind::SU3;
  c.lattice.spatial_dims = 3;
  c.lattice.sites_per_dim = 6;
  c.lattice.spacing = 0.75;
  c.lattice.coupling = 0.125;
  c.lattice.dt = 0.0625;
  c.lattice_steps = 321;
  c.sample_every = 7;
  c.init_amplitude = 0.0625;
  c.init_ripple = 0.03125;
  c.hbar_units = "physical";
  c.enl_gev = 0.25;
  c.r_c = 12.5;
  c.interval_mode = "fixed";
  c.slit.separation = 96.0;
  c.slit.width = 12.0;
  c.slit.flight_time = 384.0;
  c.slit.grid_points = 2048;
  c.slit.dx = 0.25;
  c.slit.mass = 1.5;
  c.slit.hbar = 0.5;
  c.slit_steps = 192;
  c.trajectories = 64;
  c.sweep_rates = {0.0, 0.0078125, 0.015625};
  REQUIRE(validate_config(c).empty());

  const std::string text = emit_config(c);
  const auto back = parse_config(text);
  if (!back.errors.empty()) FAIL("re-parse error: " << back.errors[0]);
  REQUIRE(back.config.has_value());
  CHECK(*back.config == c);

  // The minimal default config survives the trip too.
  const auto dflt = parse_config("", "tau");
  const auto dflt_back = parse_config(emit_config(*dflt.config));
  REQUIRE(dflt_back.config.has_value());
  CHECK(*dflt_back.config == *dflt.config);
}

TEST_CASE("validate_config re-checks values changed after parsing") {
  auto res = parse_config("", "double-slit");
  REQUIRE(res.config.has_value());
  RunConfig c = *res.config;
  c.trajectories = 0; // as if --trajectories 0 were passed
  CHECK(!validate_config(c).empty());
  c.trajectories = 5;
  CHECK(validate_config(c).empty());
}

TEST_CASE("collapse_params maps units and rate source") {
  auto res = parse_config("mode = double-slit\n[collapse]\nrate = 0.25\nr_c = 3\n");
  REQUIRE(res.config.has_value());
  CollapseParams p = res.config->collapse_params();
  CHECK(p.rate_source == CollapseParams::RateSource::FixedRate);
  CHECK(p.rate == 0.25);
  CHECK(p.r_c == 3.0);
  CHECK(p.hbar == 1.0);
  CHECK(p.interval_mode == CollapseParams::IntervalMode::Poisson);

  res = parse_config(
      "mode = double-slit\n[collapse]\nhbar_units = physical\nenl_gev = 0.2\n"
      "interval_mode = fixed\n");
  REQUIRE(res.config.has_value());
  p = res.config->collapse_params();
  CHECK(p.rate_source == CollapseParams::RateSource::DerivedFromEnergy);
  CHECK(p.e_nl == 0.2);
  CHECK(p.hbar == kHbarGeVSeconds);
  CHECK(p.interval_mode == CollapseParams::IntervalMode::Fixed);

  res = parse_config("", "double-slit"); // neither: rate fixed at zero
  p = res.config->collapse_params();
  CHECK(p.rate_source == CollapseParams::RateSource::FixedRate);
  CHECK(p.rate == 0.0);
}

TEST_CASE("tau subprocess matches the golden outputs byte for byte") {
  const fs::path out = fresh_dir("tau");
  const auto r = run_cli("tau --config " + (golden_dir() / "tau" / "config.cfg").string() +
                         " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("3.29") != std::string::npos);
  CHECK(slurp(out / "tau.csv") == slurp(golden_dir() / "tau" / "tau.csv"));
  CHECK(slurp(out / "manifest.json") == slurp(golden_dir() / "tau" / "manifest.json"));
}

TEST_CASE("ym-evolve subprocess writes the golden energy series") {
  const fs::path out = fresh_dir("ym");
  const auto r = run_cli("ym-evolve --config " +
                         (golden_dir() / "ym-evolve" / "config.cfg").string() + " --out " +
                         out.string() + " --quiet");
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty()); // --quiet
  CHECK(slurp(out / "energy.csv") == slurp(golden_dir() / "ym-evolve" / "energy.csv"));
  CHECK(slurp(out / "snapshot.txt") ==
        slurp(golden_dir() / "ym-evolve" / "snapshot.txt"));
}

TEST_CASE("double-slit subprocess is byte-reproducible and matches golden") {
  const fs::path out1 = fresh_dir("ds1");
  const fs::path out2 = fresh_dir("ds2");
  const std::string cfg = (golden_dir() / "double-slit" / "config.cfg").string();
  const auto r1 = run_cli("double-slit --config " + cfg + " --out " + out1.string());
  const auto r2 = run_cli("double-slit --config " + cfg + " --out " + out2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const auto d1 = slurp(out1 / "density.csv");
  CHECK(d1 == slurp(out2 / "density.csv"));
  CHECK(d1 == slurp(golden_dir() / "double-slit" / "density.csv"));
  const auto h1 = slurp(out1 / "hits.csv");
  CHECK(h1 == slurp(out2 / "hits.csv"));
  CHECK(h1 == slurp(golden_dir() / "double-slit" / "hits.csv"));
}

TEST_CASE("sweep subprocess matches the golden table") {
  const fs::path out = fresh_dir("sweep");
  const auto r = run_cli("sweep --config " +
                         (golden_dir() / "sweep" / "config.cfg").string() + " --out " +
                         out.string() + " --quiet");
  CHECK(r.exit_code == 0);
  CHECK(slurp(out / "sweep.csv") == slurp(golden_dir() / "sweep" / "sweep.csv"));
}

TEST_CASE("exit code 2 for usage and configuration mistakes") {
  CHECK(run_cli("").exit_code == 2);                       // missing subcommand
  CHECK(run_cli("warp-drive").exit_code == 2);             // unknown subcommand
  CHECK(run_cli("tau --wobble").exit_code == 2);           // unknown flag
  CHECK(run_cli("tau --config /nonexistent.cfg").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);

  const fs::path dir = fresh_dir("badcfg");
  spit(dir / "bad.cfg", "[lattice]\ndt = 0.6\n");
  const auto r = run_cli("ym-evolve --config " + (dir / "bad.cfg").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("config error") != std::string::npos);

  spit(dir / "zero.cfg", "");
  const auto rt = run_cli("double-slit --config " + (dir / "zero.cfg").string() +
                          " --trajectories 0");
  CHECK(rt.exit_code == 2);
}

TEST_CASE("exit code 3 with module attribution for physics failures") {
  const fs::path dir = fresh_dir("diverge");
  spit(dir / "boom.cfg",
       "[lattice]\ncoupling = 5\ninit_amplitude = 50\ninit_ripple = 1\nsteps = 200\n");
  const auto r = run_cli("ym-evolve --config " + (dir / "boom.cfg").string() + " --out " +
                         (dir / "out").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("run error [ym_lattice]") != std::string::npos);
  CHECK(r.err.find("diverged") != std::string::npos);
}

TEST_CASE("output directory precedence: --out beats SICSIM_OUT beats config") {
  const fs::path env_dir = fresh_dir("envout");
  const auto r =
      run_cli("tau --quiet", "SICSIM_OUT=" + (env_dir / "sub").string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(env_dir / "sub" / "tau.csv"));

  const fs::path flag_dir = fresh_dir("flagout");
  const auto r2 = run_cli("tau --quiet --out " + (flag_dir / "f").string(),
                          "SICSIM_OUT=" + (env_dir / "ignored").string());
  CHECK(r2.exit_code == 0);
  CHECK(fs::exists(flag_dir / "f" / "tau.csv"));
  CHECK(!fs::exists(env_dir / "ignored"));
}

TEST_CASE("seed flag changes stochastic outputs, same seed repeats them") {
  const fs::path a = fresh_dir("seed_a");
  const fs::path b = fresh_dir("seed_b");
  const fs::path c = fresh_dir("seed_c");
  const std::string cfg = (golden_dir() / "double-slit" / "config.cfg").string();
  CHECK(run_cli("double-slit --config " + cfg + " --seed 5 --out " + a.string())
            .exit_code == 0);
  CHECK(run_cli("double-slit --config " + cfg + " --seed 5 --out " + b.string())
            .exit_code == 0);
  CHECK(run_cli("double-slit --config " + cfg + " --seed 6 --out " + c.string())
            .exit_code == 0);
  CHECK(slurp(a / "hits.csv") == slurp(b / "hits.csv"));
  CHECK(slurp(a / "hits.csv") != slurp(c / "hits.csv"));
}
