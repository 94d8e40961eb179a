#include "sic/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "sic/collapse.hpp"
#include "sic/experiments.hpp"
#include "sic/field_io.hpp"
#include "sic/numio.hpp"
#include "sic/rng.hpp"
#include "sic/version.hpp"
#include "sic/ym_lattice.hpp"

namespace sic {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* const kSeedDiscipline =
    "stream(i) = splitmix64(master_seed + 0x9E3779B97F4A7C15 * (i + 1)); "
    "lattice initial data uses stream(0); trajectory i uses stream(i); "
    "sweep row j derives its trajectory streams from sub-master stream(j)";

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["mode"] = cfg.mode;
  j["seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  ordered_json lat;
  lat["group"] = std::string(GaugeGroup::make(cfg.lattice.group).name());
  lat["spatial_dims"] = cfg.lattice.spatial_dims;
  lat["sites_per_dim"] = cfg.lattice.sites_per_dim;
  lat["spacing"] = cfg.lattice.spacing;
  lat["coupling"] = cfg.lattice.coupling;
  lat["dt"] = cfg.lattice.dt;
  lat["steps"] = cfg.lattice_steps;
  lat["sample_every"] = cfg.sample_every;
  lat["init_amplitude"] = cfg.init_amplitude;
  lat["init_ripple"] = cfg.init_ripple;
  j["lattice"] = lat;
  ordered_json col;
  col["hbar_units"] = cfg.hbar_units;
  if (cfg.rate.has_value()) col["rate"] = *cfg.rate;
  if (cfg.enl_gev.has_value()) col["enl_gev"] = *cfg.enl_gev;
  col["r_c"] = cfg.r_c;
  col["interval_mode"] = cfg.interval_mode;
  j["collapse"] = col;
  ordered_json slit;
  slit["separation"] = cfg.slit.separation;
  slit["width"] = cfg.slit.width;
  slit["flight_time"] = cfg.slit.flight_time;
  slit["grid_points"] = cfg.slit.grid_points;
  slit["dx"] = cfg.slit.dx;
  slit["mass"] = cfg.slit.mass;
  slit["hbar"] = cfg.slit.hbar;
  slit["steps"] = cfg.slit_steps;
  slit["trajectories"] = cfg.trajectories;
  j["slit"] = slit;
  j["sweep"] = ordered_json{{"rates", cfg.sweep_rates}};
  return j;
}

ordered_json manifest_skeleton(const RunConfig& cfg) {
  ordered_json m;
  m["manifest_version"] = kManifestFormatVersion;
  m["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
  m["mode"] = cfg.mode;
  m["master_seed"] = cfg.master_seed;
  m["seed_discipline"] = kSeedDiscipline;
  m["config_text"] = emit_config(cfg);
  m["config"] = config_json(cfg);
  return m;
}

void write_manifest(const fs::path& dir, ordered_json& m) {
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

int run_tau(const RunConfig& cfg, const fs::path& dir, bool quiet) {
  // The timescale is physical by definition: hbar in GeV*s against an
  // energy in GeV, independent of the hbar_units chosen for grid evolution.
  const double e_nl = cfg.enl_gev.value_or(0.2);
  const double tau = decoherence_time(e_nl, kHbarGeVSeconds);

  std::string csv = "enl_gev,hbar_gev_s,tau_s\n";
  csv += fmt_double(e_nl) + "," + fmt_double(kHbarGeVSeconds) + "," + fmt_double(tau) + "\n";
  write_text_file(dir / "tau.csv", csv);

  ordered_json m = manifest_skeleton(cfg);
  m["outputs"] = ordered_json{{"tau_csv", "tau.csv"}, {"manifest", "manifest.json"}};
  m["results"] = ordered_json{
      {"enl_gev", e_nl}, {"hbar_gev_s", kHbarGeVSeconds}, {"tau_s", tau}};
  write_manifest(dir, m);

  if (!quiet)
    std::cout << "tau = " << fmt_double(tau) << " s for E_NL = " << fmt_double(e_nl)
              << " GeV\n";
  return 0;
}

int run_ym_evolve(const RunConfig& cfg, const fs::path& dir, bool quiet) {
  const LatticeSpec& spec = cfg.lattice;
  FieldConfiguration field = random_initial_data(
      spec, derive_stream_seed(cfg.master_seed, 0), cfg.init_amplitude, cfg.init_ripple);
  Evolver ev(spec);

  std::string csv = std::string(kEnergyCsvHeader) + "\n";
  double e0_total = 0.0;
  double max_drift = 0.0;
  double max_gauss = 0.0;
  EnergyBreakdown last{};
  const auto sample = [&](long long step) {
    const EnergyBreakdown e = ev.energy(field);
    const GaussResult g = ev.gauss(field);
    csv += energy_csv_row(step, field.time, e, g.max_abs) + "\n";
    if (step == 0) e0_total = e.total;
    const double scale = std::abs(e0_total) > 0.0 ? std::abs(e0_total) : 1.0;
    max_drift = std::max(max_drift, std::abs(e.total - e0_total) / scale);
    max_gauss = std::max(max_gauss, g.max_abs);
    last = e;
  };

  sample(0);
  for (long long step = 1; step <= cfg.lattice_steps; ++step) {
    ev.step(field);
    if (step % cfg.sample_every == 0 || step == cfg.lattice_steps) sample(step);
  }

  write_text_file(dir / "energy.csv", csv);
  std::ostringstream snap;
  save_snapshot(snap, field, spec);
  write_text_file(dir / "snapshot.txt", snap.str());

  ordered_json m = manifest_skeleton(cfg);
  m["outputs"] = ordered_json{{"energy_csv", "energy.csv"},
                              {"snapshot", "snapshot.txt"},
                              {"manifest", "manifest.json"}};
  m["results"] = ordered_json{{"steps", cfg.lattice_steps},
                              {"final_time", field.time},
                              {"initial_total_energy", e0_total},
                              {"final_total_energy", last.total},
                              {"final_nonlinear_energy", last.nonlinear},
                              {"max_abs_relative_energy_drift", max_drift},
                              {"max_gauss_residual", max_gauss}};
  write_manifest(dir, m);

  if (!quiet)
    std::cout << "ym-evolve: " << fmt_int(cfg.lattice_steps)
              << " steps, relative energy drift <= " << fmt_double(max_drift)
              << ", max Gauss residual " << fmt_double(max_gauss) << "\n";
  return 0;
}

std::string density_csv(const std::vector<double>& mean_density,
                        const DoubleSlitGeometry& geom) {
  std::string csv = "x,mean_density\n";
  for (std::size_t i = 0; i < mean_density.size(); ++i) {
    const double x =
        (static_cast<double>(i) - geom.grid_points / 2) * geom.dx;
    csv += fmt_double(x) + "," + fmt_double(mean_density[i]) + "\n";
  }
  return csv;
}

std::string hits_csv(const std::vector<HitRecord>& hits) {
  std::string csv = "trajectory_id,hit_time,center\n";
  for (const auto& h : hits)
    csv += fmt_int(h.trajectory) + "," + fmt_double(h.t) + "," + fmt_double(h.center) + "\n";
  return csv;
}

int run_double_slit(const RunConfig& cfg, const fs::path& dir, bool quiet) {
  EnsembleOptions opts;
  opts.steps = cfg.slit_steps;
  const EnsembleResult res = run_ensemble(cfg.slit, cfg.collapse_params(),
                                          cfg.trajectories, cfg.master_seed, opts);

  write_text_file(dir / "density.csv", density_csv(res.mean_density, cfg.slit));
  write_text_file(dir / "hits.csv", hits_csv(res.hit_log));

  ordered_json m = manifest_skeleton(cfg);
  m["outputs"] = ordered_json{{"density_csv", "density.csv"},
                              {"hits_csv", "hits.csv"},
                              {"manifest", "manifest.json"}};
  m["results"] = ordered_json{{"visibility", res.visibility.v},
                              {"visibility_stderr", res.visibility.stderr_},
                              {"mean_hits", res.visibility.mean_hits},
                              {"n_trajectories", res.visibility.n_trajectories},
                              {"aborted", res.aborted},
                              {"steps_used", res.steps_used},
                              {"density_integral", res.density_integral},
                              {"low_contrast", res.visibility.low_contrast}};
  write_manifest(dir, m);

  if (!quiet)
    std::cout << "double-slit: V = " << fmt_double(res.visibility.v) << " +/- "
              << fmt_double(res.visibility.stderr_) << " (mean hits "
              << fmt_double(res.visibility.mean_hits) << ", trajectories "
              << fmt_int(res.visibility.n_trajectories) << ")\n";
  return 0;
}

int run_sweep(const RunConfig& cfg, const fs::path& dir, bool quiet) {
  EnsembleOptions opts;
  opts.steps = cfg.slit_steps;
  const std::vector<SweepRow> rows =
      coherence_sweep(cfg.slit, cfg.collapse_params(), cfg.sweep_rates,
                      cfg.trajectories, cfg.master_seed, opts);

  std::string csv = "rate,lambda_T,V,stderr,mean_hits\n";
  ordered_json jrows = ordered_json::array();
  for (const auto& r : rows) {
    csv += fmt_double(r.rate) + "," + fmt_double(r.lambda_t) + "," + fmt_double(r.v) + "," +
           fmt_double(r.stderr_) + "," + fmt_double(r.mean_hits) + "\n";
    jrows.push_back(ordered_json{{"rate", r.rate},
                                 {"lambda_T", r.lambda_t},
                                 {"V", r.v},
                                 {"stderr", r.stderr_},
                                 {"mean_hits", r.mean_hits},
                                 {"steps_used", r.steps_used}});
    if (!quiet)
      std::cout << "sweep: rate " << fmt_double(r.rate) << " (lambda_T "
                << fmt_double(r.lambda_t) << ") -> V = " << fmt_double(r.v) << " +/- "
                << fmt_double(r.stderr_) << "\n";
  }
  write_text_file(dir / "sweep.csv", csv);

  ordered_json m = manifest_skeleton(cfg);
  m["outputs"] = ordered_json{{"sweep_csv", "sweep.csv"}, {"manifest", "manifest.json"}};
  m["results"] = ordered_json{{"rows", jrows}};
  write_manifest(dir, m);
  return 0;
}

} // namespace

std::string resolve_output_dir(const RunConfig& cfg, const RunOverrides& overrides) {
  if (!overrides.output_dir.empty()) return overrides.output_dir;
  if (const char* env = std::getenv("SICSIM_OUT"); env && *env) return env;
  return cfg.output_dir;
}

int run(const RunConfig& cfg, const RunOverrides& overrides) {
  // Mode used for blame when an escaped exception has no more specific type.
  const char* module = "runner";
  if (cfg.mode == "ym-evolve") module = "ym_lattice";
  else if (cfg.mode == "tau") module = "collapse";
  else module = "experiments";

  try {
    const fs::path dir = resolve_output_dir(cfg, overrides);
    fs::create_directories(dir);
    if (cfg.mode == "tau") return run_tau(cfg, dir, overrides.quiet);
    if (cfg.mode == "ym-evolve") return run_ym_evolve(cfg, dir, overrides.quiet);
    if (cfg.mode == "double-slit") return run_double_slit(cfg, dir, overrides.quiet);
    if (cfg.mode == "sweep") return run_sweep(cfg, dir, overrides.quiet);
    std::cerr << "run error [runner]: unknown mode '" << cfg.mode << "'\n";
    return 3;
  } catch (const EvolutionDiverged& e) {
    std::cerr << "run error [ym_lattice]: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateHit& e) {
    std::cerr << "run error [collapse]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "run error [" << module << "]: " << e.what() << "\n";
    return 3;
  }
}

} // namespace sic
