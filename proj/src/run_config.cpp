#include "sic/run_config.hpp"

#include <map>
#include <sstream>

#include "sic/numio.hpp"

namespace sic {
namespace {

const char* const kSections[] = {"lattice", "collapse", "slit", "sweep"};

bool known_section(std::string_view s) {
  for (const char* k : kSections)
    if (s == k) return true;
  return false;
}

struct Parser {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, int> seen; // "section.key" -> line, duplicate detection

  void error(int line, const std::string& msg) {
    errors.push_back("line " + fmt_int(line) + ": " + msg);
  }

  bool claim(int line, const std::string& section, std::string_view key) {
    const std::string id = section + "." + std::string(key);
    const auto [it, inserted] = seen.insert({id, line});
    if (!inserted) {
      error(line, "duplicate key '" + std::string(key) + "' (first set on line " +
                      fmt_int(it->second) + ")");
      return false;
    }
    return true;
  }

  std::optional<double> want_double(int line, std::string_view key, std::string_view val) {
    const auto v = parse_double(val);
    if (!v) error(line, std::string(key) + ": expected a number, got '" + std::string(val) + "'");
    return v;
  }

  std::optional<long long> want_int(int line, std::string_view key, std::string_view val) {
    const auto v = parse_int(val);
    if (!v) error(line, std::string(key) + ": expected an integer, got '" + std::string(val) + "'");
    return v;
  }

  void top_level(int line, std::string_view key, std::string_view val) {
    if (key == "mode") {
      cfg.mode = std::string(val);
    } else if (key == "seed") {
      const auto v = parse_uint(val);
      if (!v) error(line, "seed: expected an unsigned 64-bit integer");
      else cfg.master_seed = *v;
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(val);
    } else {
      error(line, "unknown top-level key '" + std::string(key) + "'");
    }
  }

  void lattice(int line, std::string_view key, std::string_view val) {
    if (key == "group") {
      const auto kind = GaugeGroup::parse(val);
      if (!kind) error(line, "group: expected U1, SU2, or SU3");
      else cfg.lattice.group = *kind;
    } else if (key == "spatial_dims") {
      if (const auto v = want_int(line, key, val)) cfg.lattice.spatial_dims = static_cast<int>(*v);
    } else if (key == "sites_per_dim") {
      if (const auto v = want_int(line, key, val)) cfg.lattice.sites_per_dim = static_cast<int>(*v);
    } else if (key == "spacing") {
      if (const auto v = want_double(line, key, val)) cfg.lattice.spacing = *v;
    } else if (key == "coupling") {
      if (const auto v = want_double(line, key, val)) cfg.lattice.coupling = *v;
    } else if (key == "dt") {
      if (const auto v = want_double(line, key, val)) cfg.lattice.dt = *v;
    } else if (key == "steps") {
      if (const auto v = want_int(line, key, val)) cfg.lattice_steps = *v;
    } else if (key == "sample_every") {
      if (const auto v = want_int(line, key, val)) cfg.sample_every = *v;
    } else if (key == "init_amplitude") {
      if (const auto v = want_double(line, key, val)) cfg.init_amplitude = *v;
    } else if (key == "init_ripple") {
      if (const auto v = want_double(line, key, val)) cfg.init_ripple = *v;
    } else {
      error(line, "unknown [lattice] key '" + std::string(key) + "'");
    }
  }

  void collapse(int line, std::string_view key, std::string_view val) {
    if (key == "hbar_units") {
      cfg.hbar_units = std::string(val);
    } else if (key == "rate") {
      if (const auto v = want_double(line, key, val)) cfg.rate = *v;
    } else if (key == "enl_gev") {
      if (const auto v = want_double(line, key, val)) cfg.enl_gev = *v;
    } else if (key == "r_c") {
      if (const auto v = want_double(line, key, val)) cfg.r_c = *v;
    } else if (key == "interval_mode") {
      cfg.interval_mode = std::string(val);
    } else {
      error(line, "unknown [collapse] key '" + std::string(key) + "'");
    }
  }

  void slit(int line, std::string_view key, std::string_view val) {
    if (key == "separation") {
      if (const auto v = want_double(line, key, val)) cfg.slit.separation = *v;
    } else if (key == "width") {
      if (const auto v = want_double(line, key, val)) cfg.slit.width = *v;
    } else if (key == "flight_time") {
      if (const auto v = want_double(line, key, val)) cfg.slit.flight_time = *v;
    } else if (key == "grid_points") {
      if (const auto v = want_int(line, key, val)) cfg.slit.grid_points = static_cast<int>(*v);
    } else if (key == "dx") {
      if (const auto v = want_double(line, key, val)) cfg.slit.dx = *v;
    } else if (key == "mass") {
      if (const auto v = want_double(line, key, val)) cfg.slit.mass = *v;
    } else if (key == "hbar") {
      if (const auto v = want_double(line, key, val)) cfg.slit.hbar = *v;
    } else if (key == "steps") {
      if (const auto v = want_int(line, key, val)) cfg.slit_steps = *v;
    } else if (key == "trajectories") {
      if (const auto v = want_int(line, key, val)) cfg.trajectories = *v;
    } else {
      error(line, "unknown [slit] key '" + std::string(key) + "'");
    }
  }

  void sweep(int line, std::string_view key, std::string_view val) {
    if (key == "rates") {
      std::vector<double> rates;
      bool ok = true;
      for (const auto tok : split(val, ',')) {
        const auto t = trim(tok);
        if (t.empty()) continue;
        const auto v = parse_double(t);
        if (!v) {
          error(line, "rates: '" + std::string(t) + "' is not a number");
          ok = false;
          break;
        }
        rates.push_back(*v);
      }
      if (ok && rates.empty()) {
        error(line, "rates: list is empty");
        ok = false;
      }
      if (ok) cfg.sweep_rates = std::move(rates);
    } else {
      error(line, "unknown [sweep] key '" + std::string(key) + "'");
    }
  }
};

} // namespace

CollapseParams RunConfig::collapse_params() const {
  CollapseParams p;
  p.hbar = hbar_units == "physical" ? kHbarGeVSeconds : 1.0;
  if (enl_gev.has_value()) {
    p.rate_source = CollapseParams::RateSource::DerivedFromEnergy;
    p.e_nl = *enl_gev;
  } else {
    p.rate_source = CollapseParams::RateSource::FixedRate;
    p.rate = rate.value_or(0.0);
  }
  p.r_c = r_c;
  p.interval_mode = interval_mode == "fixed" ? CollapseParams::IntervalMode::Fixed
                                             : CollapseParams::IntervalMode::Poisson;
  return p;
}

ConfigParseResult parse_config(std::string_view text, std::string_view mode_override) {
  Parser p;
  std::string section;
  int line_no = 0;
  for (const auto raw_line : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        p.error(line_no, "malformed section header '" + std::string(line) + "'");
        continue;
      }
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!known_section(name)) {
        p.error(line_no, "unknown section '[" + std::string(name) + "]'");
        section = "!"; // swallow keys of the unknown section without cascading
        continue;
      }
      section = std::string(name);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      p.error(line_no, "expected 'key = value', got '" + std::string(line) + "'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    if (key.empty()) {
      p.error(line_no, "empty key");
      continue;
    }
    if (section == "!") continue;
    if (!p.claim(line_no, section, key)) continue;

    if (section.empty()) p.top_level(line_no, key, val);
    else if (section == "lattice") p.lattice(line_no, key, val);
    else if (section == "collapse") p.collapse(line_no, key, val);
    else if (section == "slit") p.slit(line_no, key, val);
    else if (section == "sweep") p.sweep(line_no, key, val);
  }

  if (!mode_override.empty()) p.cfg.mode = std::string(mode_override);
  for (const auto& e : validate_config(p.cfg)) p.errors.push_back(e);

  ConfigParseResult out;
  out.errors = std::move(p.errors);
  if (out.errors.empty()) out.config = std::move(p.cfg);
  return out;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> errs;
  const bool mode_ok = cfg.mode == "ym-evolve" || cfg.mode == "tau" ||
                       cfg.mode == "double-slit" || cfg.mode == "sweep";
  if (cfg.mode.empty())
    errs.push_back("mode is required (ym-evolve | tau | double-slit | sweep)");
  else if (!mode_ok)
    errs.push_back("unknown mode '" + cfg.mode + "'");

  if (cfg.hbar_units != "natural" && cfg.hbar_units != "physical")
    errs.push_back("[collapse] hbar_units must be 'natural' or 'physical'");
  if (cfg.interval_mode != "poisson" && cfg.interval_mode != "fixed")
    errs.push_back("[collapse] interval_mode must be 'poisson' or 'fixed'");
  if (cfg.rate.has_value() && cfg.enl_gev.has_value())
    errs.push_back("[collapse] rate and enl_gev are exclusive; set one of them");
  if (cfg.rate.has_value() && *cfg.rate < 0.0) errs.push_back("[collapse] rate must be >= 0");
  if (cfg.enl_gev.has_value() && *cfg.enl_gev < 0.0)
    errs.push_back("[collapse] enl_gev must be >= 0");
  if (!(cfg.r_c > 0.0)) errs.push_back("[collapse] r_c must be > 0");

  if (cfg.mode == "ym-evolve") {
    for (const auto& e : cfg.lattice.validate()) errs.push_back("[lattice] " + e);
    if (cfg.lattice_steps < 1) errs.push_back("[lattice] steps must be >= 1");
    if (cfg.sample_every < 1) errs.push_back("[lattice] sample_every must be >= 1");
    if (cfg.init_amplitude < 0.0) errs.push_back("[lattice] init_amplitude must be >= 0");
    if (cfg.init_ripple < 0.0) errs.push_back("[lattice] init_ripple must be >= 0");
  }
  if (cfg.mode == "tau") {
    if (cfg.rate.has_value())
      errs.push_back("tau mode computes the timescale from enl_gev; rate is not applicable");
    if (cfg.enl_gev.has_value() && !(*cfg.enl_gev > 0.0))
      errs.push_back("tau mode requires enl_gev > 0 for a finite result");
  }
  if (cfg.mode == "double-slit" || cfg.mode == "sweep") {
    for (const auto& e : cfg.slit.validate()) errs.push_back("[slit] " + e);
    if (cfg.trajectories < 1) errs.push_back("[slit] trajectories must be >= 1");
    if (cfg.slit_steps < 0) errs.push_back("[slit] steps must be >= 0 (0 = automatic)");
  }
  if (cfg.mode == "sweep") {
    if (cfg.sweep_rates.empty()) errs.push_back("[sweep] rates must be non-empty");
    for (std::size_t j = 0; j < cfg.sweep_rates.size(); ++j) {
      if (cfg.sweep_rates[j] < 0.0) {
        errs.push_back("[sweep] rates must be non-negative");
        break;
      }
      if (j > 0 && cfg.sweep_rates[j] < cfg.sweep_rates[j - 1]) {
        errs.push_back("[sweep] rates must be sorted ascending");
        break;
      }
    }
  }
  return errs;
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode = " << cfg.mode << "\n";
  os << "seed = " << fmt_uint(cfg.master_seed) << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  os << "\n[lattice]\n";
  os << "group = " << GaugeGroup::make(cfg.lattice.group).name() << "\n";
  os << "spatial_dims = " << cfg.lattice.spatial_dims << "\n";
  os << "sites_per_dim = " << cfg.lattice.sites_per_dim << "\n";
  os << "spacing = " << fmt_double(cfg.lattice.spacing) << "\n";
  os << "coupling = " << fmt_double(cfg.lattice.coupling) << "\n";
  os << "dt = " << fmt_double(cfg.lattice.dt) << "\n";
  os << "steps = " << fmt_int(cfg.lattice_steps) << "\n";
  os << "sample_every = " << fmt_int(cfg.sample_every) << "\n";
  os << "init_amplitude = " << fmt_double(cfg.init_amplitude) << "\n";
  os << "init_ripple = " << fmt_double(cfg.init_ripple) << "\n";
  os << "\n[collapse]\n";
  os << "hbar_units = " << cfg.hbar_units << "\n";
  if (cfg.rate.has_value()) os << "rate = " << fmt_double(*cfg.rate) << "\n";
  if (cfg.enl_gev.has_value()) os << "enl_gev = " << fmt_double(*cfg.enl_gev) << "\n";
  os << "r_c = " << fmt_double(cfg.r_c) << "\n";
  os << "interval_mode = " << cfg.interval_mode << "\n";
  os << "\n[slit]\n";
  os << "separation = " << fmt_double(cfg.slit.separation) << "\n";
  os << "width = " << fmt_double(cfg.slit.width) << "\n";
  os << "flight_time = " << fmt_double(cfg.slit.flight_time) << "\n";
  os << "grid_points = " << cfg.slit.grid_points << "\n";
  os << "dx = " << fmt_double(cfg.slit.dx) << "\n";
  os << "mass = " << fmt_double(cfg.slit.mass) << "\n";
  os << "hbar = " << fmt_double(cfg.slit.hbar) << "\n";
  os << "steps = " << fmt_int(cfg.slit_steps) << "\n";
  os << "trajectories = " << fmt_int(cfg.trajectories) << "\n";
  os << "\n[sweep]\n";
  os << "rates = ";
  for (std::size_t j = 0; j < cfg.sweep_rates.size(); ++j) {
    if (j) os << ",";
    os << fmt_double(cfg.sweep_rates[j]);
  }
  os << "\n";
  return os.str();
}

} // namespace sic
