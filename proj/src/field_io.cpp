#include "sic/field_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sic/numio.hpp"
#include "sic/version.hpp"

namespace sic {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("field snapshot: " + what);
}

void write_array(std::ostream& os, const std::vector<double>& v, std::size_t per_line) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << fmt_double(v[i]);
    os << ((i % per_line == per_line - 1) ? '\n' : ' ');
  }
}

} // namespace

const char* const kEnergyCsvHeader = "step,time,total,quadratic,nonlinear,gauss_max";

std::string energy_csv_row(long long step, double time, const EnergyBreakdown& e,
                           double gauss_max) {
  std::string row = fmt_int(step);
  row += ',';
  row += fmt_double(time);
  row += ',';
  row += fmt_double(e.total);
  row += ',';
  row += fmt_double(e.quadratic);
  row += ',';
  row += fmt_double(e.nonlinear);
  row += ',';
  row += fmt_double(gauss_max);
  return row;
}

void save_snapshot(std::ostream& os, const FieldConfiguration& cfg, const LatticeSpec& spec) {
  const GaugeGroup group = GaugeGroup::make(spec.group);
  const std::size_t per_line =
      3 * static_cast<std::size_t>(group.adjoint_dim());
  os << "# sicsim-field-snapshot v" << kSnapshotFormatVersion << "\n";
  os << "group = " << group.name() << "\n";
  os << "spatial_dims = " << spec.spatial_dims << "\n";
  os << "sites_per_dim = " << spec.sites_per_dim << "\n";
  os << "spacing = " << fmt_double(spec.spacing) << "\n";
  os << "coupling = " << fmt_double(spec.coupling) << "\n";
  os << "dt = " << fmt_double(spec.dt) << "\n";
  os << "time = " << fmt_double(cfg.time) << "\n";
  os << "[A]\n";
  write_array(os, cfg.A, per_line);
  os << "[E]\n";
  write_array(os, cfg.E, per_line);
}

void save_snapshot_file(const std::string& path, const FieldConfiguration& cfg,
                        const LatticeSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_snapshot(out, cfg, spec);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::pair<LatticeSpec, FieldConfiguration> load_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail("empty input");
  const std::string magic = "# sicsim-field-snapshot v";
  if (line.rfind(magic, 0) != 0) fail("missing header line");
  const auto ver = parse_int(trim(std::string_view(line).substr(magic.size())));
  if (!ver || *ver != kSnapshotFormatVersion)
    fail("unsupported format version: " + line);

  LatticeSpec spec;
  FieldConfiguration cfg;
  bool have_group = false;
  while (std::getline(is, line)) {
    const auto t = trim(line);
    if (t == "[A]") break;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) fail("malformed header entry: " + line);
    const auto key = trim(t.substr(0, eq));
    const auto val = trim(t.substr(eq + 1));
    if (key == "group") {
      const auto kind = GaugeGroup::parse(val);
      if (!kind) fail("unknown group: " + std::string(val));
      spec.group = *kind;
      have_group = true;
    } else if (key == "spatial_dims") {
      const auto v = parse_int(val);
      if (!v) fail("bad spatial_dims");
      spec.spatial_dims = static_cast<int>(*v);
    } else if (key == "sites_per_dim") {
      const auto v = parse_int(val);
      if (!v) fail("bad sites_per_dim");
      spec.sites_per_dim = static_cast<int>(*v);
    } else if (key == "spacing" || key == "coupling" || key == "dt" || key == "time") {
      const auto v = parse_double(val);
      if (!v) fail("bad numeric value for " + std::string(key));
      if (key == "spacing") spec.spacing = *v;
      else if (key == "coupling") spec.coupling = *v;
      else if (key == "dt") spec.dt = *v;
      else cfg.time = *v;
    } else {
      fail("unknown header key: " + std::string(key));
    }
  }
  if (!have_group) fail("missing group");
  spec.ensure_valid();

  const GaugeGroup group = GaugeGroup::make(spec.group);
  const std::size_t comps =
      spec.site_count() * 3 * static_cast<std::size_t>(group.adjoint_dim());

  const auto read_array = [&](std::vector<double>& dst, const char* name,
                              bool expect_section_after) {
    dst.clear();
    dst.reserve(comps);
    while (dst.size() < comps) {
      if (!std::getline(is, line)) fail(std::string("truncated ") + name + " array");
      for (const auto tok : split(trim(line), ' ')) {
        if (tok.empty()) continue;
        const auto v = parse_double(tok);
        if (!v) fail(std::string("bad number in ") + name + " array");
        dst.push_back(*v);
      }
    }
    if (dst.size() != comps) fail(std::string("wrong ") + name + " array length");
    if (expect_section_after) {
      if (!std::getline(is, line) || trim(line) != "[E]") fail("missing [E] section");
    }
  };
  read_array(cfg.A, "A", true);
  read_array(cfg.E, "E", false);
  return {spec, cfg};
}

std::pair<LatticeSpec, FieldConfiguration> load_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_snapshot(in);
}

} // namespace sic
