#include "mml/serialize.hpp"

#include "mml/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mml::io {

namespace {

const char* kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::gaussian: return "gaussian";
    case PotentialKind::quartic: return "quartic";
    case PotentialKind::even_polynomial: return "even_polynomial";
    case PotentialKind::user_table: return "user_table";
  }
  fail(errc::internal, "unknown potential kind");
}

double get_number(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_number(), errc::io,
          std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_array(), errc::io,
          std::string("missing or non-array field '") + key + "'");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    require(v.is_number(), errc::io, std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

} // namespace

json to_json(const Potential& p) {
  json j;
  j["kind"] = kind_name(p.kind());
  j["epsilon"] = p.epsilon();
  j["clip_radius"] = p.clip_radius();
  switch (p.kind()) {
    case PotentialKind::gaussian:
      break;
    case PotentialKind::quartic:
      // stored as the even polynomial (0, 0, t/2, 0, g/4)
      j["g"] = 4.0 * p.coefficients()[4];
      j["t"] = 2.0 * p.coefficients()[2];
      break;
    case PotentialKind::even_polynomial:
      j["coefficients"] = p.coefficients();
      break;
    case PotentialKind::user_table:
      j["x"] = p.table_x();
      j["y"] = p.table_y();
      break;
  }
  return j;
}

Potential potential_from_json(const json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), errc::io,
          "potential JSON needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  const double eps = j.contains("epsilon") ? get_number(j, "epsilon") : Potential::default_epsilon;
  const double clip =
      j.contains("clip_radius") ? get_number(j, "clip_radius") : Potential::default_clip;
  if (kind == "gaussian") return Potential::gaussian(eps, clip);
  if (kind == "quartic")
    return Potential::quartic(get_number(j, "g"), get_number(j, "t"), eps, clip);
  if (kind == "even_polynomial")
    return Potential::even_polynomial(get_array(j, "coefficients"), eps, clip);
  if (kind == "user_table")
    return Potential::user_table(get_array(j, "x"), get_array(j, "y"), eps, clip);
  fail(errc::io, "unknown potential kind '" + kind + "'");
}

json to_json(const EquilibriumMeasure& m) {
  json j;
  j["a"] = m.a;
  j["b"] = m.b;
  j["u_star"] = m.u_star;
  j["density_coefficients"] = m.u_coeffs;
  return j;
}

EquilibriumMeasure equilibrium_from_json(const json& j) {
  EquilibriumMeasure m;
  m.a = get_number(j, "a");
  m.b = get_number(j, "b");
  require(m.b > m.a, errc::io, "equilibrium JSON needs b > a");
  m.u_star = get_number(j, "u_star");
  m.u_coeffs = get_array(j, "density_coefficients");
  require(!m.u_coeffs.empty(), errc::io, "equilibrium JSON needs density coefficients");
  // solve_equilibrium at grid order m stores exactly m density coefficients
  m.grid = quad::ChebGrid(m.u_coeffs.size(), m.a, m.b);
  m.grid_density.resize(m.grid.size());
  for (std::size_t i = 0; i < m.grid.size(); ++i) m.grid_density[i] = m.density(m.grid.node(i));
  return m;
}

json to_json(const RecurrenceTable& t) {
  json j;
  j["n"] = t.n;
  j["off_diag"] = t.off_diag;
  j["diag"] = t.diag;
  j["log_gamma"] = t.log_gamma;
  return j;
}

RecurrenceTable recurrence_from_json(const json& j) {
  RecurrenceTable t;
  require(j.contains("n") && j["n"].is_number_unsigned(), errc::io,
          "recurrence JSON needs an unsigned 'n'");
  t.n = j["n"].get<std::size_t>();
  t.off_diag = get_array(j, "off_diag");
  t.diag = get_array(j, "diag");
  t.log_gamma = get_array(j, "log_gamma");
  require(t.off_diag.size() == t.n && t.diag.size() == t.n && t.log_gamma.size() == t.n + 1,
          errc::io, "recurrence JSON has inconsistent array lengths");
  return t;
}

json to_json(const IdentityReport& r) {
  json j;
  j["pair_moment"] = r.pair_moment;
  j["pair_moment_target"] = r.pair_moment_target;
  j["residual_a"] = r.residual_a;
  j["residual_b"] = r.residual_b;
  j["residual_c"] = r.residual_c;
  j["probe_points"] = r.probe_points;
  return j;
}

json to_json(const NcmReport& r) {
  json j;
  j["cdf_sup_distance"] = r.cdf_sup_distance;
  j["var_identity"] = r.var_identity;
  j["var_square"] = r.var_square;
  j["var_bump"] = r.var_bump;
  // index 0 <-> epsilon = 0.1, index 1 <-> epsilon = 0.2
  j["epsilons"] = json::array({0.1, 0.2});
  j["outside_fraction"] = json::array({r.outside_fraction[0], r.outside_fraction[1]});
  j["tail_exponent"] = json::array({r.tail_exponent[0], r.tail_exponent[1]});
  j["predicted_tail"] = json::array({r.predicted_tail[0], r.predicted_tail[1]});
  return j;
}

json to_json(const FourierDiagnostic& d) {
  json j;
  j["p_grid"] = d.p_grid;
  j["f_values"] = d.f_values;
  j["total_jump"] = d.total_jump;
  j["slope_at_zero"] = d.slope_at_zero;
  j["asymmetry"] = d.asymmetry;
  j["monotonicity_slack"] = d.monotonicity_slack;
  j["window_note"] = d.window_note;
  return j;
}

json to_json(const ConvergenceReport& r) {
  json j;
  j["records"] = json::array();
  for (const auto& rec : r.records) {
    json e;
    e["n"] = rec.n;
    e["sup_density_error"] = rec.sup_density_error;
    e["kernel_sup_error"] = rec.kernel_sup_error;
    e["gap_sup_error"] = rec.gap_sup_error;
    e["free_energy_error"] = rec.free_energy_error;
    j["records"].push_back(e);
  }
  j["slope_density"] = r.slope_density;
  j["slope_kernel"] = r.slope_kernel;
  j["slope_gap"] = r.slope_gap;
  j["slope_free_energy"] = r.slope_free_energy;
  j["window"] = {r.window_lo, r.window_hi};
  j["window_note"] = r.window_note;
  return j;
}

json to_json(const RunConfig& c) {
  json j;
  j["potential"] = to_json(c.potential);
  j["n_list"] = c.n_list;
  j["lambda0"] = c.lambda0;
  j["d"] = c.d;
  j["box"] = c.box;
  j["window"] = c.window;
  j["gap_s"] = c.gap_s;
  j["gap_order"] = c.gap_order;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("potential")) c.potential = potential_from_json(j["potential"]);
  if (j.contains("n_list")) {
    c.n_list.clear();
    require(j["n_list"].is_array(), errc::io, "n_list must be an array");
    for (const auto& v : j["n_list"]) {
      require(v.is_number_unsigned(), errc::io, "n_list entries must be unsigned");
      c.n_list.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("lambda0")) c.lambda0 = get_number(j, "lambda0");
  if (j.contains("d")) c.d = get_number(j, "d");
  if (j.contains("box")) c.box = get_number(j, "box");
  if (j.contains("window")) c.window = get_number(j, "window");
  if (j.contains("gap_s")) c.gap_s = get_array(j, "gap_s");
  if (j.contains("gap_order")) {
    require(j["gap_order"].is_number_unsigned(), errc::io, "gap_order must be unsigned");
    c.gap_order = j["gap_order"].get<std::size_t>();
  }
  return c;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), errc::io, "malformed JSON input");
  return j;
}

std::string csv_cell(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(columns.size()) {
  require(columns_ > 0, errc::invalid_argument, "CSV needs at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text_ += ',';
    text_ += columns[i];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  require(values.size() == columns_, errc::invalid_argument, "CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_cell(values[i]);
  }
  text_ += '\n';
  ++rows_;
}

void CsvTable::write(const std::string& path) const { write_text(path, text_); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary); // binary: keep '\n' endings as-is
  require(out.good(), errc::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  require(out.good(), errc::io, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

} // namespace mml::io
