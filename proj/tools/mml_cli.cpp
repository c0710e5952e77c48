// Command-line front end for the matrix-model laboratory.
//
// Subcommands: eq, ortho, kernel, gap, sample, universality.  Every run
// writes its outputs plus a manifest.json (resolved config, config hash,
// library version, timings) under --out.  All numeric CSV output uses a
// header row, '.' decimal separator, '\n' line endings, and 17-significant-
// digit floats, so identical configs reproduce byte-identical files.
//
// Exit codes: 0 success, 1 invalid command line, 2 computation/config error
// (for `universality`, also a failed convergence invariant).

#include "mml.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

// ---- C-handle RAII -------------------------------------------------------

struct Str {
  char* p = nullptr;
  ~Str() { mml_free_string(p); }
  char** slot() { return &p; }
  std::string str() const { return p ? p : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** slot() { return &p; }
  operator T*() const { return p; }
};

using PotentialH = Handle<mml_potential, mml_potential_free>;
using EquilibriumH = Handle<mml_equilibrium, mml_equilibrium_free>;
using RecurrenceH = Handle<mml_recurrence, mml_recurrence_free>;
using KernelH = Handle<mml_kernel, mml_kernel_free>;
using SampleH = Handle<mml_sample, mml_sample_free>;

[[noreturn]] void die(const std::string& what) {
  std::cerr << "error: " << what << '\n';
  std::exit(2);
}

void check(mml_status st, const std::string& what) {
  if (st != MML_OK) die(what + ": " + mml_last_error());
}

// ---- CSV / file helpers --------------------------------------------------

std::string csv_cell(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvFile {
public:
  explicit CsvFile(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) text_ += ',';
      text_ += columns[i];
    }
    text_ += '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_cell(values[i]);
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

private:
  std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) die("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out.good()) die("write to '" + path.string() + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) die("cannot read '" + path + "'");
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

// ---- shared options ------------------------------------------------------

struct Common {
  std::string potential = "gaussian"; // builtin name or JSON file path
  double quartic_g = 1.0;
  double quartic_t = 0.0;
  std::string out = "mml_out";
  bool json_output = false;
  bool quiet = false;
  int threads = 0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_potential = true) {
  cmd->add_option("--out", c.out, "output directory (created if absent)")
      ->capture_default_str();
  cmd->add_flag("--json", c.json_output, "machine-readable JSON summary on stdout");
  cmd->add_flag("--quiet", c.quiet, "suppress stdout (files are still written)");
  cmd->add_option("--threads", c.threads,
                  "worker thread cap, 0 = all cores (env MML_THREADS overrides)");
  cmd->add_option("--seed", c.seed, "random seed where applicable")->capture_default_str();
  if (with_potential) {
    cmd->add_option("--potential", c.potential,
                    "builtin name (gaussian, quartic) or potential JSON file path")
        ->capture_default_str();
    cmd->add_option("--g", c.quartic_g, "quartic leading coefficient")->capture_default_str();
    cmd->add_option("--t", c.quartic_t, "quartic second-order coefficient")
        ->capture_default_str();
  }
}

void apply_threads(const Common& c) {
  int k = c.threads;
  if (const char* env = std::getenv("MML_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) die("MML_THREADS must be a nonnegative integer");
    k = static_cast<int>(v);
  }
  mml_set_threads(k);
}

// Builds the potential handle and aborts (exit 2) if the confinement audit
// fails, so every downstream stage starts from a usable V.
void make_potential(const Common& c, PotentialH& out) {
  if (c.potential == "gaussian") {
    check(mml_potential_create_gaussian(out.slot()), "potential");
  } else if (c.potential == "quartic") {
    check(mml_potential_create_quartic(c.quartic_g, c.quartic_t, out.slot()), "potential");
  } else {
    const std::string text = read_file(c.potential);
    check(mml_potential_create_from_json(text.c_str(), out.slot()),
          "potential file '" + c.potential + "'");
  }
  int all_pass = 0;
  Str report;
  check(mml_potential_validate(out, &all_pass, report.slot()), "potential validation");
  if (!all_pass) die("potential fails its confinement audit:\n" + report.str());
}

json potential_json(const PotentialH& p) {
  Str s;
  check(mml_potential_to_json(p, s.slot()), "potential serialization");
  return json::parse(s.str());
}

// ---- manifest ------------------------------------------------------------

class Manifest {
public:
  Manifest(std::string command, json config)
      : command_(std::move(command)),
        config_(std::move(config)),
        start_(std::chrono::steady_clock::now()) {}

  void add_file(const std::string& name) { files_.push_back(name); }
  void add_timing(const std::string& step, double seconds) { timings_[step] = seconds; }

  std::uint64_t config_hash() const { return fnv1a(config_.dump()); }

  void write(const std::filesystem::path& dir) {
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    timings_["total_seconds"] = total;
    json m;
    m["command"] = command_;
    m["version"] = mml_version();
    m["config"] = config_;
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, config_hash());
    m["config_hash"] = hex;
    m["files"] = files_;
    m["timings"] = timings_;
    write_file(dir / "manifest.json", m.dump(2) + "\n");
  }

private:
  std::string command_;
  json config_;
  std::vector<std::string> files_;
  json timings_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

std::filesystem::path prepare_out(const Common& c) {
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) die("cannot create output directory '" + c.out + "': " + ec.message());
  return dir;
}

void emit(const Common& c, const json& summary, const std::vector<std::string>& human) {
  if (c.quiet) return;
  if (c.json_output) {
    std::cout << summary.dump(2) << '\n';
  } else {
    for (const auto& line : human) std::cout << line << '\n';
  }
}

// ---- list parsing --------------------------------------------------------

// "lo..hi:step", "v1,v2,...", or a single value.
std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  const auto range_sep = text.find("..");
  if (range_sep != std::string::npos) {
    const auto step_sep = text.find(':', range_sep + 2);
    if (step_sep == std::string::npos)
      die("range '" + text + "' needs the form lo..hi:step");
    try {
      const double lo = std::stod(text.substr(0, range_sep));
      const double hi = std::stod(text.substr(range_sep + 2, step_sep - range_sep - 2));
      const double step = std::stod(text.substr(step_sep + 1));
      if (step <= 0.0 || hi < lo) die("range '" + text + "' must have step > 0 and hi >= lo");
      const std::size_t count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
      for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    } catch (const std::exception&) {
      die("cannot parse range '" + text + "'");
    }
    return out;
  }
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      out.push_back(std::stod(piece));
    } catch (const std::exception&) {
      die("cannot parse value '" + piece + "'");
    }
  }
  if (out.empty()) die("empty value list '" + text + "'");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      const long long v = std::stoll(piece);
      if (v <= 0) die("matrix sizes must be positive, got '" + piece + "'");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      die("cannot parse size '" + piece + "'");
    }
  }
  return out;
}

// ---- subcommands ---------------------------------------------------------

int cmd_eq(const Common& c, std::size_t grid_order, std::size_t points) {
  if (points < 2) die("--points must be at least 2");
  apply_threads(c);
  PotentialH p;
  make_potential(c, p);
  const auto dir = prepare_out(c);

  json config{{"potential", potential_json(p)}, {"grid_order", grid_order}, {"points", points}};
  Manifest manifest("eq", config);

  Timer solve_timer;
  EquilibriumH m;
  check(mml_equilibrium_solve(p, grid_order, m.slot()), "equilibrium solve");
  manifest.add_timing("solve_seconds", solve_timer.seconds());

  const double a = mml_equilibrium_a(m), b = mml_equilibrium_b(m);
  const double u_star = mml_equilibrium_u_star(m);
  const double e = mml_equilibrium_energy(p, m);

  Str mjson;
  check(mml_equilibrium_to_json(m, mjson.slot()), "equilibrium serialization");
  write_file(dir / "equilibrium.json", mjson.str() + "\n");
  manifest.add_file("equilibrium.json");

  CsvFile density({"lambda", "density", "cdf"});
  for (std::size_t i = 0; i < points; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    density.row({x, mml_equilibrium_density(m, x), mml_equilibrium_cdf(m, x)});
  }
  write_file(dir / "density.csv", density.text());
  manifest.add_file("density.csv");

  CsvFile effective({"lambda", "u_minus_u_star"});
  const double lo = a - 2.0, hi = b + 2.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    effective.row({x, mml_effective_potential(p, m, x) - u_star});
  }
  write_file(dir / "effective_potential.csv", effective.text());
  manifest.add_file("effective_potential.csv");

  manifest.write(dir);

  char support[64], ustar_line[48], energy_line[48];
  std::snprintf(support, sizeof support, "support: [%.6f, %.6f]", a, b);
  std::snprintf(ustar_line, sizeof ustar_line, "u_star: %.6f", u_star);
  std::snprintf(energy_line, sizeof energy_line, "energy: %.6f", e);
  emit(c, json{{"a", a}, {"b", b}, {"u_star", u_star}, {"energy", e}},
       {support, ustar_line, energy_line});
  return 0;
}

int cmd_ortho(const Common& c, std::size_t n) {
  apply_threads(c);
  PotentialH p;
  make_potential(c, p);
  const auto dir = prepare_out(c);

  json config{{"potential", potential_json(p)}, {"n", n}};
  Manifest manifest("ortho", config);

  Timer build_timer;
  RecurrenceH t;
  check(mml_recurrence_build(p, n, t.slot()), "recurrence build");
  manifest.add_timing("build_seconds", build_timer.seconds());

  std::vector<double> off(n), diag(n), logg(n + 1);
  check(mml_recurrence_copy(t, off.data(), diag.data(), logg.data()), "recurrence copy");
  const double fe = mml_free_energy(t);

  Str tjson;
  check(mml_recurrence_to_json(t, tjson.slot()), "recurrence serialization");
  write_file(dir / "recurrence.json", tjson.str() + "\n");
  manifest.add_file("recurrence.json");

  CsvFile table({"k", "off_diag", "diag", "log_gamma"});
  for (std::size_t k = 0; k < n; ++k)
    table.row({static_cast<double>(k), off[k], diag[k], logg[k]});
  write_file(dir / "recurrence.csv", table.text());
  manifest.add_file("recurrence.csv");

  manifest.write(dir);

  char fe_line[64];
  std::snprintf(fe_line, sizeof fe_line, "free_energy: %.12f", fe);
  emit(c, json{{"n", n}, {"free_energy", fe}, {"log_gamma_n", logg[n]}}, {fe_line});
  return 0;
}

int cmd_kernel(const Common& c, std::size_t n, std::size_t points) {
  if (points < 2) die("--points must be at least 2");
  apply_threads(c);
  PotentialH p;
  make_potential(c, p);
  const auto dir = prepare_out(c);

  json config{{"potential", potential_json(p)}, {"n", n}, {"points", points}};
  Manifest manifest("kernel", config);

  Timer build_timer;
  KernelH f;
  check(mml_kernel_create(p, n, f.slot()), "kernel build");
  manifest.add_timing("build_seconds", build_timer.seconds());

  // Density over the equilibrium support with half-unit shoulders.
  EquilibriumH m;
  check(mml_equilibrium_solve(p, 0, m.slot()), "equilibrium solve");
  const double lo = mml_equilibrium_a(m) - 0.5, hi = mml_equilibrium_b(m) + 0.5;
  CsvFile density({"lambda", "density_n", "density_limit"});
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    density.row({x, mml_kernel_density(f, x), mml_equilibrium_density(m, x)});
  }
  write_file(dir / "kernel_density.csv", density.text());
  manifest.add_file("kernel_density.csv");

  // Rescaled kernel on an (x, y) lattice around the bulk-window center, for
  // heat-map plotting of the sine-kernel shape.
  double blo = 0.0, bhi = 0.0;
  check(mml_kernel_bulk_window(f, &blo, &bhi), "bulk window");
  const double lambda0 = 0.5 * (blo + bhi);
  CsvFile lattice({"x", "y", "rescaled_kernel"});
  for (int i = -8; i <= 8; ++i)
    for (int j = -8; j <= 8; ++j) {
      const double x = 0.5 * i, y = 0.5 * j;
      lattice.row({x, y, mml_kernel_rescaled(f, lambda0, x, y)});
    }
  write_file(dir / "kernel_rescaled.csv", lattice.text());
  manifest.add_file("kernel_rescaled.csv");

  Timer id_timer;
  Str idjson;
  check(mml_kernel_identities_json(f, idjson.slot()), "kernel identities");
  manifest.add_timing("identities_seconds", id_timer.seconds());
  write_file(dir / "identities.json", idjson.str() + "\n");
  manifest.add_file("identities.json");

  manifest.write(dir);

  const json id = json::parse(idjson.str());
  emit(c, json{{"n", n}, {"identities", id}},
       {"pair_moment: " + csv_cell(id["pair_moment"].get<double>()) +
            " (target " + csv_cell(id["pair_moment_target"].get<double>()) + ")",
        "max_residual: " +
            csv_cell(std::max({id["residual_a"].get<double>(), id["residual_b"].get<double>(),
                               id["residual_c"].get<double>()}))});
  return 0;
}

int cmd_gap(const Common& c, bool sine, std::size_t n, double lambda0,
            const std::string& s_spec, std::size_t order) {
  apply_threads(c);
  const std::vector<double> s_values = parse_value_list(s_spec);
  const auto dir = prepare_out(c);

  json config{{"sine", sine}, {"s", s_values}, {"order", order}};
  PotentialH p;
  KernelH f;
  if (!sine) {
    make_potential(c, p);
    config["potential"] = potential_json(p);
    config["n"] = n;
    config["lambda0"] = lambda0;
  }
  Manifest manifest("gap", config);

  Timer timer;
  if (!sine) check(mml_kernel_create(p, n, f.slot()), "kernel build");

  // Sine mode tabulates the universal determinant alone; potential mode adds
  // the universal limit and the gap between the two at each s.
  CsvFile table(sine ? std::vector<std::string>{"s", "value", "error_estimate"}
                     : std::vector<std::string>{"s", "value", "sine_limit",
                                                "abs_difference", "error_estimate"});
  double last = 0.0;
  for (double s : s_values) {
    double value = 0.0, est = 0.0;
    if (sine) {
      check(mml_gap_sine(s, order, &value, &est), "sine-kernel determinant");
      table.row({s, value, est});
    } else {
      check(mml_gap_hole(f, lambda0, s, order, &value, &est), "hole probability");
      double sv = 0.0;
      check(mml_gap_sine(s, order, &sv, nullptr), "sine-kernel determinant");
      table.row({s, value, sv, std::abs(value - sv), est});
    }
    last = value;
  }
  manifest.add_timing("determinants_seconds", timer.seconds());
  write_file(dir / "gap.csv", table.text());
  manifest.add_file("gap.csv");
  manifest.write(dir);

  emit(c, json{{"count", s_values.size()}, {"last_s", s_values.back()}, {"last_value", last}},
       {"determinants: " + std::to_string(s_values.size()),
        "E(" + csv_cell(s_values.back()) + ") = " + csv_cell(last)});
  return 0;
}

int cmd_sample(const Common& c, std::size_t n, double beta, std::size_t n_samples,
               std::size_t burn_in, std::size_t thin, double scale) {
  apply_threads(c);
  PotentialH p;
  make_potential(c, p);
  const auto dir = prepare_out(c);

  json config{{"potential", potential_json(p)}, {"n", n},
              {"beta", beta},                   {"samples", n_samples},
              {"burn_in", burn_in},             {"thin", thin},
              {"proposal_scale", scale},        {"seed", c.seed}};
  Manifest manifest("sample", config);

  Timer chain_timer;
  SampleH s;
  check(mml_sample_run(p, n, beta, scale, c.seed, burn_in, thin, n_samples, s.slot()),
        "log-gas sampling");
  manifest.add_timing("chain_seconds", chain_timer.seconds());

  std::vector<std::string> columns;
  for (std::size_t i = 1; i <= n; ++i) columns.push_back("lambda_" + std::to_string(i));
  CsvFile table(columns);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < mml_sample_count(s); ++i) {
    check(mml_sample_configuration(s, i, row.data()), "configuration copy");
    table.row(row);
  }
  write_file(dir / "configurations.csv", table.text());
  manifest.add_file("configurations.csv");

  json summary{{"count", mml_sample_count(s)},
               {"acceptance_rate", mml_sample_acceptance_rate(s)},
               {"tuned_scale", mml_sample_tuned_scale(s)},
               {"acceptance_in_band", mml_sample_acceptance_in_band(s) != 0}};

  if (mml_sample_count(s) > 0) {
    Timer ncm_timer;
    EquilibriumH m;
    check(mml_equilibrium_solve(p, 0, m.slot()), "equilibrium solve");
    Str ncm;
    check(mml_sample_ncm_json(s, m, ncm.slot()), "empirical statistics");
    manifest.add_timing("ncm_seconds", ncm_timer.seconds());
    write_file(dir / "ncm.json", ncm.str() + "\n");
    manifest.add_file("ncm.json");
    summary["ncm"] = json::parse(ncm.str());
  }

  manifest.write(dir);

  char acc[64];
  std::snprintf(acc, sizeof acc, "acceptance_rate: %.3f (tuned scale %.4f)",
                mml_sample_acceptance_rate(s), mml_sample_tuned_scale(s));
  emit(c, summary,
       {"configurations: " + std::to_string(mml_sample_count(s)), acc});
  return 0;
}

int cmd_universality(const Common& c, const std::string& config_path, const std::string& n_spec,
                     double lambda0, double d, double box, double window,
                     const std::string& gap_s_spec, std::size_t gap_order) {
  apply_threads(c);
  const auto dir = prepare_out(c);

  json run_config;
  if (!config_path.empty()) {
    run_config = json::parse(read_file(config_path), nullptr, false);
    if (run_config.is_discarded()) die("malformed run-config JSON in '" + config_path + "'");
  } else {
    PotentialH p;
    make_potential(c, p);
    json nl = json::array();
    for (std::size_t n : parse_size_list(n_spec)) nl.push_back(n);
    run_config = json{{"potential", potential_json(p)},
                      {"n_list", nl},
                      {"lambda0", lambda0},
                      {"d", d},
                      {"box", box},
                      {"window", window},
                      {"gap_s", parse_value_list(gap_s_spec)},
                      {"gap_order", gap_order}};
  }
  Manifest manifest("universality", run_config);

  Timer suite_timer;
  Str report_text;
  check(mml_universality_run(run_config.dump().c_str(), report_text.slot()),
        "universality suite");
  manifest.add_timing("suite_seconds", suite_timer.seconds());
  write_file(dir / "report.json", report_text.str() + "\n");
  manifest.add_file("report.json");

  const json report = json::parse(report_text.str());
  const char* columns[4] = {"sup_density_error", "kernel_sup_error", "gap_sup_error",
                            "free_energy_error"};

  CsvFile table({"n", columns[0], columns[1], columns[2], columns[3]});
  for (const auto& rec : report["records"])
    table.row({static_cast<double>(rec["n"].get<std::size_t>()),
               rec[columns[0]].get<double>(), rec[columns[1]].get<double>(),
               rec[columns[2]].get<double>(), rec[columns[3]].get<double>()});
  write_file(dir / "convergence.csv", table.text());
  manifest.add_file("convergence.csv");

  for (const char* col : columns) {
    CsvFile flat({"n", col});
    for (const auto& rec : report["records"])
      flat.row({static_cast<double>(rec["n"].get<std::size_t>()), rec[col].get<double>()});
    const std::string name = std::string(col) + ".csv";
    write_file(dir / name, flat.text());
    manifest.add_file(name);
  }

  // Fourier diagnostic at the largest n of the sweep.
  json fourier;
  if (!report["records"].empty()) {
    PotentialH p;
    const json pot = run_config.contains("potential") ? run_config["potential"]
                                                      : json{{"kind", "gaussian"}};
    const std::string pot_json = pot.dump();
    check(mml_potential_create_from_json(pot_json.c_str(), p.slot()), "potential");
    const std::size_t n_max = report["records"].back()["n"].get<std::size_t>();
    Timer fourier_timer;
    KernelH f;
    check(mml_kernel_create(p, n_max, f.slot()), "kernel build");
    Str ftext;
    check(mml_fourier_diagnostic_json(f, run_config.value("lambda0", 0.0),
                                      run_config.value("window", 16.0), ftext.slot()),
          "fourier diagnostic");
    manifest.add_timing("fourier_seconds", fourier_timer.seconds());
    fourier = json::parse(ftext.str());
    write_file(dir / "fourier.json", ftext.str() + "\n");
    manifest.add_file("fourier.json");
    CsvFile ftable({"p", "F"});
    const auto& pg = fourier["p_grid"];
    const auto& fv = fourier["f_values"];
    for (std::size_t i = 0; i < pg.size(); ++i)
      ftable.row({pg[i].get<double>(), fv[i].get<double>()});
    write_file(dir / "fourier.csv", ftable.text());
    manifest.add_file("fourier.csv");
  }

  manifest.write(dir);

  // Asserted convergence invariants: every error column finite and improving
  // over the sweep (first record vs last record).
  bool pass = true;
  std::vector<std::string> lines;
  const auto& records = report["records"];
  for (const char* col : columns) {
    bool ok = true;
    for (const auto& rec : records)
      if (!std::isfinite(rec[col].get<double>())) ok = false;
    if (records.size() >= 2) {
      const double first = records.front()[col].get<double>();
      const double last = records.back()[col].get<double>();
      if (!(last < first)) ok = false;
    }
    lines.push_back(std::string(col) + ": " + (ok ? "pass" : "FAIL"));
    pass = pass && ok;
  }
  json summary{{"records", records.size()},
               {"invariants_pass", pass},
               {"slopes",
                json{{"density", report["slope_density"]},
                     {"kernel", report["slope_kernel"]},
                     {"gap", report["slope_gap"]},
                     {"free_energy", report["slope_free_energy"]}}}};
  if (!fourier.is_null()) {
    summary["total_jump"] = fourier["total_jump"];
    summary["slope_at_zero"] = fourier["slope_at_zero"];
  }
  lines.push_back(std::string("invariants: ") + (pass ? "pass" : "FAIL"));
  emit(c, summary, lines);
  return pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-model laboratory: equilibrium measures, orthogonal-polynomial "
               "kernels, gap probabilities, log-gas sampling, convergence sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mml_version());

  Common c;

  auto* eq = app.add_subcommand("eq", "solve the equilibrium measure");
  std::size_t eq_grid_order = 0, eq_points = 257;
  add_common(eq, c);
  eq->add_option("--grid-order", eq_grid_order, "spectral resolution, 0 = default");
  eq->add_option("--points", eq_points, "CSV grid size")->capture_default_str();

  auto* ortho = app.add_subcommand("ortho", "orthonormal-polynomial recurrence table");
  std::size_t ortho_n = 32;
  add_common(ortho, c);
  ortho->add_option("--n", ortho_n, "matrix size")->capture_default_str();

  auto* kernel = app.add_subcommand("kernel", "reproducing kernel and its identities");
  std::size_t kernel_n = 32, kernel_points = 257;
  add_common(kernel, c);
  kernel->add_option("--n", kernel_n, "matrix size")->capture_default_str();
  kernel->add_option("--points", kernel_points, "CSV grid size")->capture_default_str();

  auto* gap = app.add_subcommand("gap", "gap probabilities via Fredholm determinants");
  bool gap_sine = false;
  std::size_t gap_n = 64, gap_quad_order = 64;
  double gap_lambda0 = 0.0;
  std::string gap_s = "0..3:0.1";
  add_common(gap, c);
  gap->add_flag("--sine", gap_sine, "use the sine kernel instead of a finite-n kernel");
  gap->add_option("--n", gap_n, "matrix size (finite-n mode)")->capture_default_str();
  gap->add_option("--lambda0", gap_lambda0, "bulk reference point")->capture_default_str();
  gap->add_option("--s", gap_s, "interval lengths: lo..hi:step, comma list, or one value")
      ->capture_default_str();
  gap->add_option("--order", gap_quad_order, "quadrature order")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "log-gas Metropolis sampling");
  std::size_t sample_n = 8, sample_count = 1000, sample_burn_in = 0, sample_thin = 0;
  double sample_beta = 2.0, sample_scale = 0.5;
  add_common(sample, c);
  sample->add_option("--n", sample_n, "particle count")->capture_default_str();
  sample->add_option("--beta", sample_beta, "inverse-temperature parameter")
      ->capture_default_str();
  sample->add_option("--samples", sample_count, "stored configurations")->capture_default_str();
  sample->add_option("--burn-in", sample_burn_in, "burn-in moves, 0 = default 1e5*n");
  sample->add_option("--thin", sample_thin, "moves between stored configurations, 0 = default n");
  sample->add_option("--scale", sample_scale, "initial proposal scale")->capture_default_str();

  auto* universality = app.add_subcommand("universality", "full convergence sweep");
  std::string uni_config, uni_n = "8,16,32,64", uni_gap_s = "0.5,1,1.5,2";
  double uni_lambda0 = 0.0, uni_d = 0.5, uni_box = 2.0, uni_window = 16.0;
  std::size_t uni_gap_order = 64;
  add_common(universality, c);
  universality->add_option("--config", uni_config, "run-config JSON file (overrides flags)");
  universality->add_option("--n", uni_n, "comma-separated matrix sizes")->capture_default_str();
  universality->add_option("--lambda0", uni_lambda0, "bulk reference point")
      ->capture_default_str();
  universality->add_option("--d", uni_d, "edge margin for the density sup window")
      ->capture_default_str();
  universality->add_option("--box", uni_box, "rescaled-kernel comparison box")
      ->capture_default_str();
  universality->add_option("--window", uni_window, "fourier window")->capture_default_str();
  universality->add_option("--gap-s", uni_gap_s, "gap interval lengths")->capture_default_str();
  universality->add_option("--gap-order", uni_gap_order, "gap quadrature order")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1; // invalid flags: exit 1 (help/version: exit 0)
  }

  try {
    if (eq->parsed()) return cmd_eq(c, eq_grid_order, eq_points);
    if (ortho->parsed()) return cmd_ortho(c, ortho_n);
    if (kernel->parsed()) return cmd_kernel(c, kernel_n, kernel_points);
    if (gap->parsed())
      return cmd_gap(c, gap_sine, gap_n, gap_lambda0, gap_s, gap_quad_order);
    if (sample->parsed())
      return cmd_sample(c, sample_n, sample_beta, sample_count, sample_burn_in, sample_thin,
                        sample_scale);
    if (universality->parsed())
      return cmd_universality(c, uni_config, uni_n, uni_lambda0, uni_d, uni_box, uni_window,
                              uni_gap_s, uni_gap_order);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 1;
}
