#pragma once

#include "mml/equilibrium.hpp"
#include "mml/kernel.hpp"
#include "mml/loggas.hpp"
#include "mml/orthopoly.hpp"
#include "mml/potential.hpp"
#include "mml/universality.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mml::io {

using json = nlohmann::json;

// Domain objects <-> JSON.  Each to_json/from_potential pair round-trips
// exactly (doubles are emitted with shortest-round-trip precision).
json to_json(const Potential& p);
Potential potential_from_json(const json& j);

json to_json(const EquilibriumMeasure& m);
EquilibriumMeasure equilibrium_from_json(const json& j);

json to_json(const RecurrenceTable& t);
RecurrenceTable recurrence_from_json(const json& j);

json to_json(const IdentityReport& r);
json to_json(const NcmReport& r);
json to_json(const FourierDiagnostic& d);
json to_json(const ConvergenceReport& r);

json to_json(const RunConfig& c);
RunConfig run_config_from_json(const json& j);

// Parses text into JSON, mapping parse failures onto errc::io.
json parse(const std::string& text);

// CSV conventions shared by every emitter: one header row, '\n' line
// endings, '.' decimal separator, floats at 17 significant digits.
std::string csv_cell(double x);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_; }

  // Whole file contents, including the header row.
  const std::string& text() const { return text_; }

  void write(const std::string& path) const;

private:
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes text to path, throwing errc::io on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// FNV-1a over the bytes; used for the manifest's config hash.
std::uint64_t fnv1a(const std::string& bytes);

} // namespace mml::io
