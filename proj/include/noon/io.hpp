#pragma once

// Serialization: deterministic number formatting, CSV tables, JSON forms of
// states, recipes and reports, and atomic file output.

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "noon/coherence.hpp"
#include "noon/fock.hpp"
#include "noon/squeezing.hpp"
#include "noon/states.hpp"

namespace noon::io {

using Json = nlohmann::ordered_json;

inline constexpr int kDefaultPrecision = 12;

/// `precision` significant digits, trailing zeros dropped, -0 printed as 0,
/// non-finite values as nan / inf / -inf.
std::string format_double(double value, int precision = kDefaultPrecision);

/// The double that format_double prints, so JSON output is stable too.
/// Non-finite values become null.
Json json_number(double value, int precision = kDefaultPrecision);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header row, comma separated, LF line endings.
void write_csv(std::ostream& out, const Table& table, int precision = kDefaultPrecision);
std::string to_csv(const Table& table, int precision = kDefaultPrecision);
/// {"columns": [...], "rows": [[...], ...]}.
Json to_json(const Table& table, int precision = kDefaultPrecision);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// States.
Json to_json(const fock::FixedNState& state, int precision = 17);
Json to_json(const fock::TwoModeDensityMatrix& rho, int precision = 17);
fock::FixedNState fixed_state_from_json(const Json& j);
fock::TwoModeDensityMatrix density_matrix_from_json(const Json& j);

/// {"kind": ..., "n": N, "phase": phi, "left_occupation": n_L}; unknown keys
/// are rejected.
states::StateRecipe recipe_from_json(const Json& j);
Json to_json(const states::StateRecipe& recipe);

/// Reports.
Json to_json(const coherence::CoherenceReport& report, int precision = kDefaultPrecision);
/// Columns n, C_n, c_n, norm, S, delta.
Table coherence_table(const coherence::CoherenceReport& report);

Json to_json(const squeezing::RowAnalysis& row, int precision = kDefaultPrecision);

/// Throws ValidationError listing any key of `j` outside `allowed`.
void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);

}  // namespace noon::io
