#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace voss {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-ordered tabular artifact emitted by the CLI.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

/// Doubles use 17 significant digits and always carry a '.' or exponent,
/// so they parse back to the identical value and type.
[[nodiscard]] std::string format_cell(const Cell& cell);

void write_csv(std::ostream& out, const Table& table);

[[nodiscard]] Table read_csv(std::istream& in);

/// {"columns": [...], "rows": [[...], ...]}
[[nodiscard]] nlohmann::json to_json(const Table& table);

}  // namespace voss
