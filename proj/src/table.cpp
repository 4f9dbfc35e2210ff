#include "voss/table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace voss {

namespace {

std::string format_double(double x) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Cell parse_cell(const std::string& text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.find_first_of(".eEn") == std::string::npos) {
    std::int64_t i = 0;
    const auto res = std::from_chars(first, last, i);
    if (res.ec == std::errc() && res.ptr == last) return i;
  }
  double d = 0.0;
  const auto res = std::from_chars(first, last, d);
  if (res.ec == std::errc() && res.ptr == last) return d;
  return text;
}

}  // namespace

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_cell(row[c]);
    }
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& field : split_line(line)) row.push_back(parse_cell(field));
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("CSV row width does not match header");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json out;
  out["columns"] = table.columns;
  out["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      std::visit([&](const auto& v) { r.push_back(v); }, cell);
    }
    out["rows"].push_back(std::move(r));
  }
  return out;
}

}  // namespace voss
