#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace circlebench {

/// Shortest text that is stable across runs: 17 significant digits, '.' as
/// decimal separator regardless of locale.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// One tabular report: a config echo, named columns, rows, and a status flag.
/// Serialised as CSV (header comment lines start with '#') or as one JSON
/// document with fixed top-level keys.
/// RFC 4180 quoting for fields holding a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class Table {
 public:
  using Cell = std::variant<double, std::int64_t, std::string, bool>;

  explicit Table(std::string command) : command_(std::move(command)) {}

  Table& meta(std::string key, std::string value) {
    meta_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Table& meta(std::string key, double value) { return meta(std::move(key), format_double(value)); }
  Table& meta(std::string key, std::int64_t value) { return meta(std::move(key), std::to_string(value)); }
  Table& meta(std::string key, int value) { return meta(std::move(key), static_cast<std::int64_t>(value)); }

  Table& columns(std::vector<std::string> names) {
    columns_ = std::move(names);
    return *this;
  }
  void add_row(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  void set_status(std::string status) { status_ = std::move(status); }
  [[nodiscard]] const std::string& status() const { return status_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<std::string>& column_names() const { return columns_; }

  void write_csv(std::ostream& out) const {
    out << "# command=" << command_ << '\n';
    for (const auto& [k, v] : meta_) out << "# " << k << '=' << v << '\n';
    out << "# status=" << status_ << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        std::visit(
            [&out](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                out << format_double(v);
              } else if constexpr (std::is_same_v<T, bool>) {
                out << (v ? "true" : "false");
              } else if constexpr (std::is_same_v<T, std::string>) {
                out << csv_field(v);
              } else {
                out << v;
              }
            },
            row[i]);
      }
      out << '\n';
    }
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : meta_) config[k] = v;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& cell : row) std::visit([&r](const auto& v) { r.push_back(v); }, cell);
      rows.push_back(std::move(r));
    }
    return {{"command", command_}, {"config", config}, {"status", status_}, {"columns", columns_}, {"rows", rows}};
  }

  void write_json(std::ostream& out) const { out << to_json().dump(2) << '\n'; }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::string status_ = "ok";
};

}  // namespace circlebench
