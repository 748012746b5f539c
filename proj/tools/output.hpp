#pragma once

// Row tables written as CSV (with "# key=value" config lines) or JSON lines
// (first line holds the config). Numbers use shortest round-trip formatting.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rsp::cli {

using Cell = std::variant<std::string, double, long long, bool>;
using Json = nlohmann::ordered_json;

struct ConfigHeader {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_text(const Cell& c) {
  struct V {
    std::string operator()(const std::string& s) const { return csv_escape(s); }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

inline Json to_json(const Cell& c) {
  return std::visit([](const auto& v) { return Json(v); }, c);
}

inline void write_config_csv(std::ostream& os, const ConfigHeader& cfg) {
  for (const auto& [k, v] : cfg.entries) os << "# " << k << '=' << v << '\n';
}

inline Json config_json(const ConfigHeader& cfg) {
  Json obj = Json::object();
  for (const auto& [k, v] : cfg.entries) obj[k] = v;
  return Json{{"config", obj}};
}

inline void write_csv(std::ostream& os, const ConfigHeader& cfg, const Table& t) {
  write_config_csv(os, cfg);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_text(row[i]);
    os << '\n';
  }
}

inline void write_jsonl(std::ostream& os, const ConfigHeader& cfg, const Table& t) {
  os << config_json(cfg).dump() << '\n';
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = to_json(row[i]);
    os << obj.dump() << '\n';
  }
}

}  // namespace rsp::cli
