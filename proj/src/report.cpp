#include "ams/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "ams/errors.hpp"

namespace ams::bench {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_to_string(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c))
    return format_double(std::get<double>(c));
  return csv_quote(std::get<std::string>(c));
}

}  // namespace

std::string to_csv(const Report& report) {
  std::string out;
  for (const auto& [k, v] : report.metadata) {
    out += "# " + k + "=" + v + "\n";
  }
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(report.columns[i]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : report.metadata) j["metadata"][k] = v;
  j["columns"] = report.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (std::holds_alternative<std::int64_t>(c))
        jr.push_back(std::get<std::int64_t>(c));
      else if (std::holds_alternative<double>(c))
        jr.push_back(std::get<double>(c));
      else
        jr.push_back(std::get<std::string>(c));
    }
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

std::string serialize(const Report& report, const std::string& format) {
  if (format == "csv") return to_csv(report);
  if (format == "json") return to_json(report);
  throw domain_error("unknown report format: " + format);
}

void write_report(const Report& report, const std::string& path,
                  const std::string& format) {
  const std::string body = serialize(report, format);
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw domain_error("cannot open output file: " + path);
  out << body;
}

}  // namespace ams::bench
