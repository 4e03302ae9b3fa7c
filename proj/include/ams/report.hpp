#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ams::bench {

// Tabular experiment output. CSV is the contract: '#'-prefixed metadata
// preamble, RFC-4180 quoting, '.' decimal separator, 17-significant-digit
// floats. Re-running with the same config and seed reproduces every byte
// except the wall_clock_ms metadata line.

using Cell = std::variant<std::int64_t, double, std::string>;

struct Report {
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
  }
};

std::string format_double(double v);       // %.17g
std::string to_csv(const Report& report);
std::string to_json(const Report& report);

/// Serialize in the requested format ("csv" or "json").
std::string serialize(const Report& report, const std::string& format);

/// Write to a file, or stdout when path is empty or "-".
void write_report(const Report& report, const std::string& path,
                  const std::string& format);

}  // namespace ams::bench
