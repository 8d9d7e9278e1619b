#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Deterministic run report: identical config and version produce identical
/// bodies except for the wall-clock field.
struct Report {
  std::string command;
  std::string config_hash;
  nlohmann::json results;
  double wall_clock_ms = 0.0;

  nlohmann::json to_json() const;
  /// Flattened key,value rows (header "key,value"); arrays are indexed.
  std::string to_csv() const;
};

/// Writes via a temp file in the target directory followed by rename.
void write_atomic(const std::string& path, const std::string& content);

/// CSV dump helper: header row then fixed-order columns.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace curvlab
