#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "curvlab/quotient.hpp"

namespace curvlab {

struct Tolerances {
  double iso = 1e-5;
  double additivity = 1e-6;
  double corona_eps = 1e-8;
  double left_inverse = 1e-10;
  double oracle = 1e-8;
};

enum class OutputFormat { json, csv };

struct OutputSpec {
  std::string path;  // empty: stdout
  OutputFormat format = OutputFormat::json;
  std::string per_point_csv;  // optional CSV dump path
};

/// One batch run: schema-validated before any computation, unknown keys
/// rejected.
struct RunConfig {
  std::optional<KernelSpec> kernel;
  std::optional<KernelSpec> kernel2;
  std::optional<MatrixMultiplier> multiplier;
  std::optional<MatrixMultiplier> multiplier2;
  std::optional<MatrixMultiplier> psi;
  GridSpec grid;
  bool grid_given = false;
  int levels = 8;
  std::vector<int> oracle_degrees = {12, 24, 48};
  std::vector<Complex> oracle_points;
  Tolerances tol;
  std::optional<std::string> expect;
  GridErrorPolicy on_grid_error = GridErrorPolicy::abort;
  bool allow_non_szego = false;
  OutputSpec output;

  /// Canonical JSON (sorted keys) of the parsed config; hashed into reports.
  std::string canonical;
};

// JSON codecs (strict: unknown keys rejected).
KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const KernelSpec& spec);
MatrixMultiplier multiplier_from_json(const nlohmann::json& j);
nlohmann::json multiplier_to_json(const MatrixMultiplier& m);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridSpec& grid);

RunConfig parse_config(const nlohmann::json& j);
/// Parses a config file; JSON syntax errors are reported with line/column.
RunConfig load_config(const std::string& path);

}  // namespace curvlab
