#include "curvlab/report.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvlab/types.hpp"

namespace curvlab {

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["version"] = kToolVersion;
  j["results"] = results;
  j["wall_clock_ms"] = wall_clock_ms;
  return j;
}

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    size_t i = 0;
    for (const auto& value : j) flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

std::string Report::to_csv() const {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(to_json(), "", rows);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : rows) os << key << "," << value << "\n";
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path tmp = dir / (target.filename().string() + ".tmp." +
                              std::to_string(static_cast<long>(::getpid())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ",";
    os << header[i];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << row[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace curvlab
