#include "curvlab/config.hpp"

#include <fstream>
#include <set>

namespace curvlab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw InputError("unknown key \"" + key + "\" in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError("missing \"" + key + "\" in " + where);
  if (!j[key].is_number()) throw InputError("\"" + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError("missing \"" + key + "\" in " + where);
  if (!j[key].is_number_integer())
    throw InputError("\"" + key + "\" in " + where + " must be an integer");
  return j[key].get<int>();
}

}  // namespace

KernelSpec kernel_from_json(const json& j) {
  reject_unknown_keys(j, {"family", "alpha", "dim"}, "kernel");
  if (!j.contains("family") || !j["family"].is_string())
    throw InputError("kernel needs a \"family\" string");
  const std::string family = j["family"].get<std::string>();
  const int dim = j.contains("dim") ? get_int(j, "dim", "kernel") : 1;

  KernelSpec spec;
  if (family == "szego") {
    spec = KernelSpec::szego();
    if (dim != 1) throw InputError("szego kernel requires dim 1");
  } else if (family == "bergman") {
    spec = KernelSpec::bergman(dim);
  } else if (family == "weighted_bergman") {
    if (!j.contains("alpha")) throw InputError("weighted_bergman needs \"alpha\"");
    spec = KernelSpec::weighted_bergman(get_number(j, "alpha", "kernel"));
    if (dim != 1) throw InputError("weighted_bergman kernel requires dim 1");
  } else if (family == "drury_arveson") {
    spec = KernelSpec::drury_arveson(dim);
  } else {
    throw InputError("unknown kernel family \"" + family + "\"");
  }
  if (family != "weighted_bergman" && j.contains("alpha"))
    throw InputError("\"alpha\" is only meaningful for weighted_bergman");
  spec.validate();
  return spec;
}

json kernel_to_json(const KernelSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["dim"] = spec.dim();
  if (spec.family == KernelFamily::weighted_bergman) j["alpha"] = spec.alpha;
  return j;
}

MatrixMultiplier multiplier_from_json(const json& j) {
  reject_unknown_keys(j, {"rows", "cols", "nvars", "entries"}, "multiplier");
  const int rows = get_int(j, "rows", "multiplier");
  const int cols = get_int(j, "cols", "multiplier");
  const int nvars = get_int(j, "nvars", "multiplier");
  if (!j.contains("entries") || !j["entries"].is_array())
    throw InputError("multiplier needs an \"entries\" array");
  auto m = MatrixMultiplier::zero(rows, cols, nvars);
  const auto& entries = j["entries"];
  if (static_cast<int>(entries.size()) != rows)
    throw InputError("entries must have `rows` rows");
  for (int i = 0; i < rows; ++i) {
    const auto& row = entries[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw InputError("entries row " + std::to_string(i) + " must have `cols` monomial lists");
    for (int c = 0; c < cols; ++c) {
      const auto& monomials = row[static_cast<size_t>(c)];
      if (!monomials.is_array())
        throw InputError("entries[" + std::to_string(i) + "][" + std::to_string(c) +
                         "] must be a monomial list");
      PolyC poly(nvars);
      for (const auto& mono : monomials) {
        reject_unknown_keys(mono, {"exp", "re", "im"}, "monomial");
        if (!mono.contains("exp") || !mono["exp"].is_array())
          throw InputError("monomial needs an \"exp\" array");
        PolyC::Exponents exps;
        for (const auto& e : mono["exp"]) {
          if (!e.is_number_integer()) throw InputError("exponents must be integers");
          exps.push_back(e.get<int>());
        }
        const double re = mono.contains("re") ? mono["re"].get<double>() : 0.0;
        const double im = mono.contains("im") ? mono["im"].get<double>() : 0.0;
        poly += PolyC::monomial(nvars, exps, Complex{re, im});
      }
      m.at(i, c) = std::move(poly);
    }
  }
  m.validate();
  return m;
}

json multiplier_to_json(const MatrixMultiplier& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) {
      json monomials = json::array();
      for (const auto& [e, coeff] : m.at(i, c).terms()) {
        json mono;
        mono["exp"] = e;
        mono["re"] = coeff.real();
        mono["im"] = coeff.imag();
        monomials.push_back(mono);
      }
      row.push_back(monomials);
    }
    entries.push_back(row);
  }
  json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["nvars"] = m.nvars;
  j["entries"] = entries;
  return j;
}

GridSpec grid_from_json(const json& j) {
  reject_unknown_keys(j, {"type", "dim", "r_max", "radial", "angular", "per_axis", "points"},
                      "grid");
  GridSpec grid;
  const std::string type = j.contains("type") ? j["type"].get<std::string>() : "disk";
  if (type == "disk") {
    grid.type = GridSpec::Type::disk;
    grid.dim = 1;
  } else if (type == "ball") {
    grid.type = GridSpec::Type::ball;
  } else if (type == "polydisk") {
    grid.type = GridSpec::Type::polydisk;
  } else if (type == "points") {
    grid.type = GridSpec::Type::points;
  } else {
    throw InputError("unknown grid type \"" + type + "\"");
  }
  if (j.contains("dim")) grid.dim = get_int(j, "dim", "grid");
  if (j.contains("r_max")) grid.r_max = get_number(j, "r_max", "grid");
  if (j.contains("radial")) grid.radial = get_int(j, "radial", "grid");
  if (j.contains("angular")) grid.angular = get_int(j, "angular", "grid");
  if (j.contains("per_axis")) grid.per_axis = get_int(j, "per_axis", "grid");
  if (grid.type == GridSpec::Type::points) {
    if (!j.contains("points") || !j["points"].is_array())
      throw InputError("points grid needs a \"points\" array");
    for (const auto& pj : j["points"]) {
      if (!pj.is_array() || pj.size() != static_cast<size_t>(2 * grid.dim))
        throw InputError("each point must list 2*dim reals [re1, im1, ...]");
      Point p;
      for (int a = 0; a < grid.dim; ++a)
        p.coords.emplace_back(pj[static_cast<size_t>(2 * a)].get<double>(),
                              pj[static_cast<size_t>(2 * a + 1)].get<double>());
      grid.explicit_points.push_back(std::move(p));
    }
  } else if (j.contains("points")) {
    throw InputError("\"points\" is only meaningful for the points grid type");
  }
  grid.validate();
  return grid;
}

json grid_to_json(const GridSpec& grid) {
  json j;
  switch (grid.type) {
    case GridSpec::Type::disk:
      j["type"] = "disk";
      j["r_max"] = grid.r_max;
      j["radial"] = grid.radial;
      j["angular"] = grid.angular;
      break;
    case GridSpec::Type::ball:
    case GridSpec::Type::polydisk:
      j["type"] = grid.type == GridSpec::Type::ball ? "ball" : "polydisk";
      j["dim"] = grid.dim;
      j["r_max"] = grid.r_max;
      j["per_axis"] = grid.per_axis;
      break;
    case GridSpec::Type::points: {
      j["type"] = "points";
      j["dim"] = grid.dim;
      json pts = json::array();
      for (const auto& p : grid.explicit_points) {
        json pj = json::array();
        for (const auto& c : p.coords) {
          pj.push_back(c.real());
          pj.push_back(c.imag());
        }
        pts.push_back(pj);
      }
      j["points"] = pts;
      break;
    }
  }
  return j;
}

RunConfig parse_config(const json& j) {
  reject_unknown_keys(j,
                      {"schema", "kernel", "kernel2", "multiplier", "multiplier2", "psi", "grid",
                       "levels", "oracle", "tolerances", "expect", "on_grid_error",
                       "allow_non_szego", "output"},
                      "config");
  if (j.contains("schema") && j["schema"].get<int>() != 1)
    throw InputError("unsupported schema version");

  RunConfig cfg;
  if (j.contains("kernel")) cfg.kernel = kernel_from_json(j["kernel"]);
  if (j.contains("kernel2")) cfg.kernel2 = kernel_from_json(j["kernel2"]);
  if (j.contains("multiplier")) cfg.multiplier = multiplier_from_json(j["multiplier"]);
  if (j.contains("multiplier2")) cfg.multiplier2 = multiplier_from_json(j["multiplier2"]);
  if (j.contains("psi")) cfg.psi = multiplier_from_json(j["psi"]);
  if (j.contains("grid")) {
    cfg.grid = grid_from_json(j["grid"]);
    cfg.grid_given = true;
  }
  if (j.contains("levels")) cfg.levels = get_int(j, "levels", "config");
  if (j.contains("oracle")) {
    const auto& oj = j["oracle"];
    reject_unknown_keys(oj, {"N", "w"}, "oracle");
    if (oj.contains("N")) {
      cfg.oracle_degrees.clear();
      for (const auto& n : oj["N"]) cfg.oracle_degrees.push_back(n.get<int>());
    }
    if (oj.contains("w")) {
      for (const auto& wj : oj["w"]) {
        if (!wj.is_array() || wj.size() != 2)
          throw InputError("oracle w entries must be [re, im]");
        cfg.oracle_points.emplace_back(wj[0].get<double>(), wj[1].get<double>());
      }
    }
  }
  if (j.contains("tolerances")) {
    const auto& tj = j["tolerances"];
    reject_unknown_keys(tj, {"iso", "additivity", "corona_eps", "left_inverse", "oracle"},
                        "tolerances");
    if (tj.contains("iso")) cfg.tol.iso = tj["iso"].get<double>();
    if (tj.contains("additivity")) cfg.tol.additivity = tj["additivity"].get<double>();
    if (tj.contains("corona_eps")) cfg.tol.corona_eps = tj["corona_eps"].get<double>();
    if (tj.contains("left_inverse")) cfg.tol.left_inverse = tj["left_inverse"].get<double>();
    if (tj.contains("oracle")) cfg.tol.oracle = tj["oracle"].get<double>();
  }
  if (j.contains("expect")) cfg.expect = j["expect"].get<std::string>();
  if (j.contains("on_grid_error")) {
    const std::string policy = j["on_grid_error"].get<std::string>();
    if (policy == "abort") {
      cfg.on_grid_error = GridErrorPolicy::abort;
    } else if (policy == "skip") {
      cfg.on_grid_error = GridErrorPolicy::skip;
    } else {
      throw InputError("on_grid_error must be \"abort\" or \"skip\"");
    }
  }
  if (j.contains("allow_non_szego")) cfg.allow_non_szego = j["allow_non_szego"].get<bool>();
  if (j.contains("output")) {
    const auto& oj = j["output"];
    reject_unknown_keys(oj, {"path", "format", "per_point_csv"}, "output");
    if (oj.contains("path")) cfg.output.path = oj["path"].get<std::string>();
    if (oj.contains("format")) {
      const std::string fmt = oj["format"].get<std::string>();
      if (fmt == "json") {
        cfg.output.format = OutputFormat::json;
      } else if (fmt == "csv") {
        cfg.output.format = OutputFormat::csv;
      } else {
        throw InputError("output format must be \"json\" or \"csv\"");
      }
    }
    if (oj.contains("per_point_csv")) cfg.output.per_point_csv = oj["per_point_csv"].get<std::string>();
  }

  cfg.canonical = j.dump();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate to line/column.
    size_t line = 1, col = 1;
    for (size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("malformed JSON in " + path + " at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace curvlab
