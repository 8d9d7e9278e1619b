#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/config.hpp"
#include "curvlab/report.hpp"
#include "curvlab/similarity.hpp"
#include "curvlab/truncation.hpp"
#include "curvlab/util.hpp"

namespace {

using curvlab::Complex;
using curvlab::Point;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitVerdictFail = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  double tol = -1.0;
  double grid_r = -1.0;
  int grid_n = -1;
  std::string expect;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file")->required();
  cmd->add_option("--out", flags.out_path, "report output path (default: stdout)");
  cmd->add_option("--format", flags.format, "json|csv (overrides config)");
  cmd->add_option("--tol", flags.tol, "override the command's main tolerance");
  cmd->add_option("--grid-r", flags.grid_r, "override grid max modulus");
  cmd->add_option("--grid-n", flags.grid_n, "override grid density (radial = n, angular = 2n)");
  cmd->add_option("--expect", flags.expect, "expected verdict (isomorphic|distinct)");
}

curvlab::RunConfig load(const CommonFlags& flags) {
  curvlab::RunConfig cfg = curvlab::load_config(flags.config_path);
  if (flags.grid_r > 0.0) cfg.grid.r_max = flags.grid_r;
  if (flags.grid_n > 0) {
    cfg.grid.radial = flags.grid_n;
    cfg.grid.angular = 2 * flags.grid_n;
    cfg.grid.per_axis = flags.grid_n;
  }
  if (!flags.format.empty()) {
    if (flags.format == "json") {
      cfg.output.format = curvlab::OutputFormat::json;
    } else if (flags.format == "csv") {
      cfg.output.format = curvlab::OutputFormat::csv;
    } else {
      throw curvlab::InputError("--format must be json or csv");
    }
  }
  if (!flags.out_path.empty()) cfg.output.path = flags.out_path;
  if (!flags.expect.empty()) cfg.expect = flags.expect;
  return cfg;
}

const curvlab::KernelSpec& need_kernel(const curvlab::RunConfig& cfg) {
  if (!cfg.kernel) throw curvlab::InputError("config needs a \"kernel\"");
  return *cfg.kernel;
}

const curvlab::MatrixMultiplier& need_multiplier(const curvlab::RunConfig& cfg) {
  if (!cfg.multiplier) throw curvlab::InputError("config needs a \"multiplier\"");
  return *cfg.multiplier;
}

json point_json(const Point& z) {
  json out = json::array();
  for (const auto& c : z.coords) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

json curvature_json(const curvlab::CurvatureMatrix& c) {
  json blocks = json::array();
  for (int i = 0; i < c.n; ++i) {
    json row = json::array();
    for (int j = 0; j < c.n; ++j) {
      json entries = json::array();
      for (int a = 0; a < c.m; ++a)
        for (int b = 0; b < c.m; ++b) {
          entries.push_back(c.block(i, j)(a, b).real());
          entries.push_back(c.block(i, j)(a, b).imag());
        }
      row.push_back(entries);
    }
    blocks.push_back(row);
  }
  json out;
  out["n"] = c.n;
  out["m"] = c.m;
  out["blocks"] = blocks;
  return out;
}

void emit(const curvlab::RunConfig& cfg, curvlab::Report& report,
          std::chrono::steady_clock::time_point start) {
  report.wall_clock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const std::string body = cfg.output.format == curvlab::OutputFormat::json
                               ? report.to_json().dump(2) + "\n"
                               : report.to_csv();
  if (cfg.output.path.empty()) {
    std::cout << body;
  } else {
    curvlab::write_atomic(cfg.output.path, body);
  }
}

void maybe_write_per_point_csv(const curvlab::RunConfig& cfg,
                               const std::vector<std::string>& header,
                               const std::vector<std::vector<double>>& rows) {
  if (cfg.output.per_point_csv.empty()) return;
  curvlab::write_atomic(cfg.output.per_point_csv, curvlab::csv_table(header, rows));
}

int expect_verdict(const curvlab::RunConfig& cfg, bool verdict, const char* yes, const char* no) {
  if (!cfg.expect) return kExitOk;
  if (*cfg.expect == yes) return verdict ? kExitOk : kExitVerdictFail;
  if (*cfg.expect == no) return verdict ? kExitVerdictFail : kExitOk;
  throw curvlab::InputError("--expect must be \"" + std::string(yes) + "\" or \"" +
                            std::string(no) + "\"");
}

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

int run_curvature(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load(flags);
  const auto& kernel = need_kernel(cfg);
  curvlab::GridSpec grid = cfg.grid;
  if (!cfg.grid_given) {
    grid.type =
        kernel.dim() == 1 ? curvlab::GridSpec::Type::disk : curvlab::GridSpec::Type::ball;
    grid.dim = kernel.dim();
  }
  const auto points = grid.generate();

  json per_point = json::array();
  std::vector<std::vector<double>> csv_rows;
  double max_abs = 0.0;
  for (const auto& z : points) {
    const auto c = curvlab::line_curvature(
        [&](const Point& w) { return curvlab::eval_kernel(kernel, w, w).real(); }, z,
        kernel.domain);
    max_abs = std::max(max_abs, c.max_abs());
    json entry;
    entry["z"] = point_json(z);
    entry["curvature"] = curvature_json(c);
    per_point.push_back(entry);
    std::vector<double> row;
    for (const auto& coord : z.coords) {
      row.push_back(coord.real());
      row.push_back(coord.imag());
    }
    for (int i = 0; i < c.n; ++i)
      for (int j = 0; j < c.n; ++j) {
        row.push_back(c.block(i, j)(0, 0).real());
        row.push_back(c.block(i, j)(0, 0).imag());
      }
    csv_rows.push_back(std::move(row));
  }

  curvlab::Report report;
  report.command = "curvature";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["kernel"] = curvlab::kernel_to_json(kernel);
  report.results["grid"] = curvlab::grid_to_json(grid);
  report.results["max_abs"] = max_abs;
  report.results["per_point"] = per_point;

  std::vector<std::string> header;
  for (int a = 0; a < kernel.dim(); ++a) {
    header.push_back("re" + std::to_string(a + 1));
    header.push_back("im" + std::to_string(a + 1));
  }
  for (int i = 0; i < kernel.dim(); ++i)
    for (int j = 0; j < kernel.dim(); ++j) {
      header.push_back("k" + std::to_string(i + 1) + std::to_string(j + 1) + "_re");
      header.push_back("k" + std::to_string(i + 1) + std::to_string(j + 1) + "_im");
    }
  maybe_write_per_point_csv(cfg, header, csv_rows);
  emit(cfg, report, start);
  return kExitOk;
}

int run_quotient_curvature(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load(flags);
  curvlab::QuotientSpec spec{need_kernel(cfg), need_multiplier(cfg), cfg.psi};
  spec.validate();
  curvlab::GridSpec grid = cfg.grid;
  if (!cfg.grid_given) grid.dim = spec.kernel.dim();
  const auto points = grid.generate();
  if (spec.psi) {
    const auto cert = curvlab::verify_left_inverse(spec.theta, *spec.psi, points);
    if (!cert.valid(cfg.tol.left_inverse))
      throw curvlab::CertificateError("left inverse residual " + std::to_string(cert.residual) +
                                      " exceeds tolerance");
  }

  json per_point = json::array();
  double max_abs = 0.0;
  for (const auto& z : points) {
    const auto c = curvlab::quotient_curvature(spec, z);
    max_abs = std::max(max_abs, c.max_abs());
    json entry;
    entry["z"] = point_json(z);
    entry["curvature"] = curvature_json(c);
    per_point.push_back(entry);
  }

  curvlab::Report report;
  report.command = "quotient-curvature";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["kernel"] = curvlab::kernel_to_json(spec.kernel);
  report.results["multiplier"] = curvlab::multiplier_to_json(spec.theta);
  report.results["grid"] = curvlab::grid_to_json(grid);
  report.results["twist_rank"] = spec.twist_rank();
  report.results["max_abs"] = max_abs;
  report.results["per_point"] = per_point;
  emit(cfg, report, start);
  return kExitOk;
}

int run_verify_additivity(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load(flags);
  if (flags.tol > 0.0) cfg.tol.additivity = flags.tol;
  curvlab::QuotientSpec spec{need_kernel(cfg), need_multiplier(cfg), cfg.psi};
  spec.validate();
  const auto points = cfg.grid.generate();
  const auto result = curvlab::verify_additivity(spec, points, cfg.on_grid_error);
  const bool pass = result.max_residual <= cfg.tol.additivity;

  curvlab::Report report;
  report.command = "verify-additivity";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["max_residual"] = result.max_residual;
  report.results["witness"] = point_json(result.witness);
  report.results["points_used"] = result.points_used;
  report.results["points_skipped"] = result.points_skipped;
  report.results["tolerance"] = cfg.tol.additivity;
  report.results["pass"] = pass;
  emit(cfg, report, start);
  return pass ? kExitOk : kExitVerdictFail;
}

int run_iso_test(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load(flags);
  if (flags.tol > 0.0) cfg.tol.iso = flags.tol;
  if (!cfg.multiplier || !cfg.multiplier2)
    throw curvlab::InputError("iso-test needs \"multiplier\" and \"multiplier2\"");
  const auto points = cfg.grid.generate();
  const auto verdict = curvlab::iso_test(*cfg.multiplier, *cfg.multiplier2, points, cfg.tol.iso);

  curvlab::Report report;
  report.command = "iso-test";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["verdict"] = verdict.isomorphic;
  report.results["max_deviation"] = verdict.max_deviation;
  report.results["witness"] = point_json(verdict.witness);
  report.results["grid"] = curvlab::grid_to_json(cfg.grid);
  report.results["tolerance"] = verdict.tolerance;
  report.results["note"] = "numerical verdict: curvature equality sampled on the grid";
  if (!cfg.output.per_point_csv.empty()) report.results["per_point"] = cfg.output.per_point_csv;
  emit(cfg, report, start);
  return expect_verdict(cfg, verdict.isomorphic, "isomorphic", "distinct");
}

int run_cross_kernel(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load(flags);
  if (flags.tol > 0.0) cfg.tol.iso = flags.tol;
  if (!cfg.kernel || !cfg.kernel2)
    throw curvlab::InputError("cross-kernel needs \"kernel\" and \"kernel2\"");
  if (!cfg.multiplier || !cfg.multiplier2)
    throw curvlab::InputError("cross-kernel needs \"multiplier\" and \"multiplier2\"");
  const auto points = cfg.grid.generate();
  const auto result = curvlab::cross_kernel_check(*cfg.kernel, *cfg.kernel2, *cfg.multiplier,
                                                  *cfg.multiplier2, points, cfg.tol.iso);

  curvlab::Report report;
  report.command = "cross-kernel";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["consistent"] = result.consistent;
  report.results["verdict_a"] = result.verdict_a.isomorphic;
  report.results["verdict_b"] = result.verdict_b.isomorphic;
  report.results["curvature_gap_a"] = result.curvature_gap_a;
  report.results["curvature_gap_b"] = result.curvature_gap_b;
  report.results["twist_bitwise_identical"] = result.twist_bitwise_identical;
  emit(cfg, report, start);
  return result.consistent ? kExitOk : kExitVerdictFail;
}

int run_corona(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load(flags);
  if (flags.tol > 0.0) cfg.tol.corona_eps = flags.tol;
  const auto& theta = need_multiplier(cfg);
  const auto points = cfg.grid.generate();
  const double bound = curvlab::corona_bound(theta, points);
  const bool pass = bound > cfg.tol.corona_eps;

  curvlab::Report report;
  report.command = "corona";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["bound"] = bound;
  report.results["epsilon"] = cfg.tol.corona_eps;
  report.results["pass"] = pass;
  if (cfg.psi) {
    const auto cert = curvlab::verify_left_inverse(theta, *cfg.psi, points);
    report.results["left_inverse_residual"] = cert.residual;
    report.results["sup_psi_norm"] = cert.sup_psi_norm;
  }
  emit(cfg, report, start);
  return pass ? kExitOk : kExitVerdictFail;
}

curvlab::MatrixMultiplier resolve_psi(const curvlab::RunConfig& cfg,
                                      const curvlab::MatrixMultiplier& theta) {
  if (cfg.psi) return *cfg.psi;
  if (theta.cols == 1 && theta.rows == 2 && theta.nvars == 1) {
    const auto [psi1, psi2] = curvlab::bezout_left_inverse(theta.at(0, 0), theta.at(1, 0));
    return curvlab::MatrixMultiplier::row({psi1, psi2});
  }
  throw curvlab::InputError(
      "config needs \"psi\" (Bezout construction covers only 2x1 one-variable symbols)");
}

int run_similarity(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load(flags);
  const auto& theta = need_multiplier(cfg);
  const auto psi = resolve_psi(cfg, theta);
  const auto points = cfg.grid.generate();

  const auto idem = curvlab::build_idempotent(theta, psi);
  const auto angles = curvlab::splitting_angle(theta, idem, points);

  curvlab::Report report;
  report.command = "similarity";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["idempotent"] = {{"rank", idem.rank}, {"coeff_residual", idem.coeff_residual}};
  report.results["splitting"] = {{"min_angle", angles.min_angle},
                                 {"max_condition", angles.max_condition}};
  if (theta.rows == theta.cols + 1) {
    const auto [inf, sup] = curvlab::uniform_equivalence_diagnostic(theta, points);
    report.results["uniform_equivalence"] = {{"inf", inf}, {"sup", sup}};
  }
  if (cfg.kernel) {
    curvlab::QuotientSpec spec{*cfg.kernel, theta, psi};
    curvlab::DefectOptions opts{cfg.allow_non_szego};
    const auto profile = curvlab::defect_profile(spec, points, opts);
    double min_h = profile.samples.front().h, max_h = min_h;
    std::vector<std::vector<double>> csv_rows;
    for (const auto& s : profile.samples) {
      min_h = std::min(min_h, s.h);
      max_h = std::max(max_h, s.h);
      csv_rows.push_back({s.z[0].real(), s.z[0].imag(), s.h});
    }
    report.results["defect"] = {{"rank", profile.rank},
                                {"non_szego", profile.non_szego},
                                {"min_h", min_h},
                                {"max_h", max_h}};
    maybe_write_per_point_csv(cfg, {"re", "im", "h"}, csv_rows);
  }
  emit(cfg, report, start);
  return kExitOk;
}

int run_carleson(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load(flags);
  curvlab::QuotientSpec spec{need_kernel(cfg), need_multiplier(cfg), cfg.psi};
  spec.validate();
  curvlab::DefectOptions opts{cfg.allow_non_szego};
  const auto result = curvlab::carleson_diagnostic(spec, cfg.levels, cfg.grid.r_max, opts);

  curvlab::Report report;
  report.command = "carleson";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["levels"] = result.levels;
  report.results["r_max"] = result.r_max;
  report.results["sup_ratio"] = result.sup_ratio;
  report.results["pointwise_constant"] = result.pointwise_constant;
  report.results["per_level_sup"] = result.per_level_sup;
  report.results["cumulative_sup"] = result.cumulative_sup;
  report.results["negative_flagged"] = result.negative_flagged;
  emit(cfg, report, start);
  return kExitOk;
}

int run_oracle(const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = load(flags);
  if (flags.tol > 0.0) cfg.tol.oracle = flags.tol;
  const auto& kernel = need_kernel(cfg);
  const auto& theta = need_multiplier(cfg);
  std::vector<Complex> ws = cfg.oracle_points;
  if (ws.empty())
    ws = {Complex{0.4, 0.0}, Complex{0.3, 0.1}, Complex{-0.25, 0.2}, Complex{0.0, -0.45},
          Complex{0.5, 0.3}};
  const int expected_dim = theta.rows - theta.cols;

  bool verdict = true;
  json sweeps = json::array();
  for (int n : cfg.oracle_degrees) {
    json per_w = json::array();
    for (const auto& w : ws) {
      json entry;
      entry["w"] = {w.real(), w.imag()};
      const auto check = curvlab::quotient_eigenvector_check(kernel, theta, w, n);
      const int local_dim = curvlab::localized_dimension(kernel, theta, w, n);
      const double gram_dev = curvlab::oracle_gram_check(kernel, theta, w, w, n);
      entry["residuals"] = {{"eigenvector", check.eigen_residual},
                            {"range_orthogonality", check.range_residual},
                            {"gram_deviation", gram_dev}};
      entry["localized_dim"] = local_dim;
      if (n == cfg.oracle_degrees.back()) {
        verdict = verdict && check.eigen_residual <= cfg.tol.oracle &&
                  check.range_residual <= cfg.tol.oracle && gram_dev <= cfg.tol.oracle &&
                  local_dim == expected_dim;
      }
      per_w.push_back(entry);
    }
    json sweep;
    sweep["N"] = n;
    sweep["checks"] = per_w;
    if (cfg.psi) {
      const auto sim = curvlab::similarity_map_condition(kernel, theta, *cfg.psi, n);
      sweep["similarity_map"] = {{"condition", sim.condition},
                                 {"sigma_min", sim.sigma_min},
                                 {"sigma_max", sim.sigma_max},
                                 {"module_map_residual", sim.module_map_residual},
                                 {"invertible", sim.invertibility_flag}};
    }
    sweeps.push_back(sweep);
  }

  curvlab::Report report;
  report.command = "oracle";
  report.config_hash = curvlab::fnv1a_hex(cfg.canonical);
  report.results["sweeps"] = sweeps;
  report.results["expected_localized_dim"] = expected_dim;
  report.results["tolerance"] = cfg.tol.oracle;
  report.results["verdict"] = verdict;
  emit(cfg, report, start);
  return verdict ? kExitOk : kExitVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: curvature invariants of quotient Hilbert modules"};
  app.require_subcommand(1);

  CommonFlags flags;
  struct Handler {
    const char* name;
    const char* desc;
    int (*fn)(const CommonFlags&);
  };
  const Handler handlers[] = {
      {"curvature", "line curvature of a base kernel on a grid", run_curvature},
      {"quotient-curvature", "curvature of the quotient-module bundle", run_quotient_curvature},
      {"verify-additivity", "curvature additivity identity residual", run_verify_additivity},
      {"iso-test", "isomorphism criterion for two symbols", run_iso_test},
      {"cross-kernel", "building-block independence check", run_cross_kernel},
      {"corona", "corona bound (min singular value over the grid)", run_corona},
      {"similarity", "idempotent, splitting angles and defect profile", run_similarity},
      {"carleson", "Carleson-box diagnostic of the similarity defect", run_carleson},
      {"oracle", "finite-truncation matrix-model cross checks", run_oracle},
  };
  int (*chosen)(const CommonFlags&) = nullptr;
  for (const auto& h : handlers) {
    CLI::App* cmd = app.add_subcommand(h.name, h.desc);
    add_common(cmd, flags);
    cmd->callback([&chosen, fn = h.fn]() { chosen = fn; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return chosen(flags);
  } catch (const curvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
}
