#include "curvlab/similarity.hpp"

#include <cmath>
#include <numbers>

#include "curvlab/util.hpp"

namespace curvlab {

IdempotentSymbol build_idempotent(const MatrixMultiplier& theta, const MatrixMultiplier& psi) {
  theta.validate_tall();
  psi.validate();
  if (psi.rows != theta.cols || psi.cols != theta.rows)
    throw InputError("psi must be " + std::to_string(theta.cols) + "x" +
                     std::to_string(theta.rows));
  const int q = theta.rows;
  const int p = theta.cols;
  const double scale = std::max({theta.max_coeff(), psi.max_coeff(), 1.0});

  // Psi Theta = I_p must hold exactly before Q = I - Theta Psi is meaningful.
  const MatrixMultiplier pt = psi * theta;
  double cert_residual = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      PolyC d = pt.at(i, j);
      if (i == j) d -= PolyC::constant(theta.nvars, 1.0);
      cert_residual = std::max(cert_residual, d.max_coeff());
    }
  if (cert_residual > 1e-12 * scale)
    throw CertificateError("Psi Theta - I has coefficient residual " +
                           std::to_string(cert_residual));

  IdempotentSymbol sym;
  sym.q_symbol = MatrixMultiplier::identity(q, theta.nvars) - theta * psi;
  sym.rank = q - p;

  // Coefficient-level invariants: Q^2 = Q, Q Theta = 0, trace Q = q - p.
  double residual = cert_residual;
  const MatrixMultiplier q2 = sym.q_symbol * sym.q_symbol - sym.q_symbol;
  residual = std::max(residual, q2.max_coeff());
  const MatrixMultiplier qt = sym.q_symbol * theta;
  residual = std::max(residual, qt.max_coeff());
  PolyC tr(theta.nvars);
  for (int i = 0; i < q; ++i) tr += sym.q_symbol.at(i, i);
  tr -= PolyC::constant(theta.nvars, static_cast<double>(q - p));
  residual = std::max(residual, tr.max_coeff());
  sym.coeff_residual = residual;
  if (residual > 1e-10 * scale)
    throw NumericalError("idempotent invariants violated at coefficient level (residual " +
                         std::to_string(residual) + ")");
  return sym;
}

SplittingAngles splitting_angle(const MatrixMultiplier& theta, const IdempotentSymbol& q,
                                const std::vector<Point>& grid) {
  theta.validate_tall();
  if (grid.empty()) throw InputError("splitting_angle needs a non-empty grid");
  if (q.q_symbol.rows != theta.rows || q.q_symbol.cols != theta.rows)
    throw InputError("idempotent shape mismatch");
  const int p = theta.cols;
  const int qq = theta.rows;
  const int m = qq - p;

  std::vector<double> angles(grid.size());
  std::vector<double> conds(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int k) {
    const Point& z = grid[static_cast<size_t>(k)];
    const Eigen::MatrixXcd tz = eval_multiplier(theta, z);
    const Eigen::MatrixXcd qz = q.eval(z);

    Eigen::JacobiSVD<Eigen::MatrixXcd> tsvd(tz, Eigen::ComputeFullU);
    if (tsvd.singularValues().minCoeff() <= 1e-12 * tsvd.singularValues().maxCoeff())
      throw DegenerateError("rank Theta(z) < p at " + to_string(z));
    const Eigen::MatrixXcd u_theta = tsvd.matrixU().leftCols(p);

    Eigen::JacobiSVD<Eigen::MatrixXcd> qsvd(qz, Eigen::ComputeFullU);
    const Eigen::MatrixXcd u_q = qsvd.matrixU().leftCols(m);

    // Principal angles: singular values of U_theta^H U_q are the cosines.
    Eigen::JacobiSVD<Eigen::MatrixXcd> overlap(u_theta.adjoint() * u_q);
    const double cos_max = std::min(1.0, overlap.singularValues().maxCoeff());
    const double angle = std::acos(cos_max);
    if (angle < 1e-10)
      throw DecompositionError("ran Theta and ran Q collapse at " + to_string(z));
    angles[static_cast<size_t>(k)] = angle;

    Eigen::MatrixXcd joint(qq, qq);
    joint.leftCols(p) = u_theta;
    joint.rightCols(m) = u_q;
    Eigen::JacobiSVD<Eigen::MatrixXcd> jsvd(joint);
    conds[static_cast<size_t>(k)] =
        jsvd.singularValues().maxCoeff() / jsvd.singularValues().minCoeff();
  });

  SplittingAngles out;
  out.min_angle = std::numbers::pi;
  for (size_t k = 0; k < grid.size(); ++k) {
    out.min_angle = std::min(out.min_angle, angles[k]);
    out.max_condition = std::max(out.max_condition, conds[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt norm of the projection derivative
// ---------------------------------------------------------------------------

double hs_projection_derivative(const GramFunction& gram, const Point& z) {
  if (z.dim() != 1)
    throw UnsupportedError("hs_projection_derivative is defined on the disk (n = 1)");
  const int m = gram.rank;

  // Stencil radius: small circle kept inside the kernel margin.
  CircleStencil st;
  st.radius = std::min(0.02 * std::max(1.0, z.norm()), 0.5 * (1.0 - kDefaultMargin - z.norm()));
  if (st.radius < 1e-4)
    throw DomainError("point too close to the boundary for the Gram stencil");

  const Eigen::MatrixXcd g = gram.eval(z, z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g + g.adjoint()));
  if (es.eigenvalues().minCoeff() <= 0.0 ||
      es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() > 1e12)
    throw MetricDegeneracyError("Gram matrix singular at " + to_string(z));
  const Eigen::MatrixXcd ginv = es.operatorInverseSqrt() * es.operatorInverseSqrt();

  // G_z: derivative in the holomorphic (first) slot on the diagonal.
  MatrixField first_slot = [&](const Point& u) { return gram.eval(u, z); };
  const Eigen::MatrixXcd gz = holomorphic_derivative(first_slot, z, 0, st);
  const Eigen::MatrixXcd gzbar = gz.adjoint();

  // G_zzbar: mixed derivative, nested circle stencils in the two slots.
  MatrixField mixed_inner = [&](const Point& u) {
    MatrixField second_slot = [&](const Point& v) { return gram.eval(u, v); };
    return antiholomorphic_derivative(second_slot, z, 0, st);
  };
  const Eigen::MatrixXcd gzzbar = holomorphic_derivative(mixed_inner, z, 0, st);

  // C = [A B], A = -G^{-1} G_z G^{-1}, B = G^{-1};
  // G_Y = [[G, G_zbar], [G_z, G_zzbar]]; result = tr(C G_Y C^H G).
  Eigen::MatrixXcd c(m, 2 * m);
  c.leftCols(m) = -ginv * gz * ginv;
  c.rightCols(m) = ginv;
  Eigen::MatrixXcd gy(2 * m, 2 * m);
  gy.topLeftCorner(m, m) = g;
  gy.topRightCorner(m, m) = gzbar;
  gy.bottomLeftCorner(m, m) = gz;
  gy.bottomRightCorner(m, m) = gzzbar;

  const Complex value = (c * gy * c.adjoint() * g).trace();
  const double scale = 1.0 + std::abs(value);
  if (std::abs(value.imag()) > 1e-7 * scale)
    throw NumericalError("||dPi/dz||^2 came out non-real: " + std::to_string(value.imag()));
  if (value.real() < -1e-7 * scale)
    throw NumericalError("||dPi/dz||^2 came out negative: " + std::to_string(value.real()));
  return std::max(0.0, value.real());
}

namespace {

void check_defect_kernel(const QuotientSpec& spec, const DefectOptions& opts) {
  if (spec.kernel.family != KernelFamily::szego && !opts.allow_non_szego)
    throw ParameterError(
        "similarity defect compares against the Hardy term; set allow_non_szego to override");
}

}  // namespace

double similarity_defect(const QuotientSpec& spec, const Point& z, const DefectOptions& opts) {
  spec.validate();
  check_defect_kernel(spec, opts);
  if (spec.kernel.dim() != 1) throw UnsupportedError("similarity defect is disk-only");
  const int m = spec.twist_rank();

  const CokernelFrame frame = cokernel_frame(spec.theta, z);
  const GramFunction gram = gram_function(spec.kernel, frame);
  const double hs = hs_projection_derivative(gram, z);
  const double r2 = std::norm(z[0]);
  return hs - static_cast<double>(m) / ((1.0 - r2) * (1.0 - r2));
}

DefectProfile defect_profile(const QuotientSpec& spec, const std::vector<Point>& grid,
                             const DefectOptions& opts) {
  spec.validate();
  check_defect_kernel(spec, opts);
  if (grid.empty()) throw InputError("defect_profile needs a non-empty grid");
  DefectProfile profile;
  profile.rank = spec.twist_rank();
  profile.non_szego = spec.kernel.family != KernelFamily::szego;
  profile.samples.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int k) {
    const Point& z = grid[static_cast<size_t>(k)];
    profile.samples[static_cast<size_t>(k)] = DefectSample{z, similarity_defect(spec, z, opts)};
  });
  return profile;
}

CarlesonReport carleson_diagnostic(const QuotientSpec& spec, int levels, double r_max,
                                   const DefectOptions& opts) {
  spec.validate();
  check_defect_kernel(spec, opts);
  if (spec.kernel.dim() != 1) throw UnsupportedError("Carleson diagnostic is disk-only");
  if (levels < 0 || levels > 10) throw InputError("levels must lie in [0, 10]");
  if (!(r_max > 0.0 && r_max <= 1.0 - kDefaultMargin))
    throw InputError("carleson r_max must lie in (0, 1 - margin]");

  constexpr int kRadialCells = 256;
  constexpr int kAngularCells = 512;
  const double dr = r_max / kRadialCells;
  const double dth = 2.0 * std::numbers::pi / kAngularCells;

  // h at cell midpoints; rows are radial bands.
  std::vector<double> h_cell(static_cast<size_t>(kRadialCells) * kAngularCells);
  parallel_for(kRadialCells, [&](int i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < kAngularCells; ++j) {
      const double th = (j + 0.5) * dth;
      const Point z{std::polar(r, th)};
      h_cell[static_cast<size_t>(i) * kAngularCells + static_cast<size_t>(j)] =
          similarity_defect(spec, z, opts);
    }
  });

  CarlesonReport report;
  report.levels = levels;
  report.r_max = r_max;

  for (int i = 0; i < kRadialCells; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < kAngularCells; ++j) {
      const double h = h_cell[static_cast<size_t>(i) * kAngularCells + static_cast<size_t>(j)];
      if (h < -1e-10) report.negative_flagged = true;
      report.pointwise_constant =
          std::max(report.pointwise_constant, (1.0 - r) * std::sqrt(std::max(h, 0.0)));
    }
  }

  // mu(cell) = h (1-r) r dr dth; boxes accumulate cells in fixed order.
  double cumulative = 0.0;
  for (int level = 0; level <= levels; ++level) {
    const double box_len = std::pow(2.0, -level);
    const int arcs = 1 << level;
    const double arc_width = 2.0 * std::numbers::pi / arcs;
    double level_sup = 0.0;
    for (int a = 0; a < arcs; ++a) {
      double mu = 0.0;
      for (int i = 0; i < kRadialCells; ++i) {
        const double r = (i + 0.5) * dr;
        if (r < 1.0 - box_len) continue;
        for (int j = 0; j < kAngularCells; ++j) {
          const double th = (j + 0.5) * dth;
          if (th < a * arc_width || th >= (a + 1) * arc_width) continue;
          mu += h_cell[static_cast<size_t>(i) * kAngularCells + static_cast<size_t>(j)] *
                (1.0 - r) * r * dr * dth;
        }
      }
      level_sup = std::max(level_sup, mu / box_len);
    }
    report.per_level_sup.push_back(level_sup);
    cumulative = std::max(cumulative, level_sup);
    report.cumulative_sup.push_back(cumulative);
  }
  report.sup_ratio = cumulative;
  return report;
}

std::pair<double, double> uniform_equivalence_diagnostic(const MatrixMultiplier& theta,
                                                         const std::vector<Point>& grid) {
  if (grid.empty()) throw InputError("uniform_equivalence_diagnostic needs a non-empty grid");
  const DeltaFrame delta = delta_theta(theta);
  double inf = std::numeric_limits<double>::infinity();
  double sup = 0.0;
  for (const auto& z : grid) {
    const double norm = delta.norm_at(z);
    inf = std::min(inf, norm);
    sup = std::max(sup, norm);
  }
  return {inf, sup};
}

}  // namespace curvlab
