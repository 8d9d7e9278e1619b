#include "curvlab/bundle.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

namespace {

// All maximal minors are small here; Laplace expansion is exact enough and
// keeps the coefficients polynomial.
MatrixMultiplier submatrix_rows(const MatrixMultiplier& m, const std::vector<int>& rows) {
  auto out = MatrixMultiplier::zero(static_cast<int>(rows.size()), m.cols, m.nvars);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < m.cols; ++c) out.at(static_cast<int>(r), c) = m.at(rows[r], c);
  return out;
}

MatrixMultiplier poly_transpose(const MatrixMultiplier& m) {
  auto out = MatrixMultiplier::zero(m.cols, m.rows, m.nvars);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
  return out;
}

// adj(M)_{ij} = (-1)^{i+j} det(M without row j, column i); M * adj(M) = det(M) I.
MatrixMultiplier poly_adjugate(const MatrixMultiplier& m) {
  if (m.rows != m.cols) throw InputError("adjugate of a non-square matrix");
  const int n = m.rows;
  auto out = MatrixMultiplier::zero(n, n, m.nvars);
  if (n == 1) {
    out.at(0, 0) = PolyC::constant(m.nvars, 1.0);
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto minor = MatrixMultiplier::zero(n - 1, n - 1, m.nvars);
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor.at(mr, mc) = m.at(r, c);
          ++mc;
        }
        ++mr;
      }
      PolyC cof = poly_det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      out.at(i, j) = std::move(cof);
    }
  }
  return out;
}

void check_annihilation(const MatrixMultiplier& theta, const std::vector<PolyC>& column,
                        double scale) {
  for (int c = 0; c < theta.cols; ++c) {
    PolyC acc(theta.nvars);
    for (int r = 0; r < theta.rows; ++r) acc += theta.at(r, c) * column[static_cast<size_t>(r)];
    if (acc.max_coeff() > 1e-12 * std::max(scale, 1.0))
      throw NumericalError("frame column fails Theta^T v = 0 at coefficient level (residual " +
                           std::to_string(acc.max_coeff()) + ")");
  }
}

}  // namespace

Eigen::VectorXcd DeltaFrame::eval(const Point& z) const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(components.size()));
  for (size_t i = 0; i < components.size(); ++i) v(static_cast<Eigen::Index>(i)) = components[i].eval(z);
  return v;
}

double DeltaFrame::norm_at(const Point& z) const { return eval(z).norm(); }

DeltaFrame delta_theta(const MatrixMultiplier& theta) {
  theta.validate_tall();
  if (theta.rows != theta.cols + 1)
    throw InputError("delta_theta needs q = p+1; use cokernel_frame for general shapes");
  const int q = theta.rows;
  DeltaFrame frame;
  frame.nvars = theta.nvars;
  frame.components.reserve(static_cast<size_t>(q));
  double scale = 0.0;
  for (int i = 0; i < q; ++i) {
    std::vector<int> rows;
    for (int r = 0; r < q; ++r)
      if (r != i) rows.push_back(r);
    PolyC minor = poly_det(submatrix_rows(theta, rows));
    if (i % 2 == 1) minor = -minor;  // component i gets sign (-1)^(i+1), 1-based
    scale = std::max(scale, minor.max_coeff());
    frame.components.push_back(std::move(minor));
  }
  bool all_zero = true;
  for (const auto& c : frame.components) all_zero &= c.is_zero();
  if (all_zero) throw DegenerateError("all maximal minors vanish identically; rank Theta < p");
  check_annihilation(theta, frame.components, std::max(scale, theta.max_coeff()));
  return frame;
}

bool CokernelFrame::in_chart(const Point& z) const {
  return std::abs(pivot_det.eval(z)) >= 0.1 * pivot_scale;
}

Eigen::MatrixXcd CokernelFrame::eval(const Point& z) const {
  if (!in_chart(z))
    throw ChartError("point " + to_string(z) + " is outside the chart of the frame centered at " +
                     to_string(chart_center));
  return eval_multiplier(columns, z);
}

CokernelFrame cokernel_frame(const MatrixMultiplier& theta, const Point& z0) {
  theta.validate_tall();
  const int q = theta.rows;
  const int p = theta.cols;
  const Eigen::MatrixXcd t0 = eval_multiplier(theta, z0);

  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t0);
    const double smax = svd.singularValues().maxCoeff();
    if (smax <= 0.0 || svd.singularValues().minCoeff() <= 1e-12 * smax)
      throw DegenerateError("rank Theta(z0) < p at " + to_string(z0) +
                            "; no cokernel frame at a singular point");
  }

  // Pivot rows: maximize |det| of the p x p submatrix at z0, lexicographic
  // tie-break (strictly-greater comparison over lexicographic enumeration).
  std::vector<int> combo(static_cast<size_t>(p));
  for (int i = 0; i < p; ++i) combo[static_cast<size_t>(i)] = i;
  std::vector<int> best;
  double best_det = -1.0;
  while (true) {
    Eigen::MatrixXcd sub(p, p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) sub(r, c) = t0(combo[static_cast<size_t>(r)], c);
    const double d = std::abs(sub.determinant());
    if (d > best_det) {
      best_det = d;
      best = combo;
    }
    // next combination
    int i = p - 1;
    while (i >= 0 && combo[static_cast<size_t>(i)] == q - p + i) --i;
    if (i < 0) break;
    ++combo[static_cast<size_t>(i)];
    for (int k = i + 1; k < p; ++k) combo[static_cast<size_t>(k)] = combo[static_cast<size_t>(k - 1)] + 1;
  }
  if (best_det <= 0.0) throw DegenerateError("no invertible pivot minor at " + to_string(z0));

  CokernelFrame frame;
  frame.q = q;
  frame.p = p;
  frame.pivot_rows = best;
  frame.chart_center = z0;

  const auto pivot = submatrix_rows(theta, best);
  frame.pivot_det = poly_det(pivot);
  frame.pivot_scale = std::abs(frame.pivot_det.eval(z0));
  const auto adj_t = poly_adjugate(poly_transpose(pivot));

  std::vector<int> non_pivot;
  for (int r = 0; r < q; ++r)
    if (std::find(best.begin(), best.end(), r) == best.end()) non_pivot.push_back(r);

  frame.columns = MatrixMultiplier::zero(q, q - p, theta.nvars);
  const double scale = std::max(theta.max_coeff(), frame.pivot_det.max_coeff());
  for (size_t c = 0; c < non_pivot.size(); ++c) {
    const int r0 = non_pivot[c];
    std::vector<PolyC> column(static_cast<size_t>(q), PolyC(theta.nvars));
    // Cramer solution in the pivot slots: adj(Theta_P^T) * Theta_{r0,:}^T.
    for (int i = 0; i < p; ++i) {
      PolyC acc(theta.nvars);
      for (int k = 0; k < p; ++k) acc += adj_t.at(i, k) * theta.at(r0, k);
      column[static_cast<size_t>(best[static_cast<size_t>(i)])] = std::move(acc);
    }
    column[static_cast<size_t>(r0)] = -frame.pivot_det;
    check_annihilation(theta, column, scale);
    for (int r = 0; r < q; ++r) frame.columns.at(r, static_cast<int>(c)) = column[static_cast<size_t>(r)];
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Gram kernels
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd gram_from_frames(Complex k, const Eigen::MatrixXcd& fz,
                                  const Eigen::MatrixXcd& fw) {
  // entry (i,j) = K(z,w) <f_i(z), f_j(w)> = K * (fw^H fz)^T_{ij}
  return k * (fw.adjoint() * fz).transpose();
}

}  // namespace

GramFunction gram_function(const KernelSpec& kernel, const CokernelFrame& frame) {
  kernel.validate();
  GramFunction g;
  g.rank = frame.rank();
  g.eval = [kernel, frame](const Point& z, const Point& w) {
    return gram_from_frames(eval_kernel(kernel, z, w), frame.eval(z), frame.eval(w));
  };
  return g;
}

GramFunction gram_function(const KernelSpec& kernel, const DeltaFrame& frame) {
  kernel.validate();
  GramFunction g;
  g.rank = 1;
  g.eval = [kernel, frame](const Point& z, const Point& w) {
    return gram_from_frames(eval_kernel(kernel, z, w), frame.eval(z), frame.eval(w));
  };
  return g;
}

// ---------------------------------------------------------------------------
// Curvature
// ---------------------------------------------------------------------------

CurvatureMatrix CurvatureMatrix::zero(int n, int m) {
  CurvatureMatrix c;
  c.n = n;
  c.m = m;
  c.blocks.assign(static_cast<size_t>(n),
                  std::vector<Eigen::MatrixXcd>(static_cast<size_t>(n),
                                                Eigen::MatrixXcd::Zero(m, m)));
  return c;
}

double CurvatureMatrix::max_abs() const {
  double v = 0.0;
  for (const auto& row : blocks)
    for (const auto& b : row) v = std::max(v, b.cwiseAbs().maxCoeff());
  return v;
}

double CurvatureMatrix::max_abs_diff(const CurvatureMatrix& other) const {
  if (n != other.n || m != other.m) throw InputError("curvature shape mismatch");
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v = std::max(v, (block(i, j) - other.block(i, j)).cwiseAbs().maxCoeff());
  return v;
}

double CurvatureMatrix::hermitian_defect() const {
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v = std::max(v, (block(i, j) - block(j, i).adjoint()).cwiseAbs().maxCoeff());
  return v;
}

namespace {

struct MetricFactors {
  Eigen::MatrixXcd inv;
  Eigen::MatrixXcd inv_sqrt;
};

MetricFactors factor_metric(const Eigen::MatrixXcd& g) {
  const Eigen::MatrixXcd herm = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() <= 0.0 || vals.maxCoeff() / vals.minCoeff() > 1e12)
    throw MetricDegeneracyError("metric is numerically singular (eigenvalues in [" +
                                std::to_string(vals.minCoeff()) + ", " +
                                std::to_string(vals.maxCoeff()) + "])");
  MetricFactors f;
  f.inv = es.operatorInverseSqrt() * es.operatorInverseSqrt();
  f.inv_sqrt = es.operatorInverseSqrt();
  return f;
}

CurvatureMatrix assemble_curvature(const Eigen::MatrixXcd& g,
                                   const std::vector<Eigen::MatrixXcd>& gi,
                                   const std::vector<Eigen::MatrixXcd>& gjbar,
                                   const std::vector<std::vector<Eigen::MatrixXcd>>& gij) {
  const int n = static_cast<int>(gi.size());
  const int m = static_cast<int>(g.rows());
  const MetricFactors f = factor_metric(g);
  CurvatureMatrix out = CurvatureMatrix::zero(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Coefficient of dw_i ^ dwbar_j of dbar[G^{-1} dG], orthonormalized:
      //   G^{-1/2} (dbar_j G G^{-1} d_i G - d_i dbar_j G) G^{-1/2}
      out.block(i, j) =
          f.inv_sqrt *
          (gjbar[static_cast<size_t>(j)] * f.inv * gi[static_cast<size_t>(i)] -
           gij[static_cast<size_t>(i)][static_cast<size_t>(j)]) *
          f.inv_sqrt;
    }
  const double defect = out.hermitian_defect();
  if (defect > 1e-6 * (1.0 + out.max_abs()))
    throw NumericalError("curvature hermitian pairing violated (defect " + std::to_string(defect) +
                         ")");
  return out;
}

}  // namespace

CurvatureMatrix curvature_from_gram(const MatrixField& metric, const Point& z,
                                    const DomainSpec& domain, const DiffOptions& opts) {
  const int n = z.dim();
  DiffOptions local = opts;
  local.domain = &domain;

  std::vector<Eigen::MatrixXcd> gi, gjbar;
  std::vector<std::vector<Eigen::MatrixXcd>> gij(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    gi.push_back(wirtinger_derivative(metric, z, WirtingerOrder::d(n, i), local));
  for (int j = 0; j < n; ++j)
    gjbar.push_back(wirtinger_derivative(metric, z, WirtingerOrder::dbar(n, j), local));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gij[static_cast<size_t>(i)].push_back(
          wirtinger_derivative(metric, z, WirtingerOrder::d_dbar(n, i, j), local));
  return assemble_curvature(metric(z), gi, gjbar, gij);
}

CurvatureMatrix line_curvature(const std::function<double(const Point&)>& metric, const Point& z,
                               const DomainSpec& domain, const DiffOptions& opts) {
  const int n = z.dim();
  const double g0 = metric(z);
  if (!(g0 > 0.0)) throw DomainError("line metric must be positive, got " + std::to_string(g0));

  ScalarField log_metric = [&metric](const Point& u) -> Complex {
    const double g = metric(u);
    if (!(g > 0.0))
      throw DomainError("line metric non-positive at stencil point " + to_string(u));
    return std::log(g);
  };
  DiffOptions local = opts;
  local.domain = &domain;
  CurvatureMatrix out = CurvatureMatrix::zero(n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex v =
          wirtinger_derivative(log_metric, z, WirtingerOrder::d_dbar(n, i, j), local);
      out.block(i, j)(0, 0) = -v;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Exact hermitian-polynomial calculus
// ---------------------------------------------------------------------------

PolyC hermitian_product(const PolyC& f, const PolyC& g) {
  if (f.nvars() != g.nvars()) throw InputError("variable counts differ");
  const int n = f.nvars();
  return f.lift(2 * n, 0) * g.conjugated().lift(2 * n, n);
}

PolyC hermitian_norm_square(const std::vector<PolyC>& components) {
  if (components.empty()) throw InputError("empty component list");
  const int n = components.front().nvars();
  PolyC out(2 * n);
  for (const auto& f : components) out += hermitian_product(f, f);
  return out;
}

namespace {

Point doubled_point(const Point& z) {
  Point zz;
  zz.coords.reserve(static_cast<size_t>(2 * z.dim()));
  for (const auto& c : z.coords) zz.coords.push_back(c);
  for (const auto& c : z.coords) zz.coords.push_back(std::conj(c));
  return zz;
}

}  // namespace

Eigen::MatrixXcd log_mixed_hessian(const PolyC& hermitian_poly, const Point& z) {
  if (hermitian_poly.nvars() % 2 != 0)
    throw InputError("hermitian polynomial must have an even variable count");
  const int n = hermitian_poly.nvars() / 2;
  if (z.dim() != n) throw InputError("point dimension mismatch");
  const Point zz = doubled_point(z);

  const Complex p0 = hermitian_poly.eval(zz);
  const double scale = std::max(hermitian_poly.max_coeff(), 1.0);
  if (!(p0.real() > 1e-13 * scale))
    throw DegenerateError("hermitian norm square vanishes at " + to_string(z) +
                          " (rank drop of the frame)");

  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i) {
    const PolyC pi = hermitian_poly.derivative(i);
    for (int j = 0; j < n; ++j) {
      const PolyC pj = hermitian_poly.derivative(n + j);
      const PolyC pij = pi.derivative(n + j);
      // d_i dbar_j log P = (P d_i dbar_j P - d_i P dbar_j P) / P^2
      out(i, j) = (p0 * pij.eval(zz) - pi.eval(zz) * pj.eval(zz)) / (p0 * p0);
    }
  }
  return out;
}

CurvatureMatrix twist_curvature(const DeltaFrame& frame, const Point& z) {
  const int n = frame.nvars;
  const Eigen::MatrixXcd hess = log_mixed_hessian(hermitian_norm_square(frame.components), z);
  CurvatureMatrix out = CurvatureMatrix::zero(n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.block(i, j)(0, 0) = -hess(i, j);
  return out;
}

CurvatureMatrix twist_curvature(const CokernelFrame& frame, const Point& z) {
  if (!frame.in_chart(z))
    throw ChartError("point " + to_string(z) + " is outside the frame chart");
  const int n = frame.columns.nvars;
  const int m = frame.rank();
  const Point zz = doubled_point(z);

  // Exact Gram polynomial entries H(i,j)(z, zbar) = <f_i(z), f_j(z)>.
  std::vector<std::vector<PolyC>> h(static_cast<size_t>(m),
                                    std::vector<PolyC>(static_cast<size_t>(m), PolyC(2 * n)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      PolyC acc(2 * n);
      for (int r = 0; r < frame.q; ++r)
        acc += hermitian_product(frame.columns.at(r, a), frame.columns.at(r, b));
      h[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::move(acc);
    }

  auto eval_matrix = [&](const std::function<PolyC(const PolyC&)>& der) {
    Eigen::MatrixXcd out(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        out(a, b) = der(h[static_cast<size_t>(a)][static_cast<size_t>(b)]).eval(zz);
    return out;
  };

  const Eigen::MatrixXcd g = eval_matrix([](const PolyC& p) { return p; });
  std::vector<Eigen::MatrixXcd> gi, gjbar;
  std::vector<std::vector<Eigen::MatrixXcd>> gij(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    gi.push_back(eval_matrix([i](const PolyC& p) { return p.derivative(i); }));
  for (int j = 0; j < n; ++j)
    gjbar.push_back(eval_matrix([j, n](const PolyC& p) { return p.derivative(n + j); }));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gij[static_cast<size_t>(i)].push_back(
          eval_matrix([i, j, n](const PolyC& p) { return p.derivative(i).derivative(n + j); }));
  return assemble_curvature(g, gi, gjbar, gij);
}

}  // namespace curvlab
