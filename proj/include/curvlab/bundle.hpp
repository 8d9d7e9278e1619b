#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "curvlab/kernel.hpp"
#include "curvlab/multiplier.hpp"
#include "curvlab/wirtinger.hpp"

namespace curvlab {

// ---------------------------------------------------------------------------
// Frames of the cokernel bundle ker Theta(z)^T
// ---------------------------------------------------------------------------

/// Signed maximal minors of a (p+1) x p symbol: component i is
/// (-1)^(i+1) det(Theta with row i deleted). Spans ker Theta(z)^T and
/// satisfies Delta^T Theta = 0 as a polynomial identity.
struct DeltaFrame {
  std::vector<PolyC> components;  // size q
  int nvars = 1;

  Eigen::VectorXcd eval(const Point& z) const;
  /// ||Delta(z)|| (Euclidean norm of the evaluated components).
  double norm_at(const Point& z) const;
};

DeltaFrame delta_theta(const MatrixMultiplier& theta);

/// Holomorphic frame of ker Theta(z)^T on the chart where the selected pivot
/// minor is invertible. Each non-pivot row contributes one column: -pivot_det
/// in its own slot, the Cramer solution in the pivot slots, zero elsewhere.
/// Conjugating pointwise yields the anti-holomorphic frame of ker Theta(z)*.
struct CokernelFrame {
  int q = 0;
  int p = 0;
  std::vector<int> pivot_rows;  // size p, ascending
  MatrixMultiplier columns;     // q x (q-p), polynomial in z
  PolyC pivot_det;
  Point chart_center;
  double pivot_scale = 0.0;  // |pivot_det(chart_center)|

  int rank() const { return q - p; }
  bool in_chart(const Point& z) const;
  /// Frame columns at z; throws ChartError outside the chart.
  Eigen::MatrixXcd eval(const Point& z) const;
};

CokernelFrame cokernel_frame(const MatrixMultiplier& theta, const Point& z0);

// ---------------------------------------------------------------------------
// Gram kernels and curvature
// ---------------------------------------------------------------------------

/// Two-variable Gram kernel of a twisted frame: entry (i,j) of eval(z,w) is
/// K(z,w) <f_i(z), f_j(w)>, holomorphic in z and anti-holomorphic in w. The
/// diagonal metric(z) = eval(z,z) is hermitian positive definite on the chart.
struct GramFunction {
  int rank = 1;
  std::function<Eigen::MatrixXcd(const Point&, const Point&)> eval;

  Eigen::MatrixXcd metric(const Point& z) const { return eval(z, z); }
};

GramFunction gram_function(const KernelSpec& kernel, const CokernelFrame& frame);
GramFunction gram_function(const KernelSpec& kernel, const DeltaFrame& frame);

/// n x n array of m x m blocks: the coefficient of dw_i ^ dwbar_j for the
/// Chern curvature, expressed in the frame orthonormalized at the point (so
/// blocks[i][j] = blocks[j][i]^H up to numerics).
struct CurvatureMatrix {
  int n = 1;
  int m = 1;
  std::vector<std::vector<Eigen::MatrixXcd>> blocks;

  static CurvatureMatrix zero(int n, int m);
  const Eigen::MatrixXcd& block(int i, int j) const {
    return blocks[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  Eigen::MatrixXcd& block(int i, int j) {
    return blocks[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }

  /// Largest entrywise magnitude over all blocks.
  double max_abs() const;
  /// max_ij max-entry |blocks[i][j] - other.blocks[i][j]|.
  double max_abs_diff(const CurvatureMatrix& other) const;
  /// max_ij max-entry |blocks[i][j] - blocks[j][i]^H|.
  double hermitian_defect() const;
};

/// Chern curvature from a metric map by Wirtinger differentiation:
/// block(i,j) = G^{-1/2} (dbar_j G  G^{-1}  d_i G - d_i dbar_j G) G^{-1/2}
/// (the coefficient of dw_i ^ dwbar_j of dbar[G^{-1} dG] in the frame
/// orthonormalized at z). Throws MetricDegeneracyError when G(z) is
/// numerically singular (condition number > 1e12).
CurvatureMatrix curvature_from_gram(const MatrixField& metric, const Point& z,
                                    const DomainSpec& domain, const DiffOptions& opts = {});

/// Line-bundle curvature: block(i,j) = -d_i dbar_j log g(z). Independent code
/// path from curvature_from_gram; the two agree for m = 1.
CurvatureMatrix line_curvature(const std::function<double(const Point&)>& metric, const Point& z,
                               const DomainSpec& domain, const DiffOptions& opts = {});

// ---------------------------------------------------------------------------
// Exact hermitian-polynomial calculus (coefficient-level, no differencing)
// ---------------------------------------------------------------------------

/// sum_k f_k(z) conj(f_k)(zbar) as a polynomial in 2n variables
/// (z_1..z_n, zbar_1..zbar_n).
PolyC hermitian_norm_square(const std::vector<PolyC>& components);

/// f(z) * conj(g)(zbar) in the 2n-variable ring.
PolyC hermitian_product(const PolyC& f, const PolyC& g);

/// Exact mixed Hessian of log P at z: out(i,j) = d_i dbar_j log P evaluated
/// at (z, conj z), with the derivatives taken formally on the coefficients.
Eigen::MatrixXcd log_mixed_hessian(const PolyC& hermitian_poly, const Point& z);

/// Curvature of the cokernel (twist) bundle from the frame Gramian alone.
/// Consumes no kernel; derivative computation is exact on coefficients.
CurvatureMatrix twist_curvature(const CokernelFrame& frame, const Point& z);
CurvatureMatrix twist_curvature(const DeltaFrame& frame, const Point& z);

}  // namespace curvlab
