#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "curvlab/poly.hpp"
#include "curvlab/types.hpp"

namespace curvlab {

/// A matrix of polynomials in n variables. The quotient-module symbol Theta
/// is the tall case rows > cols; the same type carries left inverses (wide)
/// and idempotent symbols (square).
struct MatrixMultiplier {
  int rows = 0;
  int cols = 0;
  int nvars = 1;
  std::vector<std::vector<PolyC>> entries;  // [row][col]

  static MatrixMultiplier zero(int rows, int cols, int nvars);
  static MatrixMultiplier identity(int size, int nvars);
  /// Single-column multiplier from component polynomials.
  static MatrixMultiplier column(std::vector<PolyC> components);
  /// Single-row multiplier.
  static MatrixMultiplier row(std::vector<PolyC> components);

  const PolyC& at(int r, int c) const { return entries[static_cast<size_t>(r)][static_cast<size_t>(c)]; }
  PolyC& at(int r, int c) { return entries[static_cast<size_t>(r)][static_cast<size_t>(c)]; }

  void validate() const;
  /// Enforces the quotient-symbol shape 1 <= p < q.
  void validate_tall() const;

  int degree() const;
  double max_coeff() const;

  MatrixMultiplier operator*(const MatrixMultiplier& rhs) const;
  MatrixMultiplier operator-(const MatrixMultiplier& rhs) const;
  MatrixMultiplier operator*(Complex c) const;
  /// Right-multiplication by a constant matrix (gauge transformations).
  MatrixMultiplier right_mul(const Eigen::MatrixXcd& a) const;
  /// Left-multiplication by a constant matrix.
  MatrixMultiplier left_mul(const Eigen::MatrixXcd& a) const;
};

/// Determinant of a square polynomial matrix by Laplace expansion.
PolyC poly_det(const MatrixMultiplier& m);

/// Entrywise polynomial evaluation. Throws NumericalError on non-finite
/// results.
Eigen::MatrixXcd eval_multiplier(const MatrixMultiplier& theta, const Point& z);

/// Min over the grid of the smallest singular value of Theta(z). For the
/// column case p=1 this is min_z sqrt(sum_i |theta_i(z)|^2), the corona bound.
double corona_bound(const MatrixMultiplier& theta, const std::vector<Point>& grid);

/// Extended Euclidean algorithm over C[z]: returns (psi1, psi2) with
/// theta1*psi1 + theta2*psi2 = 1 at the coefficient level. Throws
/// NoLeftInverseError when gcd has positive degree, UnsupportedError for
/// multivariate input.
std::pair<PolyC, PolyC> bezout_left_inverse(const PolyC& theta1, const PolyC& theta2);

struct LeftInverseCertificate {
  MatrixMultiplier psi;
  double residual = 0.0;      // max over grid of ||Psi(z)Theta(z) - I||
  double sup_psi_norm = 0.0;  // sup over grid of ||Psi(z)|| (multiplier-norm proxy)
  std::vector<Point> grid;

  bool valid(double tol) const { return residual <= tol; }
};

/// Evaluates ||Psi(z)Theta(z) - I_p|| over the grid (operator norms by SVD).
LeftInverseCertificate verify_left_inverse(const MatrixMultiplier& theta,
                                           const MatrixMultiplier& psi,
                                           const std::vector<Point>& grid);

}  // namespace curvlab
