#pragma once

#include <utility>
#include <vector>

#include "curvlab/quotient.hpp"

namespace curvlab {

/// The module idempotent Q = I - Theta Psi. Q^2 = Q, Q Theta = 0 and
/// trace Q = q - p hold at the coefficient level; coeff_residual records the
/// largest violation found when the symbol was built.
struct IdempotentSymbol {
  MatrixMultiplier q_symbol;  // q x q
  int rank = 0;               // q - p
  double coeff_residual = 0.0;

  Eigen::MatrixXcd eval(const Point& z) const { return eval_multiplier(q_symbol, z); }
};

/// Requires Psi Theta = I_p exactly as polynomials (CertificateError with the
/// residual otherwise).
IdempotentSymbol build_idempotent(const MatrixMultiplier& theta, const MatrixMultiplier& psi);

struct SplittingAngles {
  double min_angle = 0.0;     // min over grid of the smallest principal angle
  double max_condition = 0.0; // max over grid of cond([ran Theta basis | ran Q basis])
};

/// Localized splitting diagnostic: the pointwise decomposition
/// C^q = ran Theta(z) + ran Q(z). Consumes no kernel — the decomposition is
/// independent of the building block.
SplittingAngles splitting_angle(const MatrixMultiplier& theta, const IdempotentSymbol& q,
                                const std::vector<Point>& grid);

/// Squared Hilbert-Schmidt norm of dPi/dz, where Pi(z) projects onto the span
/// of the anti-holomorphic frame with two-variable Gram kernel `gram`.
/// Assembled from G, G_z, G_zbar = G_z^*, G_zzbar (Wirtinger derivatives of
/// the Gram kernel in its separately (anti)holomorphic variables):
///   dPi/dz = V A V^* + V B W^*,  A = -G^{-1} G_z G^{-1},  B = G^{-1},
///   ||dPi/dz||_2^2 = trace(C G_Y C^* G_X),  C = [A B],
/// with G_X = G and G_Y the Gram matrix of the frame and its dbar-derivative.
/// One variable (disk) only.
double hs_projection_derivative(const GramFunction& gram, const Point& z);

struct DefectOptions {
  /// The defect compares against the Hardy-space term; other building blocks
  /// are allowed only when this flag is set, and the result is marked.
  bool allow_non_szego = false;
};

/// h(z) = ||dPi/dz||_2^2 - m/(1-|z|^2)^2 with m = q - p.
double similarity_defect(const QuotientSpec& spec, const Point& z, const DefectOptions& = {});

struct DefectSample {
  Point z;
  double h = 0.0;
};

struct DefectProfile {
  std::vector<DefectSample> samples;
  int rank = 0;
  bool non_szego = false;
};

DefectProfile defect_profile(const QuotientSpec& spec, const std::vector<Point>& grid,
                             const DefectOptions& = {});

struct CarlesonReport {
  int levels = 0;
  double r_max = 0.0;                  // truncation radius of the quadrature
  double sup_ratio = 0.0;              // sup over all boxes up to `levels` of mu(Q)/l(I)
  double pointwise_constant = 0.0;     // sup (1-|z|) sqrt(max(h,0))
  std::vector<double> per_level_sup;   // sup over boxes at each level
  std::vector<double> cumulative_sup;  // sup over all boxes at levels <= l
  bool negative_flagged = false;       // h < 0 somewhere (integrated as signed)
};

/// Integrates d mu = h(z)(1-|z|) dA over dyadic Carleson boxes
/// Q(I) = { z : 1 - l(I) <= |z| < 1, arg z in I }, l(I) = 2^-level, truncated
/// at r_max, by polar midpoint quadrature (256 x 512 cells). Diagnostics
/// only: stability across levels is evidence, never proof.
CarlesonReport carleson_diagnostic(const QuotientSpec& spec, int levels, double r_max,
                                   const DefectOptions& = {});

/// (inf, sup) over the grid of ||Delta_Theta(z)||: the line-bundle uniform
/// equivalence diagnostic (q = p+1).
std::pair<double, double> uniform_equivalence_diagnostic(const MatrixMultiplier& theta,
                                                         const std::vector<Point>& grid);

}  // namespace curvlab
