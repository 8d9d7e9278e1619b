#pragma once

#include <optional>
#include <vector>

#include "curvlab/bundle.hpp"

namespace curvlab {

/// A quotient-module description: building-block kernel, symbol Theta and an
/// optional left inverse Psi.
struct QuotientSpec {
  KernelSpec kernel;
  MatrixMultiplier theta;
  std::optional<MatrixMultiplier> psi;

  void validate() const;
  int twist_rank() const { return theta.rows - theta.cols; }
};

/// Deterministic sampling grids adapted to the domain shape.
struct GridSpec {
  enum class Type { disk, ball, polydisk, points };

  Type type = Type::disk;
  int dim = 1;          // ball/polydisk/points
  double r_max = 0.8;   // max modulus (must stay inside the margin)
  int radial = 24;      // disk
  int angular = 48;     // disk
  int per_axis = 8;     // ball/polydisk
  std::vector<Point> explicit_points;

  DomainSpec domain() const;
  /// Points in a fixed deterministic order (origin first where applicable).
  std::vector<Point> generate() const;
  void validate() const;
};

/// Curvature of the quotient-module bundle at z: the metric is the twisted
/// Gram G_Theta(w) = K(w,w) G_f(w) of rank q-p.
CurvatureMatrix quotient_curvature(const QuotientSpec& spec, const Point& z,
                                   const DiffOptions& opts = {});

enum class GridErrorPolicy { abort, skip };

struct AdditivityResult {
  double max_residual = 0.0;
  Point witness;
  int points_used = 0;
  int points_skipped = 0;
};

/// Max over the grid of || K_{H_Theta} - K_H (x) I - I (x) K_{V*} || where the
/// twist term is computed from the frame Gramian alone (it never evaluates the
/// kernel). Chart/metric failures at grid points abort or are skipped per
/// policy.
AdditivityResult verify_additivity(const QuotientSpec& spec, const std::vector<Point>& grid,
                                   GridErrorPolicy policy = GridErrorPolicy::abort);

struct IsoVerdict {
  bool isomorphic = false;
  double max_deviation = 0.0;
  Point witness;
  double tolerance = 0.0;
};

/// Isomorphism criterion: compares the mixed Wirtinger Hessians
/// [d_i dbar_j log ||Delta_k||^2] on the grid (line-bundle case q = p+1);
/// for q-p > 1 compares the full twist curvature matrices. Derivatives are
/// exact coefficient-level operations, so the comparison carries no
/// differencing noise.
IsoVerdict iso_test(const MatrixMultiplier& theta1, const MatrixMultiplier& theta2,
                    const std::vector<Point>& grid, double tol);

struct CrossKernelResult {
  bool consistent = false;
  IsoVerdict verdict_a;
  IsoVerdict verdict_b;
  bool twist_bitwise_identical = false;
  double curvature_gap_a = 0.0;  // max grid gap of quotient curvatures under A
  double curvature_gap_b = 0.0;
};

/// Building-block independence: the quotient-curvature comparison under
/// kernel A must agree with the one under kernel B, and the twist curvatures
/// (which consume no kernel) must be bit-identical across the two runs.
CrossKernelResult cross_kernel_check(const KernelSpec& kernel_a, const KernelSpec& kernel_b,
                                     const MatrixMultiplier& theta1,
                                     const MatrixMultiplier& theta2,
                                     const std::vector<Point>& grid, double tol);

}  // namespace curvlab
