#pragma once

#include <functional>

#include <Eigen/Dense>

#include "curvlab/types.hpp"

namespace curvlab {

/// Orders of Wirtinger differentiation: holo[i] counts d/dz_i applications,
/// anti[j] counts d/dzbar_j. Total order at most 2.
struct WirtingerOrder {
  std::vector<int> holo;
  std::vector<int> anti;

  static WirtingerOrder none(int n);
  /// First holomorphic derivative in variable i.
  static WirtingerOrder d(int n, int i);
  /// First anti-holomorphic derivative in variable j.
  static WirtingerOrder dbar(int n, int j);
  /// Mixed second derivative d_i dbar_j.
  static WirtingerOrder d_dbar(int n, int i, int j);

  int total() const;
  void validate(int n) const;
};

struct DiffOptions {
  /// Central-difference step is step_scale * max(1, |z|).
  double step_scale = 1e-4;
  /// Margin added to the domain check: stencil of radius 4h must stay inside.
  double domain_margin = kDefaultMargin;
  /// When set, stencil points are validated against this domain.
  const DomainSpec* domain = nullptr;
};

using ScalarField = std::function<Complex(const Point&)>;
using MatrixField = std::function<Eigen::MatrixXcd(const Point&)>;

/// Wirtinger derivative of f at z by central differences in the 2n real
/// coordinates with one level of Richardson extrapolation (error O(h^4)).
/// Throws StepSizeError if the stencil leaves the domain margin.
Complex wirtinger_derivative(const ScalarField& f, const Point& z, const WirtingerOrder& order,
                             const DiffOptions& opts = {});

/// Same engine applied entrywise-consistently to a matrix-valued map (one
/// stencil evaluation per point, shared across entries).
Eigen::MatrixXcd wirtinger_derivative(const MatrixField& f, const Point& z,
                                      const WirtingerOrder& order, const DiffOptions& opts = {});

// ---------------------------------------------------------------------------
// High-accuracy derivatives for separately holomorphic data.
//
// For a function holomorphic in one complex variable near z, the derivative
// equals the trapezoidal Cauchy-integral stencil on a small circle, with
// error O(rho^M); roundoff grows only like eps/rho. Used where the input is
// known to be holomorphic (frames, two-variable Gram kernels), which the
// real-coordinate engine cannot exploit.
// ---------------------------------------------------------------------------

struct CircleStencil {
  int points = 8;
  double radius = 0.02;
};

/// d/dz of a function holomorphic in coordinate i near z.
Complex holomorphic_derivative(const ScalarField& f, const Point& z, int i,
                               const CircleStencil& st = {});

/// d/dzbar of a function anti-holomorphic in coordinate j near z.
Complex antiholomorphic_derivative(const ScalarField& f, const Point& z, int j,
                                   const CircleStencil& st = {});

Eigen::MatrixXcd holomorphic_derivative(const MatrixField& f, const Point& z, int i,
                                        const CircleStencil& st = {});
Eigen::MatrixXcd antiholomorphic_derivative(const MatrixField& f, const Point& z, int j,
                                            const CircleStencil& st = {});

}  // namespace curvlab
