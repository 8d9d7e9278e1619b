#pragma once

#include <vector>

#include "curvlab/types.hpp"

namespace curvlab {

enum class KernelFamily { szego, bergman, weighted_bergman, drury_arveson, product };

/// A named scalar reproducing kernel with its domain and parameters.
///
/// Closed forms (z, w inside the domain):
///   szego             1 / (1 - z wbar)                    disk, n = 1
///   bergman           1 / (1 - <z,w>)^(n+1)               ball (disk if n = 1)
///   weighted_bergman  1 / (1 - z wbar)^(alpha+2)          disk, alpha > -1
///   drury_arveson     1 / (1 - <z,w>)                     ball, any n
///   product           product of factor kernels           polydisk of factors
struct KernelSpec {
  KernelFamily family = KernelFamily::szego;
  double alpha = 0.0;  // weighted_bergman only
  DomainSpec domain;
  std::vector<KernelSpec> factors;  // product only

  static KernelSpec szego();
  static KernelSpec bergman(int dim = 1);
  static KernelSpec weighted_bergman(double alpha);
  static KernelSpec drury_arveson(int dim);
  static KernelSpec product(std::vector<KernelSpec> factors);

  void validate() const;
  int dim() const { return domain.dim; }
};

const char* family_name(KernelFamily f);

/// Closed-form kernel value K(z, w). Hermitian: K(z,w) = conj(K(w,z)).
/// Throws DomainError outside the margin, ParameterError for bad parameters.
Complex eval_kernel(const KernelSpec& spec, const Point& z, const Point& w,
                    double margin = kDefaultMargin);

/// Smallest eigenvalue of the hermitian matrix [K(z_i, z_j)]. The points must
/// be pairwise distinct (otherwise DegenerateError: the strict positivity
/// check is meaningless on a singular configuration).
double gram_psd_check(const KernelSpec& spec, const std::vector<Point>& points,
                      double margin = kDefaultMargin);

}  // namespace curvlab
