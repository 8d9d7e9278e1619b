#pragma once

#include <vector>

#include <Eigen/Dense>

#include "curvlab/kernel.hpp"
#include "curvlab/multiplier.hpp"

namespace curvlab {

/// Degree-<=N matrix model of a weighted Hardy-type module on the disk.
/// Basis e_k = z^k / beta_k is orthonormal; the shift matrix is the compressed
/// multiplication by z with subdiagonal entries beta_{k+1}/beta_k.
struct TruncatedModule {
  int N = 0;
  KernelFamily family = KernelFamily::szego;
  double alpha = 0.0;
  std::vector<double> weights;  // beta_0 .. beta_N
  Eigen::MatrixXcd shift;       // (N+1) x (N+1)

  /// Coefficients of the truncated kernel vector k_w: entry k is wbar^k/beta_k.
  Eigen::VectorXcd kernel_vector(Complex w) const;
};

/// Monomial norm beta_k for the disk families (szego 1, bergman 1/sqrt(k+1),
/// weighted_bergman from the closed-form moment of (1-|z|^2)^alpha).
double monomial_weight(KernelFamily family, double alpha, int k);

TruncatedModule build_truncated_module(const KernelSpec& kernel, int N);

/// Matrix of multiplication by a univariate polynomial on the truncation.
/// Lower triangular; products of such matrices equal the matrix of the
/// product polynomial (degree raising keeps intermediate degrees inside).
Eigen::MatrixXcd multiplication_matrix(const TruncatedModule& module, const PolyC& poly);

/// Block matrix of multiplication by a polynomial matrix: maps
/// C^{cols (N+1)} -> C^{rows (N+1)}, blocks in row-major multiplier layout.
Eigen::MatrixXcd multiplication_matrix(const TruncatedModule& module,
                                       const MatrixMultiplier& m);

/// The truncated quotient (H^(N) (x) C^q) / ran M_Theta with the compressed
/// module action on the orthogonal complement.
struct TruncatedQuotient {
  int q = 0;
  int p = 0;
  int N = 0;
  Eigen::MatrixXcd m_theta;           // q(N+1) x p(N+1)
  int rank = 0;                       // numerical rank of m_theta
  Eigen::MatrixXcd range_basis;       // orthonormal basis of ran M_Theta
  Eigen::MatrixXcd complement_basis;  // orthonormal basis of the quotient model
  Eigen::MatrixXcd ambient_shift;     // shift (x) I_q  (block diagonal)
  Eigen::MatrixXcd compressed_mz;     // complement^H (S (x) I_q) complement

  int complement_dim() const { return static_cast<int>(complement_basis.cols()); }
};

TruncatedQuotient build_truncated_quotient(const TruncatedModule& module,
                                           const MatrixMultiplier& theta);

/// Numerical rank with an honesty band: singular values below
/// rel_threshold * sigma_max count as zero; any singular value within a
/// factor `band` of the threshold raises IndeterminateRankError.
int numerical_rank(const Eigen::VectorXd& singular_values, double rel_threshold = 1e-8,
                   double band = 100.0);

struct EigenvectorCheck {
  double eigen_residual = 0.0;  // ||(S (x) I)^* gamma - wbar gamma|| / ||gamma||
  double range_residual = 0.0;  // ||P_{ran M_Theta} gamma|| / ||gamma||
};

/// gamma_w = k_w^(N) (x) conj(Delta_Theta(w)) must be an adjoint eigenvector
/// orthogonal to ran M_Theta, up to truncation decay (q = p+1).
EigenvectorCheck quotient_eigenvector_check(const KernelSpec& kernel,
                                            const MatrixMultiplier& theta, Complex w, int N);

/// dim of the quotient model minus the numerical rank of (compressed M_z - w):
/// the localized dimension, expected q - p at interior points.
int localized_dimension(const KernelSpec& kernel, const MatrixMultiplier& theta, Complex w,
                        int N);

/// Relative deviation of the truncated inner product <gamma_w, gamma_z> from
/// the analytic Gram kernel value (q = p+1).
double oracle_gram_check(const KernelSpec& kernel, const MatrixMultiplier& theta, Complex z,
                         Complex w, int N);

struct SimilarityMapResult {
  double condition = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double module_map_residual = 0.0;  // restricted to degrees <= N - deg Theta - 1
  bool invertibility_flag = true;    // false when sigma_min < 1e-10 (reported, not asserted)
};

/// Truncated realization of the similarity map: the compression of M_Q
/// restricted from the quotient model into ker R_Psi. Requires Psi Theta = I
/// at the coefficient level.
SimilarityMapResult similarity_map_condition(const KernelSpec& kernel,
                                             const MatrixMultiplier& theta,
                                             const MatrixMultiplier& psi, int N);

}  // namespace curvlab
