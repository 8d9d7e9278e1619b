#include "curvlab/truncation.hpp"

#include <cmath>

#include "curvlab/bundle.hpp"
#include "curvlab/similarity.hpp"

namespace curvlab {

double monomial_weight(KernelFamily family, double alpha, int k) {
  switch (family) {
    case KernelFamily::szego:
      return 1.0;
    case KernelFamily::bergman:
      return 1.0 / std::sqrt(static_cast<double>(k) + 1.0);
    case KernelFamily::weighted_bergman:
      // ||z^k||^2 = Gamma(k+1) Gamma(alpha+2) / Gamma(k+alpha+2), the
      // normalized moment of (1-|z|^2)^alpha.
      return std::exp(0.5 * (std::lgamma(static_cast<double>(k) + 1.0) +
                             std::lgamma(alpha + 2.0) -
                             std::lgamma(static_cast<double>(k) + alpha + 2.0)));
    default:
      throw UnsupportedError(std::string("no matrix model for kernel family ") +
                             family_name(family));
  }
}

TruncatedModule build_truncated_module(const KernelSpec& kernel, int N) {
  kernel.validate();
  if (kernel.dim() != 1) throw UnsupportedError("matrix model is one-variable only");
  if (N < 1) throw InputError("truncation degree must be at least 1");
  if (kernel.family != KernelFamily::szego && kernel.family != KernelFamily::bergman &&
      kernel.family != KernelFamily::weighted_bergman)
    throw UnsupportedError(std::string("no matrix model for kernel family ") +
                           family_name(kernel.family));

  TruncatedModule module;
  module.N = N;
  module.family = kernel.family;
  module.alpha = kernel.alpha;
  module.weights.resize(static_cast<size_t>(N) + 1);
  for (int k = 0; k <= N; ++k)
    module.weights[static_cast<size_t>(k)] = monomial_weight(kernel.family, kernel.alpha, k);

  module.shift = Eigen::MatrixXcd::Zero(N + 1, N + 1);
  for (int k = 0; k < N; ++k)
    module.shift(k + 1, k) =
        module.weights[static_cast<size_t>(k) + 1] / module.weights[static_cast<size_t>(k)];
  return module;
}

Eigen::VectorXcd TruncatedModule::kernel_vector(Complex w) const {
  Eigen::VectorXcd v(N + 1);
  Complex wbar_pow = 1.0;
  for (int k = 0; k <= N; ++k) {
    v(k) = wbar_pow / weights[static_cast<size_t>(k)];
    wbar_pow *= std::conj(w);
  }
  return v;
}

Eigen::MatrixXcd multiplication_matrix(const TruncatedModule& module, const PolyC& poly) {
  if (poly.nvars() != 1) throw UnsupportedError("matrix model is one-variable only");
  const int n1 = module.N + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n1, n1);
  for (const auto& [e, c] : poly.terms()) {
    const int d = e[0];
    for (int k = 0; k + d <= module.N; ++k)
      out(k + d, k) +=
          c * module.weights[static_cast<size_t>(k + d)] / module.weights[static_cast<size_t>(k)];
  }
  return out;
}

Eigen::MatrixXcd multiplication_matrix(const TruncatedModule& module,
                                       const MatrixMultiplier& m) {
  m.validate();
  const int n1 = module.N + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows * n1, m.cols * n1);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out.block(i * n1, j * n1, n1, n1) = multiplication_matrix(module, m.at(i, j));
  return out;
}

int numerical_rank(const Eigen::VectorXd& singular_values, double rel_threshold, double band) {
  if (singular_values.size() == 0) return 0;
  const double smax = singular_values.maxCoeff();
  if (smax == 0.0) return 0;
  const double threshold = rel_threshold * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    const double s = singular_values(i);
    if (s > threshold / band && s < threshold * band)
      throw IndeterminateRankError(
          "singular value " + std::to_string(s) + " falls inside the ambiguity band [" +
          std::to_string(threshold / band) + ", " + std::to_string(threshold * band) +
          "]; rank decision withheld");
    if (s >= threshold) ++rank;
  }
  return rank;
}

TruncatedQuotient build_truncated_quotient(const TruncatedModule& module,
                                           const MatrixMultiplier& theta) {
  theta.validate_tall();
  const int n1 = module.N + 1;
  TruncatedQuotient quot;
  quot.q = theta.rows;
  quot.p = theta.cols;
  quot.N = module.N;
  quot.m_theta = multiplication_matrix(module, theta);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(quot.m_theta, Eigen::ComputeFullU);
  quot.rank = numerical_rank(svd.singularValues());
  quot.range_basis = svd.matrixU().leftCols(quot.rank);
  quot.complement_basis = svd.matrixU().rightCols(quot.q * n1 - quot.rank);

  quot.ambient_shift = Eigen::MatrixXcd::Zero(quot.q * n1, quot.q * n1);
  for (int b = 0; b < quot.q; ++b)
    quot.ambient_shift.block(b * n1, b * n1, n1, n1) = module.shift;
  quot.compressed_mz =
      quot.complement_basis.adjoint() * quot.ambient_shift * quot.complement_basis;
  return quot;
}

namespace {

Eigen::VectorXcd gamma_vector(const TruncatedModule& module, const DeltaFrame& delta,
                              Complex w) {
  const int n1 = module.N + 1;
  const int q = static_cast<int>(delta.components.size());
  const Eigen::VectorXcd kw = module.kernel_vector(w);
  Eigen::VectorXcd gamma(q * n1);
  for (int j = 0; j < q; ++j)
    gamma.segment(j * n1, n1) = std::conj(delta.components[static_cast<size_t>(j)].eval1(w)) * kw;
  return gamma;
}

}  // namespace

EigenvectorCheck quotient_eigenvector_check(const KernelSpec& kernel,
                                            const MatrixMultiplier& theta, Complex w, int N) {
  const TruncatedModule module = build_truncated_module(kernel, N);
  const TruncatedQuotient quot = build_truncated_quotient(module, theta);
  const DeltaFrame delta = delta_theta(theta);

  const Eigen::VectorXcd gamma = gamma_vector(module, delta, w);
  const double norm = gamma.norm();
  if (norm < 1e-12)
    throw DegenerateError("gamma_w vanishes at w = " + to_string(Point{w}));

  EigenvectorCheck check;
  check.eigen_residual =
      (quot.ambient_shift.adjoint() * gamma - std::conj(w) * gamma).norm() / norm;
  check.range_residual = (quot.range_basis.adjoint() * gamma).norm() / norm;
  return check;
}

int localized_dimension(const KernelSpec& kernel, const MatrixMultiplier& theta, Complex w,
                        int N) {
  const TruncatedModule module = build_truncated_module(kernel, N);
  const TruncatedQuotient quot = build_truncated_quotient(module, theta);
  const int d = quot.complement_dim();
  const Eigen::MatrixXcd a =
      quot.compressed_mz - w * Eigen::MatrixXcd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return d - numerical_rank(svd.singularValues());
}

double oracle_gram_check(const KernelSpec& kernel, const MatrixMultiplier& theta, Complex z,
                         Complex w, int N) {
  const TruncatedModule module = build_truncated_module(kernel, N);
  const DeltaFrame delta = delta_theta(theta);
  const Eigen::VectorXcd gamma_w = gamma_vector(module, delta, w);
  const Eigen::VectorXcd gamma_z = gamma_vector(module, delta, z);
  // <gamma_w, gamma_z> with the first slot linear.
  const Complex truncated = gamma_z.dot(gamma_w);

  const GramFunction gram = gram_function(kernel, delta);
  const Complex analytic = gram.eval(Point{z}, Point{w})(0, 0);
  return std::abs(truncated - analytic) / std::abs(analytic);
}

SimilarityMapResult similarity_map_condition(const KernelSpec& kernel,
                                             const MatrixMultiplier& theta,
                                             const MatrixMultiplier& psi, int N) {
  // Validates Psi Theta = I at coefficient level and builds Q = I - Theta Psi.
  const IdempotentSymbol idem = build_idempotent(theta, psi);

  const TruncatedModule module = build_truncated_module(kernel, N);
  const TruncatedQuotient quot = build_truncated_quotient(module, theta);
  const int n1 = N + 1;
  const int q = theta.rows;

  const Eigen::MatrixXcd m_q = multiplication_matrix(module, idem.q_symbol);
  const Eigen::MatrixXcd r_psi = multiplication_matrix(module, psi);

  Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(r_psi, Eigen::ComputeFullV);
  const int r_rank = numerical_rank(rsvd.singularValues());
  const Eigen::MatrixXcd ker_basis = rsvd.matrixV().rightCols(q * n1 - r_rank);

  const Eigen::MatrixXcd x = ker_basis.adjoint() * m_q * quot.complement_basis;
  Eigen::JacobiSVD<Eigen::MatrixXcd> xsvd(x);

  SimilarityMapResult out;
  out.sigma_max = xsvd.singularValues().maxCoeff();
  out.sigma_min = xsvd.singularValues().minCoeff();
  out.invertibility_flag = out.sigma_min >= 1e-10;
  out.condition = out.sigma_max / out.sigma_min;

  // Module-map check away from the top-degree boundary layer: restrict the
  // quotient-side domain to complement vectors supported on degrees
  // <= N - deg Theta - 1.
  const int layer = theta.degree() + 1;
  const int cutoff = N - layer;  // keep degrees <= cutoff
  std::vector<int> high_rows;
  for (int b = 0; b < q; ++b)
    for (int k = cutoff + 1; k <= N; ++k) high_rows.push_back(b * n1 + k);
  Eigen::MatrixXcd high(static_cast<Eigen::Index>(high_rows.size()), quot.complement_dim());
  for (size_t r = 0; r < high_rows.size(); ++r)
    high.row(static_cast<Eigen::Index>(r)) = quot.complement_basis.row(high_rows[r]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> hsvd(high, Eigen::ComputeFullV);
  const int h_rank = numerical_rank(hsvd.singularValues());
  const Eigen::MatrixXcd low_subspace =
      hsvd.matrixV().rightCols(quot.complement_dim() - h_rank);

  const Eigen::MatrixXcd a_quot = quot.compressed_mz;
  const Eigen::MatrixXcd a_ker = ker_basis.adjoint() * quot.ambient_shift * ker_basis;
  const Eigen::MatrixXcd commutator = (x * a_quot - a_ker * x) * low_subspace;
  Eigen::JacobiSVD<Eigen::MatrixXcd> csvd(commutator);
  out.module_map_residual =
      csvd.singularValues().size() == 0 ? 0.0 : csvd.singularValues().maxCoeff();
  return out;
}

}  // namespace curvlab
