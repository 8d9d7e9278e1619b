#include "curvlab/multiplier.hpp"

#include <cmath>

namespace curvlab {

MatrixMultiplier MatrixMultiplier::zero(int rows, int cols, int nvars) {
  if (rows < 1 || cols < 1) throw InputError("matrix multiplier needs positive dimensions");
  MatrixMultiplier m;
  m.rows = rows;
  m.cols = cols;
  m.nvars = nvars;
  m.entries.assign(static_cast<size_t>(rows),
                   std::vector<PolyC>(static_cast<size_t>(cols), PolyC(nvars)));
  return m;
}

MatrixMultiplier MatrixMultiplier::identity(int size, int nvars) {
  auto m = zero(size, size, nvars);
  for (int i = 0; i < size; ++i) m.at(i, i) = PolyC::constant(nvars, 1.0);
  return m;
}

MatrixMultiplier MatrixMultiplier::column(std::vector<PolyC> components) {
  if (components.empty()) throw InputError("empty column");
  auto m = zero(static_cast<int>(components.size()), 1, components.front().nvars());
  for (size_t i = 0; i < components.size(); ++i) m.entries[i][0] = std::move(components[i]);
  m.validate();
  return m;
}

MatrixMultiplier MatrixMultiplier::row(std::vector<PolyC> components) {
  if (components.empty()) throw InputError("empty row");
  auto m = zero(1, static_cast<int>(components.size()), components.front().nvars());
  for (size_t j = 0; j < components.size(); ++j) m.entries[0][j] = std::move(components[j]);
  m.validate();
  return m;
}

void MatrixMultiplier::validate() const {
  if (rows < 1 || cols < 1) throw InputError("matrix multiplier needs positive dimensions");
  if (entries.size() != static_cast<size_t>(rows)) throw InputError("entry row count mismatch");
  for (const auto& r : entries) {
    if (r.size() != static_cast<size_t>(cols)) throw InputError("entry column count mismatch");
    for (const auto& p : r)
      if (p.nvars() != nvars) throw InputError("all entries must share nvars");
  }
}

void MatrixMultiplier::validate_tall() const {
  validate();
  if (!(1 <= cols && cols < rows))
    throw InputError("quotient symbol requires 1 <= cols < rows, got " + std::to_string(rows) +
                     "x" + std::to_string(cols));
}

int MatrixMultiplier::degree() const {
  int d = -1;
  for (const auto& r : entries)
    for (const auto& p : r) d = std::max(d, p.degree());
  return d;
}

double MatrixMultiplier::max_coeff() const {
  double m = 0.0;
  for (const auto& r : entries)
    for (const auto& p : r) m = std::max(m, p.max_coeff());
  return m;
}

MatrixMultiplier MatrixMultiplier::operator*(const MatrixMultiplier& rhs) const {
  validate();
  rhs.validate();
  if (cols != rhs.rows || nvars != rhs.nvars)
    throw InputError("matrix multiplier shape mismatch in product");
  auto out = zero(rows, rhs.cols, nvars);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rhs.cols; ++j) {
      PolyC acc(nvars);
      for (int k = 0; k < cols; ++k) acc += at(i, k) * rhs.at(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

MatrixMultiplier MatrixMultiplier::operator-(const MatrixMultiplier& rhs) const {
  if (rows != rhs.rows || cols != rhs.cols || nvars != rhs.nvars)
    throw InputError("matrix multiplier shape mismatch in difference");
  auto out = zero(rows, cols, nvars);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = at(i, j) - rhs.at(i, j);
  return out;
}

MatrixMultiplier MatrixMultiplier::operator*(Complex c) const {
  auto out = zero(rows, cols, nvars);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = at(i, j) * c;
  return out;
}

MatrixMultiplier MatrixMultiplier::right_mul(const Eigen::MatrixXcd& a) const {
  if (a.rows() != cols) throw InputError("constant factor shape mismatch");
  auto out = zero(rows, static_cast<int>(a.cols()), nvars);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < a.cols(); ++j) {
      PolyC acc(nvars);
      for (int k = 0; k < cols; ++k) acc += at(i, k) * a(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

MatrixMultiplier MatrixMultiplier::left_mul(const Eigen::MatrixXcd& a) const {
  if (a.cols() != rows) throw InputError("constant factor shape mismatch");
  auto out = zero(static_cast<int>(a.rows()), cols, nvars);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < cols; ++j) {
      PolyC acc(nvars);
      for (int k = 0; k < rows; ++k) acc += a(i, k) * at(k, j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

PolyC poly_det(const MatrixMultiplier& m) {
  m.validate();
  if (m.rows != m.cols) throw InputError("determinant of a non-square polynomial matrix");
  const int n = m.rows;
  if (n == 1) return m.at(0, 0);
  PolyC det(m.nvars);
  // Laplace expansion along the first column; matrices here are tiny.
  for (int i = 0; i < n; ++i) {
    if (m.at(i, 0).is_zero()) continue;
    auto minor = MatrixMultiplier::zero(n - 1, n - 1, m.nvars);
    for (int r = 0, mr = 0; r < n; ++r) {
      if (r == i) continue;
      for (int c = 1; c < n; ++c) minor.at(mr, c - 1) = m.at(r, c);
      ++mr;
    }
    PolyC cofactor = m.at(i, 0) * poly_det(minor);
    if (i % 2 == 1) cofactor = -cofactor;
    det += cofactor;
  }
  return det;
}

Eigen::MatrixXcd eval_multiplier(const MatrixMultiplier& theta, const Point& z) {
  theta.validate();
  if (z.dim() != theta.nvars) throw InputError("point dimension != multiplier nvars");
  Eigen::MatrixXcd out(theta.rows, theta.cols);
  for (int i = 0; i < theta.rows; ++i)
    for (int j = 0; j < theta.cols; ++j) {
      const Complex v = theta.at(i, j).eval(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("multiplier entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") overflowed at " + to_string(z));
      out(i, j) = v;
    }
  return out;
}

double corona_bound(const MatrixMultiplier& theta, const std::vector<Point>& grid) {
  theta.validate_tall();
  if (grid.empty()) throw InputError("corona_bound needs a non-empty grid");
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& z : grid) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_multiplier(theta, z));
    bound = std::min(bound, svd.singularValues().minCoeff());
  }
  return bound;
}

std::pair<PolyC, PolyC> bezout_left_inverse(const PolyC& theta1, const PolyC& theta2) {
  if (theta1.nvars() != 1 || theta2.nvars() != 1)
    throw UnsupportedError("Bezout construction is one-variable only; supply Psi directly");
  if (theta1.is_zero() && theta2.is_zero())
    throw NoLeftInverseError("both polynomials are zero");

  // Extended Euclid: maintain r = theta1*s + theta2*t.
  PolyC r0 = theta1, r1 = theta2;
  PolyC s0 = PolyC::constant(1, 1.0), s1 = PolyC(1);
  PolyC t0 = PolyC(1), t1 = PolyC::constant(1, 1.0);
  while (!r1.is_zero()) {
    auto dm = poly_divmod(r0, r1);
    PolyC r2 = dm.remainder;
    PolyC s2 = s0 - dm.quotient * s1;
    PolyC t2 = t0 - dm.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0)
    throw NoLeftInverseError("gcd has degree " + std::to_string(r0.degree()) +
                             "; the pair is not coprime");
  const Complex g = r0.terms().begin()->second;
  PolyC psi1 = s0 * (1.0 / g);
  PolyC psi2 = t0 * (1.0 / g);

  const double scale = std::max({theta1.max_coeff(), theta2.max_coeff(), 1.0});
  psi1.prune(1e-14 * scale);
  psi2.prune(1e-14 * scale);
  PolyC check = theta1 * psi1 + theta2 * psi2 - PolyC::constant(1, 1.0);
  if (check.max_coeff() > 1e-10 * scale)
    throw NumericalError("Bezout identity residual " + std::to_string(check.max_coeff()) +
                         " exceeds tolerance");
  return {psi1, psi2};
}

LeftInverseCertificate verify_left_inverse(const MatrixMultiplier& theta,
                                           const MatrixMultiplier& psi,
                                           const std::vector<Point>& grid) {
  theta.validate_tall();
  psi.validate();
  if (psi.rows != theta.cols || psi.cols != theta.rows)
    throw InputError("left inverse must be " + std::to_string(theta.cols) + "x" +
                     std::to_string(theta.rows));
  if (grid.empty()) throw InputError("verify_left_inverse needs a non-empty grid");

  LeftInverseCertificate cert;
  cert.psi = psi;
  cert.grid = grid;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(theta.cols, theta.cols);
  for (const auto& z : grid) {
    const Eigen::MatrixXcd pz = eval_multiplier(psi, z);
    const Eigen::MatrixXcd tz = eval_multiplier(theta, z);
    Eigen::JacobiSVD<Eigen::MatrixXcd> res_svd(pz * tz - eye);
    cert.residual = std::max(cert.residual, res_svd.singularValues().maxCoeff());
    Eigen::JacobiSVD<Eigen::MatrixXcd> psi_svd(pz);
    cert.sup_psi_norm = std::max(cert.sup_psi_norm, psi_svd.singularValues().maxCoeff());
  }
  return cert;
}

}  // namespace curvlab
