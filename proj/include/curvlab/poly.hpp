#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvlab/types.hpp"

namespace curvlab {

/// Sparse polynomial in n commuting complex variables. Terms map exponent
/// multi-indices to coefficients; zero coefficients are never stored.
class PolyC {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Complex>;

  PolyC() = default;
  explicit PolyC(int nvars) : nvars_(check_nvars(nvars)) {}

  static PolyC constant(int nvars, Complex c);
  static PolyC variable(int nvars, int index);
  static PolyC monomial(int nvars, Exponents exps, Complex c);
  /// Univariate polynomial from dense coefficients (c[k] multiplies z^k).
  static PolyC from_coeffs(const std::vector<Complex>& coeffs);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max total degree; -1 for the zero polynomial.
  int degree() const;
  /// Max degree in one variable; -1 for the zero polynomial.
  int degree_in(int var) const;
  /// Largest coefficient magnitude (0 for the zero polynomial).
  double max_coeff() const;

  /// Horner-per-variable evaluation.
  Complex eval(const Point& z) const;
  Complex eval1(Complex z) const;  // univariate convenience

  PolyC operator+(const PolyC& rhs) const;
  PolyC operator-(const PolyC& rhs) const;
  PolyC operator*(const PolyC& rhs) const;
  PolyC operator-() const;
  PolyC operator*(Complex c) const;
  PolyC& operator+=(const PolyC& rhs);
  PolyC& operator-=(const PolyC& rhs);

  bool operator==(const PolyC& rhs) const = default;

  /// Coefficient-wise complex conjugate (exponents untouched; whether the
  /// variables mean z or zbar is the caller's bookkeeping).
  PolyC conjugated() const;

  /// Formal partial derivative with respect to one variable.
  PolyC derivative(int var) const;

  /// Re-embed into a polynomial ring with more variables, shifting every
  /// exponent slot by `offset`.
  PolyC lift(int new_nvars, int offset) const;

  /// Drop terms with |coefficient| <= eps. Returns *this.
  PolyC& prune(double eps = 0.0);

  std::string str() const;

 private:
  static int check_nvars(int n);
  void add_term(const Exponents& e, Complex c);

  int nvars_ = 0;
  TermMap terms_;

  friend PolyC operator*(Complex c, const PolyC& p);
};

PolyC operator*(Complex c, const PolyC& p);

/// Quotient and remainder of univariate division: a = q*b + r, deg r < deg b.
/// Coefficients below eps_floor * (max input coefficient) are flushed to zero.
struct PolyDivMod {
  PolyC quotient;
  PolyC remainder;
};
PolyDivMod poly_divmod(const PolyC& a, const PolyC& b, double eps_floor = 1e-12);

}  // namespace curvlab
