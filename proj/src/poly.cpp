#include "curvlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvlab {

int PolyC::check_nvars(int n) {
  if (n < 1) throw ParameterError("polynomial needs at least one variable");
  return n;
}

PolyC PolyC::constant(int nvars, Complex c) {
  PolyC p(nvars);
  p.add_term(Exponents(static_cast<size_t>(nvars), 0), c);
  return p;
}

PolyC PolyC::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw InputError("variable index out of range");
  PolyC p(nvars);
  Exponents e(static_cast<size_t>(nvars), 0);
  e[static_cast<size_t>(index)] = 1;
  p.add_term(e, 1.0);
  return p;
}

PolyC PolyC::monomial(int nvars, Exponents exps, Complex c) {
  if (static_cast<int>(exps.size()) != nvars) throw InputError("exponent list length != nvars");
  for (int k : exps)
    if (k < 0) throw InputError("negative exponent");
  PolyC p(nvars);
  p.add_term(exps, c);
  return p;
}

PolyC PolyC::from_coeffs(const std::vector<Complex>& coeffs) {
  PolyC p(1);
  for (size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<int>(k)}, coeffs[k]);
  return p;
}

void PolyC::add_term(const Exponents& e, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

int PolyC::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int k : e) t += k;
    d = std::max(d, t);
  }
  return d;
}

int PolyC::degree_in(int var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<size_t>(var)]);
  return d;
}

double PolyC::max_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

namespace {

Complex pow_int(Complex z, int k) {
  Complex r = 1.0;
  Complex base = z;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

using TermIt = PolyC::TermMap::const_iterator;

// Horner in variable v over a lex-contiguous range of terms (all exponents in
// variables < v are equal across the range).
Complex eval_range(TermIt begin, TermIt end, int v, int nvars, const Point& z) {
  if (v == nvars) return begin->second;
  struct Group {
    int k;
    TermIt b, e;
  };
  std::vector<Group> groups;
  for (TermIt it = begin; it != end;) {
    const int k = it->first[static_cast<size_t>(v)];
    TermIt sub = it;
    while (sub != end && sub->first[static_cast<size_t>(v)] == k) ++sub;
    groups.push_back({k, it, sub});
    it = sub;
  }
  // Map order is ascending in the exponent of v; Horner walks descending.
  Complex acc = 0.0;
  int k_prev = -1;
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    const Complex inner = eval_range(g->b, g->e, v + 1, nvars, z);
    if (k_prev < 0) {
      acc = inner;
    } else {
      acc = acc * pow_int(z[v], k_prev - g->k) + inner;
    }
    k_prev = g->k;
  }
  return acc * pow_int(z[v], k_prev);
}

}  // namespace

Complex PolyC::eval(const Point& z) const {
  if (nvars_ == 0) throw InputError("evaluating a default-constructed polynomial");
  if (z.dim() != nvars_)
    throw InputError("point dimension " + std::to_string(z.dim()) + " != nvars " +
                     std::to_string(nvars_));
  if (terms_.empty()) return 0.0;
  return eval_range(terms_.begin(), terms_.end(), 0, nvars_, z);
}

Complex PolyC::eval1(Complex z) const { return eval(Point{z}); }

PolyC PolyC::operator+(const PolyC& rhs) const {
  PolyC out = *this;
  out += rhs;
  return out;
}

PolyC PolyC::operator-(const PolyC& rhs) const {
  PolyC out = *this;
  out -= rhs;
  return out;
}

PolyC& PolyC::operator+=(const PolyC& rhs) {
  if (nvars_ != rhs.nvars_) throw InputError("polynomial variable counts differ");
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

PolyC& PolyC::operator-=(const PolyC& rhs) {
  if (nvars_ != rhs.nvars_) throw InputError("polynomial variable counts differ");
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

PolyC PolyC::operator*(const PolyC& rhs) const {
  if (nvars_ != rhs.nvars_) throw InputError("polynomial variable counts differ");
  PolyC out(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

PolyC PolyC::operator-() const {
  PolyC out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

PolyC PolyC::operator*(Complex c) const {
  PolyC out(nvars_);
  if (c == Complex{}) return out;
  for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
  return out;
}

PolyC operator*(Complex c, const PolyC& p) { return p * c; }

PolyC PolyC::conjugated() const {
  PolyC out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, std::conj(c));
  return out;
}

PolyC PolyC::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw InputError("variable index out of range");
  PolyC out(nvars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<size_t>(var)];
    if (k == 0) continue;
    Exponents d = e;
    --d[static_cast<size_t>(var)];
    out.add_term(d, c * static_cast<double>(k));
  }
  return out;
}

PolyC PolyC::lift(int new_nvars, int offset) const {
  if (offset < 0 || offset + nvars_ > new_nvars) throw InputError("lift offset out of range");
  PolyC out(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponents big(static_cast<size_t>(new_nvars), 0);
    for (int i = 0; i < nvars_; ++i) big[static_cast<size_t>(offset + i)] = e[static_cast<size_t>(i)];
    out.terms_.emplace(big, c);
  }
  return out;
}

PolyC& PolyC::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

std::string PolyC::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*z" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

PolyDivMod poly_divmod(const PolyC& a, const PolyC& b, double eps_floor) {
  if (a.nvars() != 1 || b.nvars() != 1)
    throw UnsupportedError("polynomial division is univariate only");
  if (b.is_zero()) throw InputError("division by the zero polynomial");

  const double scale = std::max(a.max_coeff(), b.max_coeff());
  const double floor = eps_floor * std::max(scale, 1.0);

  const int db = b.degree();
  std::vector<Complex> r(static_cast<size_t>(std::max(a.degree(), 0)) + 1, 0.0);
  for (const auto& [e, c] : a.terms()) r[static_cast<size_t>(e[0])] = c;
  std::vector<Complex> bc(static_cast<size_t>(db) + 1, 0.0);
  for (const auto& [e, c] : b.terms()) bc[static_cast<size_t>(e[0])] = c;
  const Complex lead = bc[static_cast<size_t>(db)];

  int dr = a.degree();
  std::vector<Complex> q(static_cast<size_t>(std::max(dr - db + 1, 1)), 0.0);
  while (dr >= db) {
    const Complex factor = r[static_cast<size_t>(dr)] / lead;
    q[static_cast<size_t>(dr - db)] = factor;
    for (int k = 0; k <= db; ++k)
      r[static_cast<size_t>(dr - db + k)] -= factor * bc[static_cast<size_t>(k)];
    r[static_cast<size_t>(dr)] = 0.0;  // cancel exactly
    while (dr >= 0 && std::abs(r[static_cast<size_t>(dr)]) <= floor) --dr;
  }

  PolyDivMod out;
  out.quotient = PolyC::from_coeffs(q);
  std::vector<Complex> rc(r.begin(), r.begin() + (dr + 1));
  out.remainder = PolyC::from_coeffs(rc);
  out.remainder.prune(floor);
  return out;
}

}  // namespace curvlab
