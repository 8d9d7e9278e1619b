#include "curvlab/wirtinger.hpp"

#include <cmath>
#include <numbers>

namespace curvlab {

WirtingerOrder WirtingerOrder::none(int n) {
  return WirtingerOrder{std::vector<int>(static_cast<size_t>(n), 0),
                        std::vector<int>(static_cast<size_t>(n), 0)};
}

WirtingerOrder WirtingerOrder::d(int n, int i) {
  auto o = none(n);
  o.holo[static_cast<size_t>(i)] = 1;
  return o;
}

WirtingerOrder WirtingerOrder::dbar(int n, int j) {
  auto o = none(n);
  o.anti[static_cast<size_t>(j)] = 1;
  return o;
}

WirtingerOrder WirtingerOrder::d_dbar(int n, int i, int j) {
  auto o = none(n);
  o.holo[static_cast<size_t>(i)] = 1;
  o.anti[static_cast<size_t>(j)] = 1;
  return o;
}

int WirtingerOrder::total() const {
  int t = 0;
  for (int k : holo) t += k;
  for (int k : anti) t += k;
  return t;
}

void WirtingerOrder::validate(int n) const {
  if (static_cast<int>(holo.size()) != n || static_cast<int>(anti.size()) != n)
    throw InputError("WirtingerOrder multi-index length does not match point dimension");
  for (int k : holo)
    if (k < 0) throw InputError("negative derivative order");
  for (int k : anti)
    if (k < 0) throw InputError("negative derivative order");
  if (total() > 2) throw InputError("only first and mixed-second Wirtinger derivatives supported");
}

namespace {

constexpr Complex kI{0.0, 1.0};

double step_for(const Point& z, const DiffOptions& opts) {
  return opts.step_scale * std::max(1.0, z.norm());
}

// One real-coordinate central difference with one Richardson level.
template <class Field, class Value>
Value first_derivative(const Field& f, const Point& z, int i, double h, bool conjugate) {
  auto central = [&](Complex dir, double step) -> Value {
    Point zp = z, zm = z;
    zp[i] += dir * step;
    zm[i] -= dir * step;
    return (f(zp) - f(zm)) * (1.0 / (2.0 * step));
  };
  auto richardson = [&](Complex dir) -> Value {
    Value coarse = central(dir, h);
    Value fine = central(dir, h / 2.0);
    return (4.0 * fine - coarse) * (1.0 / 3.0);
  };
  Value dx = richardson(Complex{1.0, 0.0});
  Value dy = richardson(kI);
  // d = (dx - i dy)/2, dbar = (dx + i dy)/2
  if (conjugate) return Value((dx + kI * dy) * 0.5);
  return Value((dx - kI * dy) * 0.5);
}

template <class Field, class Value>
Value wirt_recurse(const Field& f, const Point& z, const WirtingerOrder& order, double h) {
  const int n = z.dim();
  for (int i = 0; i < n; ++i) {
    if (order.holo[static_cast<size_t>(i)] > 0) {
      WirtingerOrder rest = order;
      --rest.holo[static_cast<size_t>(i)];
      auto g = [&](const Point& u) -> Value { return wirt_recurse<Field, Value>(f, u, rest, h); };
      return first_derivative<decltype(g), Value>(g, z, i, h, false);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (order.anti[static_cast<size_t>(j)] > 0) {
      WirtingerOrder rest = order;
      --rest.anti[static_cast<size_t>(j)];
      auto g = [&](const Point& u) -> Value { return wirt_recurse<Field, Value>(f, u, rest, h); };
      return first_derivative<decltype(g), Value>(g, z, j, h, true);
    }
  }
  return f(z);
}

template <class Field, class Value>
Value wirt_checked(const Field& f, const Point& z, const WirtingerOrder& order,
                   const DiffOptions& opts) {
  order.validate(z.dim());
  const double h = step_for(z, opts);
  if (opts.domain != nullptr) {
    const double dist = boundary_distance(*opts.domain, z);
    if (dist < opts.domain_margin + 4.0 * h)
      throw StepSizeError("stencil of radius 4h = " + std::to_string(4.0 * h) + " around " +
                          to_string(z) + " leaves the domain margin; shrink h or move the point");
  }
  return wirt_recurse<Field, Value>(f, z, order, h);
}

template <class Field, class Value>
Value circle_derivative(const Field& f, const Point& z, int i, const CircleStencil& st,
                        bool anti) {
  if (st.points < 4) throw InputError("circle stencil needs at least 4 points");
  if (st.radius <= 0.0) throw InputError("circle stencil radius must be positive");
  const int m = st.points;
  Value acc{};
  for (int k = 0; k < m; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / m;
    const Complex omega = std::polar(1.0, phase);
    Point u = z;
    u[i] += st.radius * (anti ? std::conj(omega) : omega);
    // weight omega^{-k} = conj(omega^k)
    if (k == 0) {
      acc = f(u) * std::conj(omega);
    } else {
      acc = acc + f(u) * std::conj(omega);
    }
  }
  return acc * (1.0 / (m * st.radius));
}

}  // namespace

Complex wirtinger_derivative(const ScalarField& f, const Point& z, const WirtingerOrder& order,
                             const DiffOptions& opts) {
  return wirt_checked<ScalarField, Complex>(f, z, order, opts);
}

Eigen::MatrixXcd wirtinger_derivative(const MatrixField& f, const Point& z,
                                      const WirtingerOrder& order, const DiffOptions& opts) {
  return wirt_checked<MatrixField, Eigen::MatrixXcd>(f, z, order, opts);
}

Complex holomorphic_derivative(const ScalarField& f, const Point& z, int i,
                               const CircleStencil& st) {
  return circle_derivative<ScalarField, Complex>(f, z, i, st, false);
}

Complex antiholomorphic_derivative(const ScalarField& f, const Point& z, int j,
                                   const CircleStencil& st) {
  return circle_derivative<ScalarField, Complex>(f, z, j, st, true);
}

Eigen::MatrixXcd holomorphic_derivative(const MatrixField& f, const Point& z, int i,
                                        const CircleStencil& st) {
  return circle_derivative<MatrixField, Eigen::MatrixXcd>(f, z, i, st, false);
}

Eigen::MatrixXcd antiholomorphic_derivative(const MatrixField& f, const Point& z, int j,
                                            const CircleStencil& st) {
  return circle_derivative<MatrixField, Eigen::MatrixXcd>(f, z, j, st, true);
}

}  // namespace curvlab
