#include "curvlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace curvlab {

void DomainSpec::validate() const {
  if (dim < 1) throw ParameterError("domain dimension must be >= 1");
  if (shape == DomainShape::unit_disk && dim != 1)
    throw ParameterError("unit_disk requires dim = 1");
}

double Point::norm() const {
  double s = 0.0;
  for (const auto& c : coords) s += std::norm(c);
  return std::sqrt(s);
}

std::string to_string(const Point& z) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < z.dim(); ++i) {
    if (i) os << ", ";
    os << z[i].real() << (z[i].imag() < 0 ? "" : "+") << z[i].imag() << "i";
  }
  os << ")";
  return os.str();
}

double boundary_distance(const DomainSpec& domain, const Point& z) {
  domain.validate();
  if (z.dim() != domain.dim)
    throw InputError("point dimension " + std::to_string(z.dim()) +
                     " does not match domain dimension " + std::to_string(domain.dim));
  switch (domain.shape) {
    case DomainShape::unit_disk:
    case DomainShape::unit_ball:
      return 1.0 - z.norm();
    case DomainShape::polydisk: {
      double d = 1.0;
      for (const auto& c : z.coords) d = std::min(d, 1.0 - std::abs(c));
      return d;
    }
  }
  throw InputError("unknown domain shape");
}

void require_inside(const DomainSpec& domain, const Point& z, double margin) {
  const double d = boundary_distance(domain, z);
  if (d < margin)
    throw DomainError("point " + to_string(z) + " has boundary distance " + std::to_string(d) +
                      " < required margin " + std::to_string(margin));
}

// ---------------------------------------------------------------------------
// KernelSpec
// ---------------------------------------------------------------------------

KernelSpec KernelSpec::szego() {
  return KernelSpec{KernelFamily::szego, 0.0, {DomainShape::unit_disk, 1}, {}};
}

KernelSpec KernelSpec::bergman(int dim) {
  DomainShape shape = dim == 1 ? DomainShape::unit_disk : DomainShape::unit_ball;
  return KernelSpec{KernelFamily::bergman, 0.0, {shape, dim}, {}};
}

KernelSpec KernelSpec::weighted_bergman(double alpha) {
  return KernelSpec{KernelFamily::weighted_bergman, alpha, {DomainShape::unit_disk, 1}, {}};
}

KernelSpec KernelSpec::drury_arveson(int dim) {
  DomainShape shape = dim == 1 ? DomainShape::unit_disk : DomainShape::unit_ball;
  return KernelSpec{KernelFamily::drury_arveson, 0.0, {shape, dim}, {}};
}

KernelSpec KernelSpec::product(std::vector<KernelSpec> factors) {
  KernelSpec spec;
  spec.family = KernelFamily::product;
  int dim = 0;
  for (const auto& f : factors) {
    f.validate();
    dim += f.dim();
  }
  spec.domain = DomainSpec{DomainShape::polydisk, dim};
  spec.factors = std::move(factors);
  return spec;
}

const char* family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::szego: return "szego";
    case KernelFamily::bergman: return "bergman";
    case KernelFamily::weighted_bergman: return "weighted_bergman";
    case KernelFamily::drury_arveson: return "drury_arveson";
    case KernelFamily::product: return "product";
  }
  return "?";
}

void KernelSpec::validate() const {
  domain.validate();
  switch (family) {
    case KernelFamily::szego:
      if (domain.dim != 1 || domain.shape != DomainShape::unit_disk)
        throw ParameterError("szego kernel lives on the unit disk (dim 1)");
      break;
    case KernelFamily::bergman:
      break;
    case KernelFamily::weighted_bergman:
      if (domain.dim != 1 || domain.shape != DomainShape::unit_disk)
        throw ParameterError("weighted_bergman kernel lives on the unit disk (dim 1)");
      if (alpha <= -1.0)
        throw ParameterError("weighted_bergman requires alpha > -1, got " + std::to_string(alpha));
      break;
    case KernelFamily::drury_arveson:
      if (domain.shape == DomainShape::polydisk)
        throw ParameterError("drury_arveson kernel lives on the unit ball");
      break;
    case KernelFamily::product: {
      if (factors.empty()) throw ParameterError("product kernel needs at least one factor");
      int dim = 0;
      for (const auto& f : factors) {
        f.validate();
        if (f.family == KernelFamily::product)
          throw ParameterError("nested product kernels are not supported");
        dim += f.dim();
      }
      if (dim != domain.dim || domain.shape != DomainShape::polydisk)
        throw ParameterError("product kernel domain must be the polydisk of its factors");
      break;
    }
  }
}

namespace {

Complex dot_zw(const Point& z, const Point& w) {
  Complex s = 0.0;
  for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

// (1 - s)^(-a) via the principal branch; Re(1-s) > 0 inside the domains here.
Complex inv_power(Complex s, double a) { return std::exp(-a * std::log(1.0 - s)); }

Complex eval_unchecked(const KernelSpec& spec, const Point& z, const Point& w) {
  const int n = spec.dim();
  switch (spec.family) {
    case KernelFamily::szego:
      return inv_power(z[0] * std::conj(w[0]), 1.0);
    case KernelFamily::bergman:
      if (spec.domain.shape == DomainShape::polydisk) {
        Complex k = 1.0;
        for (int i = 0; i < n; ++i) k *= inv_power(z[i] * std::conj(w[i]), 2.0);
        return k;
      }
      return inv_power(dot_zw(z, w), static_cast<double>(n) + 1.0);
    case KernelFamily::weighted_bergman:
      return inv_power(z[0] * std::conj(w[0]), spec.alpha + 2.0);
    case KernelFamily::drury_arveson:
      return inv_power(dot_zw(z, w), 1.0);
    case KernelFamily::product: {
      Complex k = 1.0;
      int off = 0;
      for (const auto& f : spec.factors) {
        Point zi, wi;
        zi.coords.assign(z.coords.begin() + off, z.coords.begin() + off + f.dim());
        wi.coords.assign(w.coords.begin() + off, w.coords.begin() + off + f.dim());
        k *= eval_unchecked(f, zi, wi);
        off += f.dim();
      }
      return k;
    }
  }
  throw InputError("unknown kernel family");
}

}  // namespace

Complex eval_kernel(const KernelSpec& spec, const Point& z, const Point& w, double margin) {
  spec.validate();
  require_inside(spec.domain, z, margin);
  require_inside(spec.domain, w, margin);
  return eval_unchecked(spec, z, w);
}

double gram_psd_check(const KernelSpec& spec, const std::vector<Point>& points, double margin) {
  spec.validate();
  if (points.empty()) throw InputError("gram_psd_check needs at least one point");
  const int k = static_cast<int>(points.size());
  for (const auto& p : points) require_inside(spec.domain, p, margin);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (points[i] == points[j])
        throw DegenerateError("duplicate point " + to_string(points[i]) +
                              " makes the strict PSD check meaningless");

  Eigen::MatrixXcd gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram(i, j) = eval_unchecked(spec, points[i], points[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace curvlab
