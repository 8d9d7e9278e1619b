#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode surfaced by the library is a subclass of
// Error, so callers (CLI, tests) can distinguish bad input from numerical
// degeneracy without string matching.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A point violates the domain-membership or margin requirement.
struct DomainError : Error {
  using Error::Error;
};

/// An invalid parameter value (e.g. a weight out of range).
struct ParameterError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input (shapes, empty grids, bad schema).
struct InputError : Error {
  using Error::Error;
};

/// A finite-difference stencil would leave the admissible region.
struct StepSizeError : Error {
  using Error::Error;
};

/// Input is degenerate for the requested check (duplicate points, vanishing
/// frame vector, rank drop).
struct DegenerateError : Error {
  using Error::Error;
};

/// Evaluation requested outside the chart where a frame is valid.
struct ChartError : Error {
  using Error::Error;
};

/// A metric (Gram) matrix is numerically singular.
struct MetricDegeneracyError : Error {
  using Error::Error;
};

/// The polynomial pair has a common factor; no Bezout left inverse exists.
struct NoLeftInverseError : Error {
  using Error::Error;
};

/// Requested functionality outside the supported envelope.
struct UnsupportedError : Error {
  using Error::Error;
};

/// A supplied certificate (e.g. left inverse) fails verification.
struct CertificateError : Error {
  using Error::Error;
};

/// A direct-sum decomposition collapsed (principal angle below floor).
struct DecompositionError : Error {
  using Error::Error;
};

/// A numerical rank decision fell inside the ambiguity band.
struct IndeterminateRankError : Error {
  using Error::Error;
};

/// Arithmetic blow-up or violated numerical post-condition.
struct NumericalError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domains and points
// ---------------------------------------------------------------------------

enum class DomainShape { unit_disk, unit_ball, polydisk };

struct DomainSpec {
  DomainShape shape = DomainShape::unit_disk;
  int dim = 1;

  void validate() const;
  bool operator==(const DomainSpec&) const = default;
};

/// Default boundary margin delta: points closer to the boundary are rejected.
inline constexpr double kDefaultMargin = 0.05;

/// A point of C^n, strictly inside the domain it is used with.
struct Point {
  std::vector<Complex> coords;

  Point() = default;
  explicit Point(std::vector<Complex> c) : coords(std::move(c)) {}
  Point(std::initializer_list<Complex> c) : coords(c) {}
  /// One-variable convenience.
  static Point scalar(Complex z) { return Point{z}; }

  int dim() const { return static_cast<int>(coords.size()); }
  const Complex& operator[](int i) const { return coords[static_cast<size_t>(i)]; }
  Complex& operator[](int i) { return coords[static_cast<size_t>(i)]; }

  /// Euclidean norm of the coordinate vector.
  double norm() const;
  bool operator==(const Point&) const = default;
};

std::string to_string(const Point& z);

/// Distance from z to the boundary of the domain (min over polydisk factors,
/// 1 - |z| for disk/ball). Negative outside.
double boundary_distance(const DomainSpec& domain, const Point& z);

/// Throws DomainError unless z lies inside with at least the given margin.
void require_inside(const DomainSpec& domain, const Point& z, double margin = kDefaultMargin);

}  // namespace curvlab
