#include "curvlab/quotient.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "curvlab/util.hpp"

namespace curvlab {

void QuotientSpec::validate() const {
  kernel.validate();
  theta.validate_tall();
  if (theta.nvars != kernel.dim())
    throw InputError("multiplier nvars " + std::to_string(theta.nvars) +
                     " != kernel dimension " + std::to_string(kernel.dim()));
  if (psi) {
    psi->validate();
    if (psi->rows != theta.cols || psi->cols != theta.rows)
      throw InputError("psi must be cols x rows of theta");
  }
}

DomainSpec GridSpec::domain() const {
  switch (type) {
    case Type::disk: return {DomainShape::unit_disk, 1};
    case Type::ball: return {dim == 1 ? DomainShape::unit_disk : DomainShape::unit_ball, dim};
    case Type::polydisk: return {dim == 1 ? DomainShape::unit_disk : DomainShape::polydisk, dim};
    case Type::points: return {dim == 1 ? DomainShape::unit_disk : DomainShape::unit_ball, dim};
  }
  throw InputError("unknown grid type");
}

void GridSpec::validate() const {
  if (!(r_max > 0.0 && r_max < 1.0 - kDefaultMargin + 1e-12))
    throw InputError("grid r_max must lie in (0, 1 - margin]");
  switch (type) {
    case Type::disk:
      if (radial < 1 || angular < 1) throw InputError("disk grid needs radial, angular >= 1");
      break;
    case Type::ball:
    case Type::polydisk:
      if (dim < 1) throw InputError("grid dim must be >= 1");
      if (per_axis < 1) throw InputError("grid per_axis must be >= 1");
      if (std::pow(static_cast<double>(per_axis), dim) > 2e4)
        throw InputError("grid too large: per_axis^dim exceeds 20000 points");
      break;
    case Type::points:
      if (explicit_points.empty()) throw InputError("points grid must list points");
      for (const auto& p : explicit_points)
        if (p.dim() != dim) throw InputError("explicit point dimension mismatch");
      break;
  }
}

std::vector<Point> GridSpec::generate() const {
  validate();
  const DomainSpec dom = domain();
  std::vector<Point> pts;
  switch (type) {
    case Type::disk: {
      pts.emplace_back(Point{Complex{0.0, 0.0}});
      for (int i = 0; i < radial; ++i) {
        const double r = r_max * (i + 1) / radial;
        for (int j = 0; j < angular; ++j) {
          const double th = 2.0 * std::numbers::pi * j / angular;
          pts.emplace_back(Point{std::polar(r, th)});
        }
      }
      break;
    }
    case Type::ball:
    case Type::polydisk: {
      const double axis_scale =
          type == Type::ball ? r_max / std::sqrt(static_cast<double>(dim)) : r_max;
      std::vector<Complex> samples;
      for (int j = 0; j < per_axis; ++j) {
        const double rho = axis_scale * (j + 1) / per_axis;
        const double th = 2.0 * std::numbers::pi * j / per_axis;
        samples.push_back(std::polar(rho, th));
      }
      Point origin;
      origin.coords.assign(static_cast<size_t>(dim), Complex{0.0, 0.0});
      pts.push_back(origin);
      const long total = static_cast<long>(std::pow(static_cast<double>(per_axis), dim));
      for (long idx = 0; idx < total; ++idx) {
        Point p;
        p.coords.resize(static_cast<size_t>(dim));
        long rem = idx;
        for (int a = 0; a < dim; ++a) {
          p.coords[static_cast<size_t>(a)] = samples[static_cast<size_t>(rem % per_axis)];
          rem /= per_axis;
        }
        pts.push_back(std::move(p));
      }
      break;
    }
    case Type::points:
      pts = explicit_points;
      break;
  }
  for (const auto& p : pts) require_inside(dom, p, kDefaultMargin);
  return pts;
}

// ---------------------------------------------------------------------------

namespace {

MatrixField twisted_metric(const KernelSpec& kernel, const CokernelFrame& frame) {
  return [kernel, frame](const Point& w) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd f = frame.eval(w);
    const Complex k = eval_kernel(kernel, w, w);
    return k * (f.adjoint() * f).transpose();
  };
}

}  // namespace

CurvatureMatrix quotient_curvature(const QuotientSpec& spec, const Point& z,
                                   const DiffOptions& opts) {
  spec.validate();
  const CokernelFrame frame = cokernel_frame(spec.theta, z);
  return curvature_from_gram(twisted_metric(spec.kernel, frame), z, spec.kernel.domain, opts);
}

AdditivityResult verify_additivity(const QuotientSpec& spec, const std::vector<Point>& grid,
                                   GridErrorPolicy policy) {
  spec.validate();
  if (grid.empty()) throw InputError("verify_additivity needs a non-empty grid");
  const int n = spec.kernel.dim();
  const int m = spec.twist_rank();

  struct PointResult {
    double residual = -1.0;  // negative: skipped
    std::string error;
  };
  std::vector<PointResult> results(grid.size());

  auto run_point = [&](int idx) {
    const Point& z = grid[static_cast<size_t>(idx)];
    try {
      const CokernelFrame frame = cokernel_frame(spec.theta, z);
      const CurvatureMatrix k_quot =
          curvature_from_gram(twisted_metric(spec.kernel, frame), z, spec.kernel.domain);
      // Same differencing route as the quotient term, so the identity is not
      // polluted by comparing two different stencil noises.
      const CurvatureMatrix k_base = curvature_from_gram(
          [&](const Point& w) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd g(1, 1);
            g(0, 0) = eval_kernel(spec.kernel, w, w);
            return g;
          },
          z, spec.kernel.domain);
      const CurvatureMatrix k_twist = twist_curvature(frame, z);

      double res = 0.0;
      const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Eigen::MatrixXcd lhs =
              k_quot.block(i, j) - k_base.block(i, j)(0, 0) * eye - k_twist.block(i, j);
          res = std::max(res, lhs.cwiseAbs().maxCoeff());
        }
      results[static_cast<size_t>(idx)].residual = res;
    } catch (const ChartError& e) {
      results[static_cast<size_t>(idx)].error = e.what();
    } catch (const MetricDegeneracyError& e) {
      results[static_cast<size_t>(idx)].error = e.what();
    } catch (const DegenerateError& e) {
      results[static_cast<size_t>(idx)].error = e.what();
    }
  };
  parallel_for(static_cast<int>(grid.size()), run_point);

  AdditivityResult out;
  for (size_t idx = 0; idx < grid.size(); ++idx) {
    if (results[idx].residual < 0.0) {
      if (policy == GridErrorPolicy::abort)
        throw DegenerateError("additivity check failed at grid point " + to_string(grid[idx]) +
                              ": " + results[idx].error);
      ++out.points_skipped;
      continue;
    }
    ++out.points_used;
    if (results[idx].residual > out.max_residual) {
      out.max_residual = results[idx].residual;
      out.witness = grid[idx];
    }
  }
  if (out.points_used == 0) throw DegenerateError("all grid points failed");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Twist data for one symbol on a grid: the mixed log-Hessian of ||Delta||^2
// for the line case, otherwise the full twist curvature blocks. Flattened to
// doubles so cross-kernel runs can be compared bit-for-bit.
struct TwistData {
  std::vector<Eigen::MatrixXcd> per_point;  // n x n (line) or flattened blocks

  double max_abs_diff(const TwistData& other) const {
    double v = 0.0;
    for (size_t k = 0; k < per_point.size(); ++k)
      v = std::max(v, (per_point[k] - other.per_point[k]).cwiseAbs().maxCoeff());
    return v;
  }
  bool bitwise_equal(const TwistData& other) const {
    if (per_point.size() != other.per_point.size()) return false;
    for (size_t k = 0; k < per_point.size(); ++k) {
      const auto& a = per_point[k];
      const auto& b = other.per_point[k];
      if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
      if (std::memcmp(a.data(), b.data(),
                      sizeof(Complex) * static_cast<size_t>(a.size())) != 0)
        return false;
    }
    return true;
  }
};

Eigen::MatrixXcd flatten_blocks(const CurvatureMatrix& c) {
  Eigen::MatrixXcd out(c.n * c.m, c.n * c.m);
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j)
      out.block(i * c.m, j * c.m, c.m, c.m) = c.block(i, j);
  return out;
}

TwistData twist_data(const MatrixMultiplier& theta, const std::vector<Point>& grid) {
  theta.validate_tall();
  TwistData data;
  data.per_point.resize(grid.size());
  if (theta.rows == theta.cols + 1) {
    const DeltaFrame delta = delta_theta(theta);
    const PolyC herm = hermitian_norm_square(delta.components);
    parallel_for(static_cast<int>(grid.size()), [&](int k) {
      data.per_point[static_cast<size_t>(k)] =
          log_mixed_hessian(herm, grid[static_cast<size_t>(k)]);
    });
  } else {
    parallel_for(static_cast<int>(grid.size()), [&](int k) {
      const Point& z = grid[static_cast<size_t>(k)];
      data.per_point[static_cast<size_t>(k)] = flatten_blocks(twist_curvature(cokernel_frame(theta, z), z));
    });
  }
  return data;
}

}  // namespace

IsoVerdict iso_test(const MatrixMultiplier& theta1, const MatrixMultiplier& theta2,
                    const std::vector<Point>& grid, double tol) {
  theta1.validate_tall();
  theta2.validate_tall();
  if (grid.empty()) throw InputError("iso_test needs a non-empty grid");
  if (theta1.rows - theta1.cols != theta2.rows - theta2.cols)
    throw InputError("twist ranks differ; the quotients cannot be compared");
  if (theta1.nvars != theta2.nvars) throw InputError("variable counts differ");

  const TwistData d1 = twist_data(theta1, grid);
  const TwistData d2 = twist_data(theta2, grid);

  IsoVerdict verdict;
  verdict.tolerance = tol;
  verdict.witness = grid.front();
  for (size_t k = 0; k < grid.size(); ++k) {
    const double dev = (d1.per_point[k] - d2.per_point[k]).cwiseAbs().maxCoeff();
    if (dev > verdict.max_deviation) {
      verdict.max_deviation = dev;
      verdict.witness = grid[k];
    }
  }
  verdict.isomorphic = verdict.max_deviation <= tol;
  return verdict;
}

CrossKernelResult cross_kernel_check(const KernelSpec& kernel_a, const KernelSpec& kernel_b,
                                     const MatrixMultiplier& theta1,
                                     const MatrixMultiplier& theta2,
                                     const std::vector<Point>& grid, double tol) {
  kernel_a.validate();
  kernel_b.validate();
  if (grid.empty()) throw InputError("cross_kernel_check needs a non-empty grid");

  // Full-pipeline verdict under one building block: compare the quotient
  // curvatures themselves.
  auto curvature_gap = [&](const KernelSpec& kernel) {
    QuotientSpec s1{kernel, theta1, std::nullopt};
    QuotientSpec s2{kernel, theta2, std::nullopt};
    std::vector<double> gap(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int k) {
      const Point& z = grid[static_cast<size_t>(k)];
      gap[static_cast<size_t>(k)] =
          quotient_curvature(s1, z).max_abs_diff(quotient_curvature(s2, z));
    });
    double v = 0.0;
    for (double g : gap) v = std::max(v, g);
    return v;
  };

  CrossKernelResult out;
  out.curvature_gap_a = curvature_gap(kernel_a);
  out.curvature_gap_b = curvature_gap(kernel_b);
  out.verdict_a = iso_test(theta1, theta2, grid, tol);
  out.verdict_b = iso_test(theta1, theta2, grid, tol);

  // The twist computation consumes no kernel; running it once per kernel
  // context must produce identical bytes.
  const TwistData t1_a = twist_data(theta1, grid);
  const TwistData t2_a = twist_data(theta2, grid);
  const TwistData t1_b = twist_data(theta1, grid);
  const TwistData t2_b = twist_data(theta2, grid);
  out.twist_bitwise_identical = t1_a.bitwise_equal(t1_b) && t2_a.bitwise_equal(t2_b);

  const bool verdicts_agree = out.verdict_a.isomorphic == out.verdict_b.isomorphic;
  const bool gaps_agree = (out.curvature_gap_a <= tol) == (out.curvature_gap_b <= tol) &&
                          (out.curvature_gap_a <= tol) == out.verdict_a.isomorphic;
  out.consistent = verdicts_agree && gaps_agree && out.twist_bitwise_identical;
  return out;
}

}  // namespace curvlab
