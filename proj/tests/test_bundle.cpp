#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "curvlab/bundle.hpp"
#include "test_helpers.hpp"

using namespace curvlab;
using namespace curvlab::testing;

namespace {

PolyC random_poly(int degree, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> coeffs;
  for (int k = 0; k <= degree; ++k) coeffs.emplace_back(u(rng), u(rng));
  return PolyC::from_coeffs(coeffs);
}

}  // namespace

TEST_CASE("delta_theta cofactor expansion") {
  SUBCASE("generic 2x1 symbol gives (theta2, -theta1)") {
    std::mt19937 rng(3);
    const PolyC t1 = random_poly(2, rng), t2 = random_poly(3, rng);
    const auto delta = delta_theta(MatrixMultiplier::column({t1, t2}));
    CHECK((delta.components[0] - t2).max_coeff() < 1e-15);
    CHECK((delta.components[1] + t1).max_coeff() < 1e-15);
  }
  SUBCASE("[[1],[z]] gives (z, -1)") {
    const auto delta = delta_theta(theta_1_z());
    CHECK((delta.components[0] - pz()).max_coeff() < 1e-15);
    CHECK((delta.components[1] + pc(1.0)).max_coeff() < 1e-15);
  }
  SUBCASE("[[1],[0]] gives (0, -1)") {
    const auto delta = delta_theta(theta_1_0());
    CHECK(delta.components[0].is_zero());
    CHECK((delta.components[1] + pc(1.0)).max_coeff() < 1e-15);
  }
  SUBCASE("orthogonality Delta^T Theta = 0 for a random 3x2 symbol") {
    std::mt19937 rng(17);
    auto theta = MatrixMultiplier::zero(3, 2, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) theta.at(i, j) = random_poly(2, rng);
    const auto delta = delta_theta(theta);
    for (int c = 0; c < 2; ++c) {
      PolyC acc(1);
      for (int r = 0; r < 3; ++r) acc += delta.components[static_cast<size_t>(r)] * theta.at(r, c);
      CHECK(acc.max_coeff() <= 1e-12 * std::max(1.0, theta.max_coeff()));
    }
  }
  SUBCASE("shape error unless q = p+1") {
    auto wide = MatrixMultiplier::zero(4, 2, 1);
    wide.at(0, 0) = pc(1.0);
    wide.at(1, 1) = pc(1.0);
    wide.at(2, 0) = pz();
    wide.at(3, 1) = pz();
    CHECK_THROWS_AS(delta_theta(wide), InputError);
  }
}

TEST_CASE("cokernel frames") {
  SUBCASE("q = p+1 frame is parallel to Delta") {
    const auto frame = cokernel_frame(theta_1_z(), Point{Complex{0.0, 0.0}});
    const auto delta = delta_theta(theta_1_z());
    for (const Complex zv : {Complex{0.3, 0.1}, Complex{-0.2, 0.4}, Complex{0.0, 0.0}}) {
      const Point z{zv};
      const Eigen::VectorXcd f = frame.eval(z).col(0);
      const Eigen::VectorXcd d = delta.eval(z);
      // Cross product of the normalized vectors vanishes when parallel.
      const Complex cross = f(0) * d(1) - f(1) * d(0);
      CHECK(std::abs(cross) / (f.norm() * d.norm()) <= 1e-8);
    }
  }

  SUBCASE("p=2, q=3 pattern solves theta^T v = 0 with the hand Cramer column") {
    const auto frame = cokernel_frame(theta_p2q3(), Point{Complex{0.0, 0.0}});
    CHECK(frame.pivot_rows == std::vector<int>{0, 1});
    // Hand solution: (z, z^2, -1) up to the pivot determinant (= 1 here).
    CHECK((frame.columns.at(0, 0) - pz()).max_coeff() < 1e-14);
    CHECK((frame.columns.at(1, 0) - pz() * pz()).max_coeff() < 1e-14);
    CHECK((frame.columns.at(2, 0) + pc(1.0)).max_coeff() < 1e-14);
  }

  SUBCASE("4x2 symbol: two columns spanning the nullspace of Theta(z)^T") {
    auto theta = MatrixMultiplier::zero(4, 2, 1);
    theta.at(0, 0) = pc(1.0);
    theta.at(1, 1) = pc(1.0);
    theta.at(2, 0) = pz();
    theta.at(2, 1) = pz() * pz();
    theta.at(3, 0) = pc(1.0) - pz();
    theta.at(3, 1) = pz();
    const auto frame = cokernel_frame(theta, Point{Complex{0.1, 0.0}});
    CHECK(frame.rank() == 2);
    for (const Complex zv : {Complex{0.1, 0.0}, Complex{0.25, -0.3}, Complex{-0.4, 0.2}}) {
      const Point z{zv};
      const Eigen::MatrixXcd f = frame.eval(z);
      const Eigen::MatrixXcd tz = eval_multiplier(theta, z);
      CHECK((tz.transpose() * f).cwiseAbs().maxCoeff() < 1e-12);
      // Compare spans against the brute-force SVD nullspace of Theta(z)^T.
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(tz.transpose()),
                                             Eigen::ComputeFullV);
      const Eigen::MatrixXcd null_basis = svd.matrixV().rightCols(2);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(f);
      const Eigen::MatrixXcd fq =
          Eigen::MatrixXcd(qr.householderQ()) * Eigen::MatrixXcd::Identity(4, 2);
      Eigen::JacobiSVD<Eigen::MatrixXcd> overlap(null_basis.adjoint() * fq);
      CHECK(overlap.singularValues().minCoeff() > 1.0 - 1e-10);  // spans coincide
    }
  }

  SUBCASE("singular point is rejected") {
    CHECK_THROWS_AS(cokernel_frame(theta_z_z2(), Point{Complex{0.0, 0.0}}), DegenerateError);
  }

  SUBCASE("chart boundary is enforced") {
    // Pivot at z0 = 0.9 is the first row with det = z; chart needs |z| >= 0.09.
    const auto frame = cokernel_frame(theta_z_1mz(), Point{Complex{0.9, 0.0}});
    CHECK(frame.in_chart(Point{Complex{0.5, 0.0}}));
    CHECK_FALSE(frame.in_chart(Point{Complex{0.05, 0.0}}));
    CHECK_THROWS_AS(frame.eval(Point{Complex{0.05, 0.0}}), ChartError);
  }
}

TEST_CASE("gram function closed forms") {
  const auto szego = KernelSpec::szego();

  SUBCASE("szego twisted by [[1],[z]]: (1 + z wbar)/(1 - z wbar)") {
    const auto gram = gram_function(szego, delta_theta(theta_1_z()));
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int t = 0; t < 10; ++t) {
      const Complex z{u(rng), u(rng)}, w{u(rng), u(rng)};
      const Complex zw = z * std::conj(w);
      const Complex expected = (1.0 + zw) / (1.0 - zw);
      CHECK(std::abs(gram.eval(Point{z}, Point{w})(0, 0) - expected) <=
            1e-12 * std::abs(expected));
    }
    CHECK(std::abs(gram.eval(Point{Complex{0, 0}}, Point{Complex{0, 0}})(0, 0) - 1.0) < 1e-14);
  }

  SUBCASE("constant-unit frame reproduces the kernel") {
    const auto gram = gram_function(szego, delta_theta(theta_1_0()));
    const Point z{Complex{0.3, 0.2}}, w{Complex{-0.1, 0.4}};
    CHECK(std::abs(gram.eval(z, w)(0, 0) - eval_kernel(szego, z, w)) < 1e-14);
  }

  SUBCASE("hermitian property of the two-variable kernel") {
    const auto gram = gram_function(szego, cokernel_frame(theta_p2q3(), Point{Complex{0, 0}}));
    const Point z{Complex{0.3, 0.2}}, w{Complex{-0.1, 0.4}};
    const Eigen::MatrixXcd a = gram.eval(z, w);
    const Eigen::MatrixXcd b = gram.eval(w, z);
    CHECK((a - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram.eval(z, z));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("curvature from metric maps") {
  const DomainSpec disk{DomainShape::unit_disk, 1};

  SUBCASE("constant metric has zero curvature") {
    MatrixField metric = [](const Point&) {
      Eigen::MatrixXcd g(2, 2);
      g << 2.0, Complex{0.3, 0.1}, Complex{0.3, -0.1}, 1.5;
      return g;
    };
    const auto c = curvature_from_gram(metric, Point{Complex{0.2, 0.1}}, disk);
    CHECK(c.max_abs() < 1e-9);
  }

  SUBCASE("szego metric matches the analytic curvature") {
    MatrixField metric = [](const Point& u) {
      Eigen::MatrixXcd g(1, 1);
      g(0, 0) = 1.0 / (1.0 - u[0] * std::conj(u[0]));
      return g;
    };
    const Point z{Complex{0.3, 0.0}};
    const double expected = -1.0 / std::pow(1.0 - 0.09, 2.0);
    const auto c = curvature_from_gram(metric, z, disk);
    CHECK(std::abs(c.block(0, 0)(0, 0) - expected) <= 1e-6 * std::abs(expected));
  }

  SUBCASE("drury-arveson metric at the origin has curvature -I") {
    const DomainSpec ball{DomainShape::unit_ball, 2};
    MatrixField metric = [](const Point& u) {
      Eigen::MatrixXcd g(1, 1);
      g(0, 0) = 1.0 / (1.0 - std::norm(u[0]) - std::norm(u[1]));
      return g;
    };
    const auto c = curvature_from_gram(metric, Point{Complex{0, 0}, Complex{0, 0}}, ball);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Complex expected = i == j ? Complex{-1.0, 0.0} : Complex{0.0, 0.0};
        CHECK(std::abs(c.block(i, j)(0, 0) - expected) < 1e-6);
      }
  }

  SUBCASE("numerically singular metric is rejected") {
    MatrixField metric = [](const Point& u) {
      Eigen::MatrixXcd g(1, 1);
      g(0, 0) = u[0] * std::conj(u[0]);  // vanishes at 0
      return g;
    };
    CHECK_THROWS_AS(curvature_from_gram(metric, Point{Complex{0.0, 0.0}}, disk),
                    MetricDegeneracyError);
  }
}

TEST_CASE("line curvature") {
  const DomainSpec disk{DomainShape::unit_disk, 1};

  SUBCASE("constant metric") {
    const auto c =
        line_curvature([](const Point&) { return 3.7; }, Point{Complex{0.1, 0.2}}, disk);
    CHECK(c.max_abs() < 1e-9);
  }
  SUBCASE("twist metric 1 + |z|^2") {
    const auto g = [](const Point& u) { return 1.0 + std::norm(u[0]); };
    const auto c0 = line_curvature(g, Point{Complex{0.0, 0.0}}, disk);
    CHECK(std::abs(c0.block(0, 0)(0, 0) + 1.0) < 1e-7);
    const Point z{Complex{0.4, -0.3}};
    const double expected = -1.0 / std::pow(1.0 + std::norm(z[0]), 2.0);
    const auto cz = line_curvature(g, z, disk);
    CHECK(std::abs(cz.block(0, 0)(0, 0) - expected) <= 1e-6 * std::abs(expected));
  }
  SUBCASE("weighted bergman alpha = 1 at the origin") {
    const auto g = [](const Point& u) { return std::pow(1.0 - std::norm(u[0]), -3.0); };
    const auto c = line_curvature(g, Point{Complex{0.0, 0.0}}, disk);
    CHECK(std::abs(c.block(0, 0)(0, 0) + 3.0) < 1e-6);
  }
  SUBCASE("non-positive metric rejected") {
    CHECK_THROWS_AS(line_curvature([](const Point& u) { return std::norm(u[0]) - 0.5; },
                                   Point{Complex{0.1, 0.0}}, disk),
                    DomainError);
  }
}

TEST_CASE("path equivalence: matrix and line code paths agree for m = 1") {
  const DomainSpec disk{DomainShape::unit_disk, 1};
  const std::vector<std::function<double(const Point&)>> metrics = {
      [](const Point& u) { return 1.0 / (1.0 - std::norm(u[0])); },
      [](const Point& u) { return std::pow(1.0 - std::norm(u[0]), -2.0); },
      [](const Point& u) { return 1.0 + std::norm(u[0]); },
      [](const Point& u) { return std::exp(std::norm(u[0])); },
      [](const Point& u) { return (1.0 + std::norm(u[0])) / (1.0 - std::norm(u[0])); },
  };
  const std::vector<Point> pts = {Point{Complex{0.0, 0.0}}, Point{Complex{0.35, 0.2}},
                                  Point{Complex{-0.5, 0.4}}, Point{Complex{0.7, -0.1}}};
  for (const auto& g : metrics) {
    MatrixField as_matrix = [&g](const Point& u) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = g(u);
      return m;
    };
    for (const auto& z : pts) {
      const auto a = curvature_from_gram(as_matrix, z, disk);
      const auto b = line_curvature(g, z, disk);
      const double scale = std::max(1.0, a.max_abs());
      CHECK(a.max_abs_diff(b) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("hermitian pairing for a rank-2 metric") {
  const DomainSpec disk{DomainShape::unit_disk, 1};
  MatrixField metric = [](const Point& u) {
    const Complex z = u[0];
    Eigen::MatrixXcd g(2, 2);
    g << 1.0 + std::norm(z), z, std::conj(z), 2.0;
    return g;
  };
  const auto c = curvature_from_gram(metric, Point{Complex{0.3, -0.2}}, disk);
  CHECK(c.hermitian_defect() <= 1e-6 * (1.0 + c.max_abs()));
}

TEST_CASE("exact twist curvature") {
  SUBCASE("agrees with the numeric path on the delta frame of [[1],[z]]") {
    const auto delta = delta_theta(theta_1_z());
    const DomainSpec disk{DomainShape::unit_disk, 1};
    MatrixField gf = [&delta](const Point& u) {
      Eigen::MatrixXcd g(1, 1);
      g(0, 0) = delta.eval(u).squaredNorm();
      return g;
    };
    for (const Complex zv : {Complex{0.0, 0.0}, Complex{0.4, 0.25}, Complex{-0.3, 0.5}}) {
      const Point z{zv};
      const auto exact = twist_curvature(delta, z);
      const auto numeric = curvature_from_gram(gf, z, disk);
      CHECK(exact.max_abs_diff(numeric) <= 1e-6 * std::max(1.0, exact.max_abs()));
    }
  }

  SUBCASE("delta and cokernel routes coincide for q = p+1") {
    const Point z{Complex{0.2, -0.3}};
    const auto a = twist_curvature(delta_theta(theta_p2q3()), z);
    const auto b = twist_curvature(cokernel_frame(theta_p2q3(), z), z);
    CHECK(a.max_abs_diff(b) <= 1e-10);
  }

  SUBCASE("twist metric of [[1],[z]] has curvature -1/(1+|z|^2)^2") {
    const auto delta = delta_theta(theta_1_z());
    for (const Complex zv : {Complex{0.0, 0.0}, Complex{0.5, 0.2}}) {
      const auto c = twist_curvature(delta, Point{zv});
      const double expected = -1.0 / std::pow(1.0 + std::norm(zv), 2.0);
      CHECK(std::abs(c.block(0, 0)(0, 0) - expected) <= 1e-12);
    }
  }

  SUBCASE("log_mixed_hessian flags rank drops") {
    const auto delta = delta_theta(theta_z_z2());  // Delta = (z^2, -z) vanishes at 0
    CHECK_THROWS_AS(
        log_mixed_hessian(hermitian_norm_square(delta.components), Point{Complex{0.0, 0.0}}),
        DegenerateError);
  }
}

TEST_CASE("gauge and unitary invariance of the twist curvature") {
  const Point z{Complex{0.3, 0.15}};

  SUBCASE("right gauge theta * A") {
    const auto theta = theta_p2q3();
    Eigen::MatrixXcd a(2, 2);
    a << Complex{1.2, 0.3}, Complex{0.4, -0.2}, Complex{-0.1, 0.5}, Complex{0.9, 0.0};
    const auto base = twist_curvature(cokernel_frame(theta, z), z);
    const auto gauged = twist_curvature(cokernel_frame(theta.right_mul(a), z), z);
    CHECK(base.max_abs_diff(gauged) <= 1e-6 * std::max(1.0, base.max_abs()));
  }

  SUBCASE("left unitary U * theta") {
    const auto theta = theta_1_z();
    Eigen::MatrixXcd q(2, 2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    q << Complex{c, 0.0}, Complex{0.0, s}, Complex{0.0, s}, Complex{c, 0.0};
    const auto base = twist_curvature(delta_theta(theta), z);
    const auto rotated = twist_curvature(delta_theta(theta.left_mul(q)), z);
    CHECK(base.max_abs_diff(rotated) <= 1e-6 * std::max(1.0, base.max_abs()));
  }
}
