#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "curvlab/multiplier.hpp"
#include "test_helpers.hpp"

using namespace curvlab;
using namespace curvlab::testing;

TEST_CASE("polynomial arithmetic and Horner evaluation") {
  const PolyC p = pz() * pz() - pc(2.0) * pz() + pc(1.0);  // (z-1)^2
  CHECK(std::abs(p.eval1(Complex{3.0, 0.0}) - 4.0) < 1e-14);
  CHECK(std::abs(p.eval1(Complex{1.0, 0.0})) < 1e-14);
  CHECK(p.degree() == 2);

  // Two variables: z1^2 z2 + 3 z2^2 evaluated against direct powers.
  PolyC q = PolyC::monomial(2, {2, 1}, 1.0) + PolyC::monomial(2, {0, 2}, 3.0);
  const Complex z1{0.3, 0.2}, z2{-0.4, 0.1};
  const Complex direct = z1 * z1 * z2 + 3.0 * z2 * z2;
  CHECK(std::abs(q.eval(Point{z1, z2}) - direct) < 1e-14);

  // Sparse exponents exercise the per-variable Horner gaps.
  PolyC s = PolyC::monomial(1, {7}, 2.0) + PolyC::monomial(1, {3}, -1.0) +
            PolyC::monomial(1, {0}, 5.0);
  const Complex z{0.7, -0.3};
  const Complex expected = 2.0 * std::pow(z, 7) - std::pow(z, 3) + 5.0;
  CHECK(std::abs(s.eval1(z) - expected) < 1e-13);
}

TEST_CASE("eval_multiplier examples") {
  const auto t1 = theta_1_z();
  Eigen::MatrixXcd at0 = eval_multiplier(t1, Point{Complex{0.0, 0.0}});
  CHECK(at0(0, 0) == Complex{1.0, 0.0});
  CHECK(at0(1, 0) == Complex{0.0, 0.0});
  Eigen::MatrixXcd at_half = eval_multiplier(t1, Point{Complex{0.5, 0.0}});
  CHECK(at_half(1, 0) == Complex{0.5, 0.0});

  Eigen::MatrixXcd v = eval_multiplier(theta_z_1mz(), Point{Complex{0.25, 0.0}});
  CHECK(std::abs(v(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(v(1, 0) - 0.75) < 1e-15);
}

TEST_CASE("corona bound") {
  const auto grid = coarse_disk_grid();  // contains the origin

  SUBCASE("[[1],[z]] attains 1 at the origin") {
    CHECK(corona_bound(theta_1_z(), grid) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("[[z],[1-z]] approaches 1/sqrt(2) near z = 1/2") {
    GridSpec dense;
    dense.type = GridSpec::Type::disk;
    dense.r_max = 0.94;
    dense.radial = 60;
    dense.angular = 120;
    const auto pts = dense.generate();
    const double bound = corona_bound(theta_z_1mz(), pts);
    // Brute-force oracle over the same grid.
    double oracle = 1e300;
    for (const auto& z : pts) {
      const Complex c = z[0];
      oracle = std::min(oracle, std::sqrt(std::norm(c) + std::norm(1.0 - c)));
    }
    CHECK(bound == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(bound - 1.0 / std::sqrt(2.0)) < 1e-3);
  }

  SUBCASE("common zero kills the bound") {
    CHECK(corona_bound(theta_z_z2(), grid) == doctest::Approx(0.0));
  }

  SUBCASE("grid refinement never increases the bound") {
    const auto coarse = coarse_disk_grid(0.8, 4, 8);
    const auto fine = coarse_disk_grid(0.8, 8, 16);
    CHECK(corona_bound(theta_z_1mz(), fine) <= corona_bound(theta_z_1mz(), coarse) + 1e-15);
  }

  SUBCASE("empty grid rejected") {
    CHECK_THROWS_AS(corona_bound(theta_1_z(), {}), InputError);
  }

  SUBCASE("gauge covariance for p = 2") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto theta = theta_p2q3();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXcd a(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = Complex{u(rng), u(rng)};
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
      const double smin = svd.singularValues().minCoeff();
      if (smin < 0.05) continue;
      const double lhs = corona_bound(theta.right_mul(a), grid);
      const double rhs = corona_bound(theta, grid) * smin;
      CHECK(lhs >= rhs - 1e-12);
    }
  }
}

TEST_CASE("bezout left inverse") {
  SUBCASE("z and 1-z") {
    const auto [psi1, psi2] = bezout_left_inverse(pz(), pc(1.0) - pz());
    CHECK((psi1 - pc(1.0)).max_coeff() < 1e-14);
    CHECK((psi2 - pc(1.0)).max_coeff() < 1e-14);
  }
  SUBCASE("unit first argument") {
    const auto [psi1, psi2] = bezout_left_inverse(pc(1.0), pz());
    CHECK((psi1 - pc(1.0)).max_coeff() < 1e-14);
    CHECK(psi2.is_zero());
  }
  SUBCASE("non-coprime pair rejected") {
    CHECK_THROWS_AS(bezout_left_inverse(pz(), pz() * pz()), NoLeftInverseError);
  }
  SUBCASE("multivariate rejected") {
    CHECK_THROWS_AS(bezout_left_inverse(PolyC::variable(2, 0), PolyC::variable(2, 1)),
                    UnsupportedError);
  }
  SUBCASE("random coprime pairs satisfy the identity at coefficient level") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      // (z - a)(z - b) and (z - c)(z - d) with distinct roots are coprime.
      const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
      const Complex c{u(rng) + 2.0, u(rng)}, d{u(rng) - 2.0, u(rng)};
      const PolyC t1 = (pz() - pc(a)) * (pz() - pc(b));
      const PolyC t2 = (pz() - pc(c)) * (pz() - pc(d));
      const auto [psi1, psi2] = bezout_left_inverse(t1, t2);
      const PolyC residual = t1 * psi1 + t2 * psi2 - pc(1.0);
      CHECK(residual.max_coeff() <= 1e-10);
    }
  }
}

TEST_CASE("verify_left_inverse") {
  const auto grid = coarse_disk_grid();

  SUBCASE("exact certificates") {
    auto cert = verify_left_inverse(theta_z_1mz(), MatrixMultiplier::row({pc(1.0), pc(1.0)}), grid);
    CHECK(cert.residual <= 1e-12);
    cert = verify_left_inverse(theta_1_z(), MatrixMultiplier::row({pc(1.0), pc(0.0)}), grid);
    CHECK(cert.residual <= 1e-12);
    CHECK(cert.sup_psi_norm == doctest::Approx(1.0));
  }

  SUBCASE("wrong inverse has the predicted residual") {
    const auto cert =
        verify_left_inverse(theta_1_z(), MatrixMultiplier::row({pc(0.0), pc(1.0)}), grid);
    double oracle = 0.0;
    for (const auto& z : grid) oracle = std::max(oracle, std::abs(z[0] - 1.0));
    CHECK(cert.residual == doctest::Approx(oracle).epsilon(1e-12));
  }

  SUBCASE("rank at certified points") {
    // Wherever a valid certificate exists, Theta(z) has full column rank.
    const auto cert =
        verify_left_inverse(theta_z_1mz(), MatrixMultiplier::row({pc(1.0), pc(1.0)}), grid);
    REQUIRE(cert.valid(1e-10));
    for (const auto& z : cert.grid) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_multiplier(theta_z_1mz(), z));
      CHECK(svd.singularValues().minCoeff() > 0.0);
    }
  }

  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(
        verify_left_inverse(theta_1_z(), MatrixMultiplier::row({pc(1.0)}), grid), InputError);
  }
}

TEST_CASE("polynomial division floor") {
  // Remainder coefficients at the floor are flushed, keeping the Euclid chain honest.
  const PolyC a = (pz() - pc(0.5)) * (pz() - pc(0.25));
  const auto dm = poly_divmod(a, pz() - pc(0.5));
  CHECK(dm.remainder.is_zero());
  CHECK((dm.quotient - (pz() - pc(0.25))).max_coeff() < 1e-13);
}
