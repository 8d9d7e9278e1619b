#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvlab/similarity.hpp"
#include "curvlab/wirtinger.hpp"
#include "test_helpers.hpp"

using namespace curvlab;
using namespace curvlab::testing;

namespace {

MatrixMultiplier psi_row(Complex a, Complex b) {
  return MatrixMultiplier::row({pc(a), pc(b)});
}

}  // namespace

TEST_CASE("build_idempotent") {
  SUBCASE("[[z],[1-z]] with Psi=[[1,1]] gives the textbook Q") {
    const auto idem = build_idempotent(theta_z_1mz(), psi_row(1.0, 1.0));
    CHECK(idem.rank == 1);
    CHECK(idem.coeff_residual <= 1e-12);
    // Q = [[1-z, -z], [-(1-z), z]]
    CHECK((idem.q_symbol.at(0, 0) - (pc(1.0) - pz())).max_coeff() < 1e-14);
    CHECK((idem.q_symbol.at(0, 1) + pz()).max_coeff() < 1e-14);
    CHECK((idem.q_symbol.at(1, 0) + (pc(1.0) - pz())).max_coeff() < 1e-14);
    CHECK((idem.q_symbol.at(1, 1) - pz()).max_coeff() < 1e-14);
  }
  SUBCASE("constant projection for [[1],[0]]") {
    const auto idem = build_idempotent(theta_1_0(), psi_row(1.0, 0.0));
    CHECK(idem.q_symbol.at(0, 0).is_zero());
    CHECK(idem.q_symbol.at(0, 1).is_zero());
    CHECK(idem.q_symbol.at(1, 0).is_zero());
    CHECK((idem.q_symbol.at(1, 1) - pc(1.0)).max_coeff() < 1e-15);
  }
  SUBCASE("[[1],[z]] with Psi=[[1,0]]") {
    const auto idem = build_idempotent(theta_1_z(), psi_row(1.0, 0.0));
    CHECK((idem.q_symbol.at(1, 0) + pz()).max_coeff() < 1e-14);
    CHECK((idem.q_symbol.at(1, 1) - pc(1.0)).max_coeff() < 1e-14);
    CHECK(idem.coeff_residual <= 1e-12);
  }
  SUBCASE("certificate failure when Psi Theta != I") {
    CHECK_THROWS_AS(build_idempotent(theta_1_z(), psi_row(0.0, 1.0)), CertificateError);
  }
}

TEST_CASE("splitting angles") {
  const auto grid = coarse_disk_grid();

  SUBCASE("orthogonal complement: right angle, condition one") {
    const auto idem = build_idempotent(theta_1_0(), psi_row(1.0, 0.0));
    const auto s = splitting_angle(theta_1_0(), idem, grid);
    CHECK(s.min_angle == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
    CHECK(s.max_condition == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("[[z],[1-z]] regression baseline") {
    const auto idem = build_idempotent(theta_z_1mz(), psi_row(1.0, 1.0));
    const auto s = splitting_angle(theta_z_1mz(), idem, grid);
    CHECK(s.min_angle == doctest::Approx(0.36717383381822).epsilon(1e-9));
    CHECK(s.max_condition == doctest::Approx(5.38567765543682).epsilon(1e-9));
  }
  SUBCASE("[[1],[z]] stays away from collapse") {
    const auto idem = build_idempotent(theta_1_z(), psi_row(1.0, 0.0));
    const auto s = splitting_angle(theta_1_z(), idem, grid);
    CHECK(s.min_angle > 0.5);
    CHECK(s.max_condition < 3.0);
  }
  SUBCASE("no kernel is consumed: repeated runs are bit-identical") {
    const auto idem = build_idempotent(theta_z_1mz(), psi_row(1.0, 1.0));
    const auto s1 = splitting_angle(theta_z_1mz(), idem, grid);
    const auto s2 = splitting_angle(theta_z_1mz(), idem, grid);
    CHECK(s1.min_angle == s2.min_angle);
    CHECK(s1.max_condition == s2.max_condition);
  }
}

TEST_CASE("hs_projection_derivative") {
  SUBCASE("unquotiented szego bundle: 1/(1-|z|^2)^2") {
    const auto gram = gram_function(KernelSpec::szego(), delta_theta(theta_1_0()));
    CHECK(std::abs(hs_projection_derivative(gram, Point{Complex{0.0, 0.0}}) - 1.0) <= 1e-8);
    for (const Complex zv : {Complex{0.3, 0.0}, Complex{-0.2, 0.4}, Complex{0.5, 0.5}}) {
      const double expected = 1.0 / std::pow(1.0 - std::norm(zv), 2.0);
      CHECK(std::abs(hs_projection_derivative(gram, Point{zv}) - expected) <= 1e-8 * expected);
    }
  }
  SUBCASE("constant frame: zero") {
    GramFunction constant;
    constant.rank = 1;
    constant.eval = [](const Point&, const Point&) {
      Eigen::MatrixXcd g(1, 1);
      g(0, 0) = 2.5;
      return g;
    };
    CHECK(hs_projection_derivative(constant, Point{Complex{0.2, 0.1}}) <= 1e-12);
  }
  SUBCASE("szego twisted by [[1],[z]] at the origin: 1 + 1") {
    const auto gram = gram_function(KernelSpec::szego(), delta_theta(theta_1_z()));
    CHECK(std::abs(hs_projection_derivative(gram, Point{Complex{0.0, 0.0}}) - 2.0) <= 1e-8);
  }
  SUBCASE("rank-1 identity: agrees with the mixed log derivative of the metric") {
    const std::vector<MatrixMultiplier> thetas = {theta_1_z(), theta_z_1mz(), theta_p2q3()};
    const DomainSpec disk{DomainShape::unit_disk, 1};
    for (const auto& theta : thetas) {
      const auto frame = cokernel_frame(theta, Point{Complex{0.1, 0.1}});
      const auto gram = gram_function(KernelSpec::szego(), frame);
      for (const Complex zv : {Complex{0.1, 0.1}, Complex{0.3, -0.2}, Complex{0.45, 0.3}}) {
        const Point z{zv};
        const double hs = hs_projection_derivative(gram, z);
        ScalarField logg = [&gram](const Point& u) {
          return std::log(gram.eval(u, u)(0, 0));
        };
        DiffOptions opts;
        opts.domain = &disk;
        const Complex oracle =
            wirtinger_derivative(logg, z, WirtingerOrder::d_dbar(1, 0, 0), opts);
        CHECK(std::abs(hs - oracle.real()) <= 1e-6 * std::max(1.0, hs));
      }
    }
  }
  SUBCASE("metric log-additivity of the twisted bundle") {
    // hs(twisted) = szego term + twist term, each computed independently.
    const auto twisted = gram_function(KernelSpec::szego(), delta_theta(theta_1_z()));
    const auto base = gram_function(KernelSpec::szego(), delta_theta(theta_1_0()));
    const auto delta = delta_theta(theta_1_z());
    for (const Complex zv : {Complex{0.0, 0.0}, Complex{0.4, 0.1}, Complex{-0.3, 0.35}}) {
      const Point z{zv};
      const double lhs = hs_projection_derivative(twisted, z);
      const double szego_term = hs_projection_derivative(base, z);
      const double twist_term = -twist_curvature(delta, z).block(0, 0)(0, 0).real();
      CHECK(std::abs(lhs - szego_term - twist_term) <= 1e-6 * std::max(1.0, lhs));
    }
  }
  SUBCASE("one-variable only") {
    GramFunction g2;
    g2.rank = 1;
    g2.eval = [](const Point&, const Point&) { return Eigen::MatrixXcd::Identity(1, 1); };
    CHECK_THROWS_AS(
        hs_projection_derivative(g2, Point{Complex{0.0, 0.0}, Complex{0.0, 0.0}}),
        UnsupportedError);
  }
}

TEST_CASE("similarity defect") {
  SUBCASE("trivial quotient has vanishing defect") {
    QuotientSpec spec{KernelSpec::szego(), theta_1_0(), std::nullopt};
    for (const Complex zv : {Complex{0.0, 0.0}, Complex{0.5, 0.1}, Complex{0.0, 0.75}}) {
      CHECK(std::abs(similarity_defect(spec, Point{zv})) <= 1e-8);
    }
  }
  SUBCASE("[[1],[z]]: h = 1/(1+|z|^2)^2") {
    QuotientSpec spec{KernelSpec::szego(), theta_1_z(), std::nullopt};
    CHECK(std::abs(similarity_defect(spec, Point{Complex{0.0, 0.0}}) - 1.0) <= 1e-6);
    for (const double r : {0.4, 0.8}) {
      const double expected = 1.0 / std::pow(1.0 + r * r, 2.0);
      CHECK(std::abs(similarity_defect(spec, Point{Complex{r, 0.0}}) - expected) <=
            1e-6 * expected);
    }
  }
  SUBCASE("non-szego building blocks need the explicit flag") {
    QuotientSpec spec{KernelSpec::bergman(1), theta_1_z(), std::nullopt};
    CHECK_THROWS_AS(similarity_defect(spec, Point{Complex{0.2, 0.0}}), ParameterError);
    DefectOptions opts;
    opts.allow_non_szego = true;
    CHECK_NOTHROW(similarity_defect(spec, Point{Complex{0.2, 0.0}}, opts));
    const auto profile = defect_profile(spec, coarse_disk_grid(0.5, 2, 4), opts);
    CHECK(profile.non_szego);
  }
}

TEST_CASE("carleson diagnostic") {
  SUBCASE("trivial quotient integrates to zero") {
    QuotientSpec spec{KernelSpec::szego(), theta_1_0(), std::nullopt};
    const auto r = carleson_diagnostic(spec, 4, 0.8);
    CHECK(std::abs(r.sup_ratio) <= 1e-8);
    CHECK(r.pointwise_constant <= 1e-4);
  }
  SUBCASE("[[1],[z]]: bounded pointwise constant and level-stable ratios") {
    QuotientSpec spec{KernelSpec::szego(), theta_1_z(), std::nullopt};
    const auto r = carleson_diagnostic(spec, 8, 0.8);
    CHECK(r.pointwise_constant <= 1.0 + 1e-3);
    CHECK(r.sup_ratio == doctest::Approx(0.638713834852354).epsilon(1e-9));
    CHECK(r.cumulative_sup.size() == 9);
    CHECK(std::abs(r.cumulative_sup[8] - r.cumulative_sup[6]) <=
          0.05 * std::abs(r.cumulative_sup[6]));
    CHECK_FALSE(r.negative_flagged);
  }
  SUBCASE("[[z],[1-z]] regression baseline") {
    QuotientSpec spec{KernelSpec::szego(), theta_z_1mz(), std::nullopt};
    const auto r = carleson_diagnostic(spec, 6, 0.8);
    CHECK(r.sup_ratio == doctest::Approx(0.923079689062262).epsilon(1e-9));
    CHECK_FALSE(r.negative_flagged);
  }
  SUBCASE("level cap enforced") {
    QuotientSpec spec{KernelSpec::szego(), theta_1_0(), std::nullopt};
    CHECK_THROWS_AS(carleson_diagnostic(spec, 11, 0.8), InputError);
  }
}

TEST_CASE("uniform equivalence diagnostic") {
  const auto grid = coarse_disk_grid();  // r_max = 0.8, contains the origin

  SUBCASE("[[1],[z]]: inf 1 at the origin, sup at the rim") {
    const auto [inf, sup] = uniform_equivalence_diagnostic(theta_1_z(), grid);
    CHECK(inf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup == doctest::Approx(std::sqrt(1.0 + 0.64)).epsilon(1e-12));
  }
  SUBCASE("constant frame") {
    const auto [inf, sup] = uniform_equivalence_diagnostic(theta_1_0(), grid);
    CHECK(inf == doctest::Approx(1.0));
    CHECK(sup == doctest::Approx(1.0));
  }
  SUBCASE("[[z],[z-2]]: bounded below by 1 on the disk") {
    const auto theta = MatrixMultiplier::column({pz(), pz() - pc(2.0)});
    const auto [inf, sup] = uniform_equivalence_diagnostic(theta, grid);
    double oracle = 1e300;
    for (const auto& z : grid)
      oracle = std::min(oracle, std::sqrt(std::norm(z[0]) + std::norm(z[0] - 2.0)));
    CHECK(inf == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(inf >= 1.0);
    CHECK(sup >= inf);
  }
}
