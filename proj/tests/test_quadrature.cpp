#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <modkk/quadrature.hpp>

using namespace modkk;

namespace {

CMatrix scalar(double x) {
  CMatrix m(1, 1);
  m(0, 0) = x;
  return m;
}

double integrate_scalar_unit(const std::function<double(double)>& f,
                             const QuadratureSpec& spec = {}) {
  return integrate_unit([&](double t) { return scalar(f(t)); }, spec)(0, 0)
      .real();
}

}  // namespace

TEST_CASE("unit-interval rule integrates monomials exactly") {
  for (int k = 0; k <= 20; ++k) {
    const double got = integrate_scalar_unit(
        [&](double t) { return std::pow(t, double(k)); });
    REQUIRE(got == Catch::Approx(1.0 / (k + 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("unit-interval rule handles matrix-valued integrands") {
  const CMatrix got = integrate_unit([](double t) {
    CMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = t;
    m(1, 0) = cd(0.0, t);
    m(1, 1) = t * t;
    return m;
  });
  REQUIRE(got(0, 0).real() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(got(0, 1).real() == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(got(1, 0).imag() == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(got(1, 1).real() == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("half-line rule reproduces the exponential integral") {
  const double got =
      integrate_halfline([](double lam) { return scalar(std::exp(-lam)); })(0,
                                                                            0)
          .real();
  REQUIRE(got == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("square-root-weighted half-line rule hits sqrt(pi)") {
  const double got = integrate_halfline_sqrt([](double lam) {
                       return scalar(std::exp(-lam));
                     })(0, 0)
                         .real();
  REQUIRE(got == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("half-line rule recovers beta integrals") {
  // B(p, q) = integral of t^{p-1} (1+t)^{-p-q} over the half line
  const auto beta_via_quad = [](double p, double q) {
    return integrate_halfline([&](double lam) {
             return scalar(std::pow(lam, p - 1.0) *
                           std::pow(1.0 + lam, -p - q));
           })(0, 0)
        .real();
  };
  REQUIRE(beta_via_quad(1.5, 2.0) ==
          Catch::Approx(std::beta(1.5, 2.0)).epsilon(1e-9));
  REQUIRE(beta_via_quad(2.0, 3.5) ==
          Catch::Approx(std::beta(2.0, 3.5)).epsilon(1e-9));
  // the square-root weight absorbs the p = 1/2 endpoint singularity
  const double half_half =
      integrate_halfline_sqrt([](double lam) {
        return scalar(1.0 / (1.0 + lam));
      })(0, 0)
          .real();
  REQUIRE(half_half == Catch::Approx(M_PI).epsilon(1e-10));
  REQUIRE(std::beta(0.5, 0.5) == Catch::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("evaluation budget is enforced") {
  QuadratureSpec spec;
  spec.abs_tol = 0.0;
  spec.rel_tol = 1e-16;
  spec.max_evals = 200;
  REQUIRE_THROWS_AS(
      integrate_unit([](double t) { return scalar(std::cos(200.0 * t)); },
                     spec),
      QuadratureNoConvergence);
}

TEST_CASE("evaluation counter reports work done") {
  std::size_t evals = 0;
  QuadratureSpec spec;
  integrate_unit([](double t) { return scalar(t); }, spec, &evals);
  REQUIRE(evals >= spec.panels * spec.points_per_panel);
}
