#include <catch2/catch_amalgamated.hpp>

#include <modkk/fractal_string.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

using namespace modkk;

namespace {

IntervalFamily unit_family() { return IntervalFamily{{Interval{0.0, 1.0}}}; }

IntervalFamily two_family() {
  return IntervalFamily{{Interval{0.0, 1.0}, Interval{1.5, 2.5}}};
}

}  // namespace

TEST_CASE("profile calibration matches the dense scan on the unit interval") {
  const auto bumps = make_bumps(unit_family());
  REQUIRE(bumps.size() == 1);
  CHECK(bumps[0].a == 0.0);
  CHECK(bumps[0].b == 1.0);
  // frozen scan output; the closed-form suprema of exp(-1/(x(1-x))) give
  // 10.323888612421642, and the midpoint scan undershoots them by ~1e-7 rel
  CHECK_THAT(bumps[0].c,
             Catch::Matchers::WithinRel(10.323889759047306, 1e-9));
  const double sup_f = 0.018315638888734179;   // e^{-4} at x = 1/2
  const double sup_df = 0.077578460434348184;  // attained near x = 0.3033
  const double budget = bumps[0].c * (sup_f + sup_df);
  CHECK(budget >= 0.9899);
  CHECK(budget <= 0.9901);

  // independent fine grid never violates the norm constraint
  double worst = 0.0;
  for (std::size_t i = 0; i < 65536; ++i) {
    const double x = (double(i) + 0.5) / 65536.0;
    worst = std::max(worst,
                     bumps[0].value(x) + std::abs(bumps[0].derivative(x)));
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("later profiles shrink harmonically and bad intervals are refused") {
  IntervalFamily fam{{Interval{0.0, 1.0}, Interval{2.0, 3.0}}};
  const auto bumps = make_bumps(fam);
  REQUIRE(bumps.size() == 2);
  // congruent intervals, so the second calibration is half the first
  CHECK_THAT(bumps[1].c, Catch::Matchers::WithinRel(bumps[0].c / 2.0, 1e-9));

  CHECK_THROWS_AS(make_bumps(IntervalFamily{{Interval{1.0, 1.0}}}),
                  DomainError);
  CHECK_THROWS_AS(
      make_bumps(IntervalFamily{
          {Interval{0.0, std::numeric_limits<double>::infinity()}}}),
      DomainError);
}

TEST_CASE("central momentum operator has the discrete sine spectrum") {
  CHECK_THROWS_AS(build_dirac(Box{0.0, 1.0}, 3), DomainError);

  const double h4 = 1.0 / 4.0;
  auto eigs4 = eig_herm(build_dirac(Box{0.0, 1.0}, 4)).eigenvalues;
  std::sort(eigs4.begin(), eigs4.end());
  REQUIRE(eigs4.size() == 4);
  CHECK_THAT(eigs4[0] * h4, Catch::Matchers::WithinAbs(-1.0, 1e-10));
  CHECK_THAT(eigs4[1] * h4, Catch::Matchers::WithinAbs(0.0, 1e-10));
  CHECK_THAT(eigs4[2] * h4, Catch::Matchers::WithinAbs(0.0, 1e-10));
  CHECK_THAT(eigs4[3] * h4, Catch::Matchers::WithinAbs(1.0, 1e-10));

  const double h8 = 1.0 / 8.0;
  auto eigs8 = eig_herm(build_dirac(Box{0.0, 1.0}, 8)).eigenvalues;
  std::sort(eigs8.begin(), eigs8.end());
  const double r = std::numbers::sqrt2 / 2.0;
  const double want[8] = {-1.0, -r, -r, 0.0, 0.0, r, r, 1.0};
  for (std::size_t i = 0; i < 8; ++i)
    CHECK_THAT(eigs8[i] * h8, Catch::Matchers::WithinAbs(want[i], 1e-10));

  // constants are annihilated exactly by the centered stencil
  const HermMatrix d = build_dirac(Box{-2.0, 5.0}, 16);
  CVector ones(16);
  for (auto& v : ones) v = 1.0;
  CHECK(vnorm(d.mat() * ones) == 0.0);
}

TEST_CASE("fourier momentum operator carries the exact integer symbols") {
  const Box box{0.0, 2.0};
  const HermMatrix d6 = build_dirac(box, 6, DiracVariant::fourier);
  auto eigs = eig_herm(d6).eigenvalues;
  std::sort(eigs.begin(), eigs.end());
  const double pi = std::numbers::pi;
  const double want[6] = {-2.0 * pi, -pi, 0.0, 0.0, pi, 2.0 * pi};
  for (std::size_t i = 0; i < 6; ++i)
    CHECK_THAT(eigs[i], Catch::Matchers::WithinAbs(want[i], 1e-10));

  // even n pins the unpaired top mode to zero, doubling the kernel
  auto eigs8 = eig_herm(build_dirac(box, 8, DiracVariant::fourier)).eigenvalues;
  std::size_t zeros = 0;
  for (double ev : eigs8)
    if (std::abs(ev) < 1e-8) ++zeros;
  CHECK(zeros == 2);

  // first harmonic is an exact eigenvector with eigenvalue 2 pi / L
  const std::size_t n = 8;
  const HermMatrix d8 = build_dirac(box, n, DiracVariant::fourier);
  CVector psi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ang = 2.0 * pi * double(j) / double(n);
    psi[j] = cd(std::cos(ang), std::sin(ang));
  }
  CHECK(vnorm(d8.mat() * psi - (2.0 * pi / box.length()) * psi) <= 1e-10);
}

TEST_CASE("assembled operator vanishes off the supports, exactly") {
  const IntervalFamily fam = two_family();
  const Box box = enclosing_box(fam);
  CHECK_THAT(box.lo, Catch::Matchers::WithinAbs(-0.25, 1e-15));
  CHECK_THAT(box.hi, Catch::Matchers::WithinAbs(2.75, 1e-15));

  const std::size_t n = 32;
  const GridOperator g = build_d_delta(fam, box, n);
  REQUIRE(g.x.size() == n);
  REQUIRE(g.f_samples.size() == 2);

  const CMatrix& dd = g.D_delta.mat();
  const CMatrix& delta = g.Delta_grid.mat();
  auto in = [](double x, const Interval& iv) { return x > iv.a && x < iv.b; };
  for (std::size_t r = 0; r < n; ++r) {
    const bool r0 = in(g.x[r], fam.intervals[0]);
    const bool r1 = in(g.x[r], fam.intervals[1]);
    if (!r0 && !r1) {
      CHECK(delta(r, r) == cd(0.0));
      for (std::size_t s = 0; s < n; ++s) {
        CHECK(dd(r, s) == cd(0.0));
        CHECK(dd(s, r) == cd(0.0));
      }
      continue;
    }
    CHECK(delta(r, r).real() > 0.0);
    // disjoint supports never couple: block structure is exact
    for (std::size_t s = 0; s < n; ++s) {
      const bool s0 = in(g.x[s], fam.intervals[0]);
      const bool s1 = in(g.x[s], fam.intervals[1]);
      if ((r0 && s1) || (r1 && s0)) CHECK(dd(r, s) == cd(0.0));
    }
    // diagonal of Delta stays below the calibrated budget sum
    CHECK(delta(r, r).real() <= 1.0);
  }
}

TEST_CASE("narrow or stray intervals are rejected while building") {
  CHECK_THROWS_AS(
      build_d_delta(unit_family(), Box{0.25, 2.0}, 16), DomainError);
  CHECK_THROWS_AS(
      build_d_delta(IntervalFamily{{Interval{0.0, 0.05}}}, Box{0.0, 1.0}, 16),
      DegenerateInterval);
}

TEST_CASE("constant unit profile reproduces the plain grid operator") {
  const Box box{0.0, 1.0};
  const GridOperator g = unit_profile_grid(box, 12);
  CHECK((g.D_delta.mat() - g.D_grid.mat()).frobenius_norm() == 0.0);
  CHECK((g.Delta_grid.mat() - CMatrix::identity(12)).frobenius_norm() == 0.0);
  CHECK(g.family.count() == 0);
}

TEST_CASE("symmetrized assembly approaches the direct stencil at rate h^2") {
  const IntervalFamily fam = unit_family();
  const Box box = enclosing_box(fam);
  const double coarse = assembly_comparison(build_d_delta(fam, box, 128));
  const double fine = assembly_comparison(build_d_delta(fam, box, 256));
  REQUIRE(fine > 0.0);
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("grid triple passes every cycle condition for adapted functions") {
  const IntervalFamily fam = two_family();
  const Box box = enclosing_box(fam);
  const GridOperator g = build_d_delta(fam, box, 128);

  const Bump b0 = g.bumps[0];
  const Bump b1 = g.bumps[1];
  std::vector<std::function<double(double)>> funcs = {
      [b0](double x) { return b0.value(x); },
      [b0, b1](double x) { return b0.value(x) + b1.value(x); },
      [b0](double x) { const double v = b0.value(x); return v * v; }};

  const CycleReport rep = spectral_triple_check(g, funcs);
  CAPTURE(rep.conditions.size());
  for (const auto& cond : rep.conditions) {
    CAPTURE(cond.name, cond.residual, cond.note);
    CHECK(cond.pass);
  }
  REQUIRE(rep.all_pass);

  bool saw_range_note = false;
  bool saw_stability = false;
  for (const auto& cond : rep.conditions) {
    if (cond.name == "rho_bounded" && !cond.note.empty()) saw_range_note = true;
    if (cond.name == "commutator_stability") {
      saw_stability = true;
      REQUIRE(cond.details.size() == 3);
      // frozen ladder values; the leading profile dominates the maximum
      CHECK(cond.details[0] ==
            Catch::Approx(0.013155117658291630).epsilon(1e-9));
      CHECK(cond.details[1] ==
            Catch::Approx(0.013716407488399562).epsilon(1e-9));
      CHECK(cond.details[2] ==
            Catch::Approx(0.014003102778098785).epsilon(1e-9));
      for (std::size_t i = 0; i + 1 < cond.details.size(); ++i) {
        const double r = cond.details[i + 1] / cond.details[i];
        CHECK(r <= 1.2);
        CHECK(r >= 1.0 / 1.2);
      }
      CHECK(cond.residual <= 0.2);
    }
    // adapted functions vanish identically on the kernel grid points
    if (cond.name == "approx_identity") CHECK(cond.residual == 0.0);
  }
  CHECK(saw_range_note);
  CHECK(saw_stability);
}

TEST_CASE("spectrum is sorted, symmetric, and counted consistently") {
  const IntervalFamily fam{{Interval{0.0, 1.0}, Interval{1.4, 2.4}}};
  const Box box = enclosing_box(fam);
  const GridOperator g = build_d_delta(fam, box, 64, DiracVariant::fourier);

  const std::vector<double> eigs = spectrum_report(g);
  REQUIRE(eigs.size() == 64);
  CHECK(std::is_sorted(eigs.begin(), eigs.end()));
  // the operator is i-symmetric, so the spectrum mirrors around zero
  double sym = 0.0;
  for (std::size_t i = 0; i < eigs.size(); ++i)
    sym = std::max(sym, std::abs(eigs[i] + eigs[eigs.size() - 1 - i]));
  CHECK(sym < 1e-8);

  const std::size_t all = counting_function(eigs, 1e300);
  CHECK(all == 64);
  const std::size_t none = counting_function(eigs, -1.0);
  CHECK(none == 0);
  std::size_t prev = 0;
  for (double lam : {0.1, 1.0, 10.0, 100.0}) {
    const std::size_t cur = counting_function(eigs, lam);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("product machinery rebuilds the assembled operators on a small grid") {
  const IntervalFamily fam = unit_family();
  const Box box = enclosing_box(fam);
  const GridOperator g = build_d_delta(fam, box, 8);

  const CrossCheck cc = product_cross_check(g);
  REQUIRE_FALSE(cc.active.empty());
  for (std::size_t j : cc.active) {
    REQUIRE(j < g.n);
    CHECK(g.f_samples[0][j] != 0.0);
  }
  CHECK(cc.dirac.name == "cross_dirac");
  CHECK(cc.delta.name == "cross_delta");
  CHECK(cc.dirac.relative() < 1e-10);
  CHECK(cc.delta.relative() < 1e-10);
}
