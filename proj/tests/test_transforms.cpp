#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <modkk/transforms.hpp>

using namespace modkk;

namespace {

HermMatrix diag(std::initializer_list<double> entries) {
  CMatrix m(entries.size(), entries.size());
  std::size_t i = 0;
  for (double v : entries) {
    m(i, i) = v;
    ++i;
  }
  return HermMatrix(m);
}

}  // namespace

TEST_CASE("transform context validates Delta and r") {
  Rng rng(41, 7);
  HermMatrix d = random_hermitian(rng, 4, 1.0);
  HermMatrix delta = random_positive(rng, 4, 1.0, 4.0);
  REQUIRE_THROWS_AS(
      make_transform_context(random_hermitian(rng, 5, 1.0), delta), Error);
  REQUIRE_THROWS_AS(make_transform_context(d, diag({1.0, -0.2, 0.5, 0.1})),
                    DomainError);
  const double nd = op_norm(delta.mat());
  REQUIRE_THROWS_AS(make_transform_context(d, delta, 0.5 * nd * nd),
                    DomainError);
  const TransformContext ctx = make_transform_context(d, delta);
  REQUIRE(ctx.r >= 2.0 * nd * nd - 1e-12);
  REQUIRE((ctx.K -
           (CMatrix::identity(4) -
            cd(1.0 / ctx.r, 0.0) * (delta.mat() * delta.mat())))
              .frobenius_norm() == 0.0);
}

TEST_CASE("bounded transform squares to 1 - (1+D^2)^{-1}") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng rng(seed, 7);
    const HermMatrix d = random_hermitian(rng, 6, 2.0);
    const HermMatrix f = bounded_transform(d);
    REQUIRE(hermitian_defect(f.mat()) == 0.0);
    const std::size_t n = 6;
    const CMatrix defect = f.mat() * f.mat() - CMatrix::identity(n) +
                           matfunc(d, [](double x) -> cd {
                             return 1.0 / (1.0 + x * x);
                           });
    REQUIRE(defect.frobenius_norm() <= 1e-14 * (1.0 + n));
    REQUIRE(op_norm(f.mat()) < 1.0);
  }
}

TEST_CASE("integral representation reproduces the bounded transform") {
  Rng rng(42, 7);
  const HermMatrix d = random_hermitian(rng, 5, 1.5);
  const CMatrix via_integral = bounded_transform_integral(d);
  REQUIRE((via_integral - bounded_transform(d).mat()).frobenius_norm() <=
          1e-7);
}

TEST_CASE("modular transform collapses to the bounded transform when "
          "D and Delta commute") {
  const HermMatrix d = diag({-1.5, -0.3, 0.2, 0.9, 2.0});
  const HermMatrix delta = diag({0.3, 0.7, 1.1, 1.9, 2.4});
  const TransformContext ctx = make_transform_context(d, delta);
  const CMatrix g = modular_transform(ctx);
  REQUIRE(op_norm(g - bounded_transform(d).mat()) < 1e-7);

  const TransformContext bad =
      make_transform_context(d, diag({0.0, 0.7, 1.1, 1.9, 2.4}));
  REQUIRE_THROWS_AS(modular_transform(bad), DeltaSingular);
}

TEST_CASE("beta-function resolvent integrals hold on matrices") {
  Rng rng(43, 7);
  const HermMatrix lam = random_hermitian(rng, 5, 2.0);
  REQUIRE(beta_resolvent_check(lam, 0.5, 0.5).relative() <= 1e-8);
  REQUIRE(beta_resolvent_check(lam, 0.75, 1.25).relative() <= 1e-8);
  REQUIRE(beta_resolvent_check(lam, 2.0, 1.0).relative() <= 1e-8);
  REQUIRE_THROWS_AS(beta_resolvent_check(lam, 0.0, 1.0), DomainError);
}

TEST_CASE("kernel-collapsed geometric sums match explicit matrix series") {
  const TransformContext ctx = random_transform_context(44, 5);
  Rng rng(45, 7);
  const CMatrix m = random_gaussian_matrix(rng, 5, 5);
  const double lambda = 2.0;
  const CMatrix r = ctx.R(lambda);

  // partial sums against the direct recursion term_{n} = l K term_{n-1} R
  CMatrix term = m * r;
  CMatrix acc = term;
  for (long long n = 0; n <= 6; ++n) {
    const CMatrix collapsed = geometric_kernel_sum(ctx, lambda, m, n);
    REQUIRE((collapsed - acc).frobenius_norm() <=
            1e-12 * (1.0 + acc.frobenius_norm()));
    term = cd(lambda, 0.0) * (ctx.K * term * r);
    acc += term;
  }

  // full sum against a long partial: the ratio is q = l|K|/(l+1) < 1
  CMatrix long_acc = m * r;
  CMatrix long_term = m * r;
  for (int n = 1; n <= 250; ++n) {
    long_term = cd(lambda, 0.0) * (ctx.K * long_term * r);
    long_acc += long_term;
  }
  const CMatrix full = geometric_kernel_sum(ctx, lambda, m);
  REQUIRE((full - long_acc).frobenius_norm() <=
          1e-12 * (1.0 + long_acc.frobenius_norm()));
}

TEST_CASE("resolvent series sums to its closed form") {
  const TransformContext ctx = random_transform_context(46, 6);
  const IdentityResidual res = series_expansion_check(ctx, 2.0, 30);
  REQUIRE(res.relative() <= 1e-12);
  REQUIRE(res.lambda.has_value());
  REQUIRE(*res.lambda == 2.0);
}

TEST_CASE("three-term decomposition of S_l Delta^3 holds") {
  const TransformContext ctx = random_transform_context(47, 6);
  for (double lambda : {1.0, 40.0}) {
    INFO("lambda " << lambda);
    REQUIRE(prealg_decomposition(ctx, lambda).relative() <= 1e-11);
  }
  REQUIRE_THROWS_AS(prealg_decomposition(ctx, -2.0), DomainError);
}

TEST_CASE("square-root integral of the collapsed series gives "
          "Delta^5 (1+D^2)^{-1/2}") {
  const TransformContext ctx = random_transform_context(48, 6);
  REQUIRE(sqrt_integral_check(ctx).relative() <= 1e-7);
}

TEST_CASE("transform comparison vanishes in the commuting case and stays "
          "bounded under refinement") {
  const TransformContext flat = make_transform_context(
      diag({-1.5, -0.3, 0.2, 0.9, 2.0}), diag({0.3, 0.7, 1.1, 1.9, 2.4}));
  REQUIRE(comparison_residual(flat, 0.0) <= 1e-7);

  // refinement family: multiplication part plus a fixed symmetric hop,
  // positive weight sampled on midpoints, common r
  const auto member = [](std::size_t n) {
    CMatrix dm(n, n), lm(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (double(i) + 0.5) / double(n);
      dm(i, i) = 2.0 * x - 1.0;
      lm(i, i) = 0.6 + 0.4 * std::sin(3.14159265358979323846 * x);
      if (i + 1 < n) {
        dm(i, i + 1) = 0.5;
        dm(i + 1, i) = 0.5;
      }
    }
    return make_transform_context(HermMatrix(dm), HermMatrix(lm), 2.0);
  };
  for (double p : {0.0, 0.25, 0.49}) {
    INFO("p " << p);
    double prev = -1.0;
    for (std::size_t n : {8u, 16u, 32u}) {
      const double v = comparison_residual(member(n), p);
      REQUIRE(v < 1.0);
      if (prev > 0.0) REQUIRE(v < 1.5 * prev);
      prev = v;
    }
  }
  REQUIRE(comparison_residual(member(16), 0.49) >
          comparison_residual(member(16), 0.25));

  REQUIRE_THROWS_AS(comparison_residual(member(8), 0.5), DomainError);
  REQUIRE_THROWS_AS(comparison_residual(member(8), -0.1), DomainError);
}

TEST_CASE("squared-resolvent series collapses to its rational form") {
  const TransformContext ctx = random_transform_context(50, 6);
  REQUIRE(intrig_check(ctx, 3.0, 0.3).relative() <= 1e-10);
  REQUIRE(intrig_check(ctx, 1.0, 0.45).relative() <= 1e-10);
}

TEST_CASE("telescoping K-power sum is exact") {
  const TransformContext ctx = random_transform_context(51, 6);
  REQUIRE(conkay_check(ctx, 64).relative() <= 1e-12);
}

TEST_CASE("weighted square-root partial sums increase to Delta") {
  const TransformContext ctx = random_transform_context(52, 6);
  const std::size_t n = ctx.dim();
  CMatrix rho = CMatrix::identity(n);
  rho *= cd(1.0 / double(n), 0.0);
  std::vector<std::size_t> terms;
  for (std::size_t t = 1; t <= 512; t *= 2) terms.push_back(t);
  const WeasqrReport rep = weasqr_check(ctx, rho, terms);
  REQUIRE(rep.traces.size() == terms.size());
  for (std::size_t i = 0; i + 1 < rep.traces.size(); ++i)
    REQUIRE(rep.traces[i] <= rep.traces[i + 1] + 1e-12);
  for (double t : rep.traces) REQUIRE(t <= rep.limit + 1e-10);
  REQUIRE(std::abs(rep.traces.back() - rep.limit) <=
          1e-5 * (1.0 + std::abs(rep.limit)));
  REQUIRE_THROWS_AS(weasqr_check(ctx, CMatrix::identity(n), terms),
                    DomainError);
}

TEST_CASE("appendix estimates decay at their guaranteed rates") {
  const TransformContext ctx = random_transform_context(53, 6);
  const std::vector<double> grid = log_grid(10.0, 1e4, 12);
  for (EstimateId id :
       {EstimateId::eleestI, EstimateId::eleestII, EstimateId::eleestIV,
        EstimateId::eleestV, EstimateId::eleestVI, EstimateId::esterr,
        EstimateId::truerr}) {
    const DecayFit fit = appendix_sweep(ctx, grid, id);
    INFO(fit.name << " slope " << fit.slope << " alpha " << fit.alpha);
    REQUIRE_FALSE(fit.all_zero);
    REQUIRE(fit.slope <= -fit.alpha + 0.05);
    if (id == EstimateId::eleestI)
      REQUIRE(fit.constant <= std::sqrt(2.0 * ctx.r) * (1.0 + 1e-9));
  }
}

TEST_CASE("truncation distance to the full error term obeys its bound") {
  const TransformContext ctx = random_transform_context(54, 5);
  const std::vector<std::size_t> ms = {1, 2, 4, 8, 16, 32};
  const std::vector<ConellPoint> pts = conell_check(ctx, 5.0, ms);
  REQUIRE(pts.size() == ms.size());
  for (const ConellPoint& pt : pts) {
    INFO("m " << pt.m);
    REQUIRE(pt.diff <= pt.bound * (1.0 + 1e-9) + 1e-12);
  }
  REQUIRE_THROWS_AS(conell_check(ctx, 5.0, {0}), DomainError);
}

TEST_CASE("partial-sum norms sit below the uniform envelope") {
  const TransformContext ctx = random_transform_context(55, 5);
  for (double lambda : {0.5, 2.0, 10.0, 100.0}) {
    const double env = comboutra_envelope(ctx, lambda);
    INFO("lambda " << lambda << " envelope " << env);
    for (long long n : {0ll, 1ll, 2ll, 4ll, 16ll, 64ll, -1ll})
      REQUIRE(comboutra_partial_norm(ctx, lambda, n) <= env * (1.0 + 1e-9));
  }
  REQUIRE_THROWS_AS(comboutra_envelope(ctx, 0.0), DomainError);

  Rng rng(56, 7);
  const HermMatrix d = random_hermitian(rng, 4, 1.0);
  const TransformContext singular =
      make_transform_context(d, diag({1.0, 0.5, 0.2, 0.0}));
  REQUIRE_THROWS_AS(comboutra_envelope(singular, 1.0), DeltaSingular);
}

TEST_CASE("context resolvents agree with direct dense inverses") {
  const TransformContext ctx = random_transform_context(57, 5);
  const double lambda = 7.0;
  const CMatrix s_direct = dense_inverse(
      CMatrix::identity(5) +
      cd(lambda / ctx.r, 0.0) * (ctx.Delta.mat() * ctx.Delta.mat()) +
      ctx.D.mat() * ctx.D.mat());
  REQUIRE((ctx.S(lambda) - s_direct).frobenius_norm() <= 1e-11);
  const CMatrix r_direct = dense_inverse(cd(1.0 + lambda, 0.0) *
                                             CMatrix::identity(5) +
                                         ctx.D.mat() * ctx.D.mat());
  REQUIRE((ctx.R(lambda) - r_direct).frobenius_norm() <= 1e-11);
}
