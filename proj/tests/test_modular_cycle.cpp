#include <catch2/catch_amalgamated.hpp>

#include <modkk/modular_cycle.hpp>

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

TEST_CASE("cycle constructor validates dimensions and positivity") {
  Rng rng(21, 5);
  HermMatrix d = random_hermitian(rng, 4, 1.0);
  HermMatrix delta = random_positive(rng, 4, 1.0, 5.0);
  REQUIRE_NOTHROW(make_modular_cycle(hilbert_space(4), d, delta,
                                     identity_rep(4)));
  REQUIRE_THROWS_AS(make_modular_cycle(hilbert_space(5), d, delta,
                                       identity_rep(5)),
                    Error);
  HermMatrix indefinite = diag({1.0, -0.5, 2.0, 0.3});
  REQUIRE_THROWS_AS(make_modular_cycle(hilbert_space(4), d, indefinite,
                                       identity_rep(4)),
                    DomainError);
  // grading that commutes with a nonzero D must be rejected
  HermMatrix g(CMatrix::identity(4));
  REQUIRE_THROWS_AS(
      make_modular_cycle(hilbert_space(4), d, delta, identity_rep(4), g),
      Error);
}

TEST_CASE("twisted derivative satisfies d(T)^* = -d(T^*)") {
  const ModularCycle c = random_cycle(2, 5);
  Rng rng(22, 5);
  const CMatrix t = random_gaussian_matrix(rng, 5, 5);
  const TwistedDerivative dt = twisted_derivative(c, t);
  const TwistedDerivative dts = twisted_derivative(c, t.adjoint());
  REQUIRE((dt.d_delta.adjoint() + dts.d_delta).frobenius_norm() <=
          1e-12 * (1.0 + dt.d_delta.frobenius_norm()));
  // rho reconstructs d through the positive square root
  const CMatrix half =
      guarded_inv_power(c.Delta, 0.5);
  const CMatrix back = half * dt.rho_delta * half;
  REQUIRE((back - dt.d_delta).frobenius_norm() <=
          1e-9 * (1.0 + dt.d_delta.frobenius_norm()));
}

TEST_CASE("full-algebra cycles pass every condition") {
  const ModularCycle c = random_cycle(3, 4);
  REQUIRE(c.parity == Parity::odd);
  const CycleReport rep = check_cycle(c, matrix_units(4));
  for (const auto& e : rep.conditions)
    INFO(e.name << " residual " << e.residual);
  REQUIRE(rep.all_pass);
  REQUIRE(rep.find("compact_resolvent") != nullptr);
  REQUIRE(rep.find("twisted_derivative_bounded") != nullptr);
  REQUIRE(rep.find("rho_bounded") != nullptr);
  REQUIRE(rep.find("rho_completely_bounded") != nullptr);
  REQUIRE(rep.find("approx_identity") != nullptr);
  REQUIRE(rep.find("grading") == nullptr);
}

TEST_CASE("cycles over a conjugated amplified algebra pass") {
  const ModularCycle c = random_cycle_over(4, 2, 3);
  std::vector<CMatrix> probes = matrix_units(2);
  Rng rng(23, 5);
  probes.push_back(random_hermitian(rng, 2, 1.0).mat());
  const CycleReport rep = check_cycle(c, probes);
  REQUIRE(rep.all_pass);
  // the approximate-identity sweep should have decayed substantially
  const ConditionEntry* ai = rep.find("approx_identity");
  REQUIRE(ai != nullptr);
  REQUIRE(ai->details.back() < ai->details.front());
}

TEST_CASE("even cycles carry a grading entry that passes") {
  const ModularCycle c = random_even_cycle_over(5, 2, 2);
  REQUIRE(c.parity == Parity::even);
  REQUIRE(c.gamma.has_value());
  const CMatrix g = c.gamma->mat();
  REQUIRE((g * g - CMatrix::identity(8)).frobenius_norm() <= 1e-12);
  const CycleReport rep = check_cycle(c, matrix_units(2));
  REQUIRE(rep.all_pass);
  const ConditionEntry* grading = rep.find("grading");
  REQUIRE(grading != nullptr);
  REQUIRE(grading->pass);
}

TEST_CASE("singular Delta passes when the derivative respects the kernel") {
  // everything block-diagonal against the kernel direction
  const HermMatrix d = diag({1.0, -1.0, 3.0});
  const HermMatrix delta = diag({2.0, 1.0, 0.0});
  CMatrix t(3, 3);
  t(0, 1) = 1.0;
  t(1, 0) = 1.0;
  const ModularCycle c = make_modular_cycle(hilbert_space(3), d, delta,
                                            scalar_rep(3));
  CheckOptions opt;
  opt.run_cb = false;
  const CycleReport rep = check_cycle_images(c, {t}, opt);
  REQUIRE(rep.all_pass);
  const ConditionEntry* rho = rep.find("rho_bounded");
  REQUIRE(rho != nullptr);
  REQUIRE(rho->pass);
  REQUIRE(rho->note.find("range of Delta") != std::string::npos);
  const ConditionEntry* ai = rep.find("approx_identity");
  REQUIRE(ai != nullptr);
  REQUIRE(ai->residual == 0.0);
}

TEST_CASE("singular Delta fails when the derivative leaks into the kernel") {
  const HermMatrix d = diag({1.0, -1.0, 3.0});
  const HermMatrix delta = diag({2.0, 1.0, 0.0});
  CMatrix t(3, 3);
  t(0, 2) = 1.0;  // couples the kernel direction
  t(2, 0) = 1.0;
  const ModularCycle c = make_modular_cycle(hilbert_space(3), d, delta,
                                            scalar_rep(3));
  CheckOptions opt;
  opt.run_cb = false;
  const CycleReport rep = check_cycle_images(c, {t}, opt);
  REQUIRE_FALSE(rep.all_pass);
  REQUIRE_FALSE(rep.find("rho_bounded")->pass);
  REQUIRE_FALSE(rep.find("approx_identity")->pass);
}

TEST_CASE("disabling the cb estimate drops exactly that condition") {
  const ModularCycle c = random_cycle(6, 4);
  CheckOptions opt;
  opt.run_cb = false;
  const CycleReport rep = check_cycle(c, matrix_units(4), opt);
  REQUIRE(rep.find("rho_completely_bounded") == nullptr);
  REQUIRE(rep.conditions.size() == 4);
  REQUIRE(rep.all_pass);
}

TEST_CASE("stabilization lifts every ingredient diagonally") {
  const ModularCycle c = random_cycle_over(7, 2, 2);
  const ModularCycle s = stabilize(c, 3);
  REQUIRE(s.Y.ambient_dim == 3 * c.Y.ambient_dim);
  REQUIRE((s.D.mat() - kron(CMatrix::identity(3), c.D.mat())).frobenius_norm() ==
          0.0);
  REQUIRE((s.Delta.mat() - kron(CMatrix::identity(3), c.Delta.mat()))
              .frobenius_norm() == 0.0);
  CheckOptions opt;
  opt.run_cb = false;  // identical estimates as the base cycle, skip the cost
  const CycleReport rep = check_cycle(s, matrix_units(2), opt);
  REQUIRE(rep.all_pass);
}

TEST_CASE("blockwise action assembles matrix algebras over the coefficients") {
  const Representation pi = identity_rep(2);
  Rng rng(24, 5);
  std::vector<std::vector<CMatrix>> blocks(2);
  for (auto& row : blocks)
    for (std::size_t j = 0; j < 2; ++j)
      row.push_back(random_gaussian_matrix(rng, 2, 2));
  const CMatrix big = k_pi(pi, blocks);
  REQUIRE(big.rows() == 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const CMatrix blk = big.block(i * 2, j * 2, 2, 2);
      REQUIRE((blk - blocks[i][j]).frobenius_norm() == 0.0);
    }
}
