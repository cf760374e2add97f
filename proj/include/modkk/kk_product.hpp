#pragma once

// Product assembly: a generated module X over B meets a cycle (Y, D, Gamma).
// Phi stacks the annihilation maps T_xi_n^* into l^2_N(Y); the product cycle
// lives on X (x)_B Y with Delta = Phi*(1 (x) Gamma)Phi and the lifted
// operator D_Delta = Phi*(1 (x) D)Phi.  Everything downstream (bounded
// transforms, connection sweeps, approximate-identity chains) reuses the
// lift and transform machinery.

#include <optional>
#include <utility>
#include <vector>

#include "decay.hpp"
#include "hilbert_module.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "modular_cycle.hpp"
#include "modular_lift.hpp"
#include "rng.hpp"
#include "transforms.hpp"

namespace modkk {

struct GeneratorDeficient : Error {
  using Error::Error;
};

namespace detail {

inline CMatrix pow_int(const CMatrix& m, std::size_t p) {
  CMatrix out = CMatrix::identity(m.rows());
  for (std::size_t i = 0; i < p; ++i) out = out * m;
  return out;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// generated modules with Gram-block data

struct DifferentiableModule {
  HilbertModule X;        // over B = M_k
  Representation pi_A;    // A = M_p acting on X by module maps
  std::vector<CVector> xis;
  double tail_epsilon = 0.0;  // certified bound on the index > N/2 Gram tail

  std::size_t generators() const { return xis.size(); }

  // Gram block matrix [<xi_n, t xi_m>]_B for an ambient operator t on X
  CMatrix gram_blocks(const CMatrix& t) const {
    const std::size_t k = X.algebra.k, n = xis.size();
    CMatrix out(n * k, n * k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.set_block(i * k, j * k, X.inner(xis[i], t * xis[j]));
    return out;
  }

  CMatrix tau(const CMatrix& a) const { return gram_blocks(pi_A.apply(a)); }
};

// operator norm of the Gram blocks with both indices beyond N/2
inline double gram_tail_norm(const DifferentiableModule& dm, const CMatrix& t) {
  const std::size_t n = dm.xis.size(), k = dm.X.algebra.k;
  const std::size_t start = n / 2;
  const CMatrix g = dm.gram_blocks(t);
  const std::size_t side = (n - start) * k;
  return op_norm(g.block(start * k, start * k, side, side));
}

inline DifferentiableModule make_differentiable_module(
    HilbertModule x, Representation pi_a, std::vector<CVector> xis,
    double declared_tail = -1.0) {
  if (xis.empty())
    throw Error("make_differentiable_module: at least one generator required");
  for (const auto& xi : xis)
    if (xi.size() != x.ambient_dim)
      throw Error("make_differentiable_module: generator dimension mismatch");
  if (pi_a.op_dim != x.ambient_dim)
    throw NotRepresentation("make_differentiable_module: pi_A does not act on X");
  validate_representation(pi_a);

  // images must be module maps, i.e. commute with the right action of B
  const std::size_t k = x.algebra.k;
  for (const auto& img : pi_a.unit_images)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        CMatrix b(k, k);
        b(i, j) = 1.0;
        for (std::size_t a = 0; a < x.ambient_dim; ++a) {
          const CVector e = x.basis_vector(a);
          const CVector lhs = img * x.right_action(e, b);
          const CVector rhs = x.right_action(img * e, b);
          if (vnorm(lhs - rhs) > 1e-10 * (1.0 + vnorm(rhs)))
            throw NotRepresentation(
                "make_differentiable_module: pi_A image is not a module map");
        }
      }

  DifferentiableModule dm{std::move(x), std::move(pi_a), std::move(xis), 0.0};

  // tau respects adjoints on the matrix units of A
  const std::size_t ka = dm.pi_A.k;
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = 0; j < ka; ++j) {
      CMatrix eij(ka, ka), eji(ka, ka);
      eij(i, j) = 1.0;
      eji(j, i) = 1.0;
      const CMatrix tij = dm.tau(eij);
      const CMatrix tji = dm.tau(eji);
      if ((tij.adjoint() - tji).frobenius_norm() >
          1e-10 * (1.0 + tij.frobenius_norm()))
        throw Error("make_differentiable_module: tau adjoint symmetry fails");
    }

  // tail certificate over the pi_A units and the identity operator
  double tail =
      gram_tail_norm(dm, CMatrix::identity(dm.X.ambient_dim));
  for (const auto& img : dm.pi_A.unit_images)
    tail = std::max(tail, gram_tail_norm(dm, img));
  if (declared_tail >= 0.0) {
    if (tail > declared_tail)
      throw Error("make_differentiable_module: Gram tail exceeds the declared "
                  "certificate");
    dm.tail_epsilon = declared_tail;
  } else {
    dm.tail_epsilon = tail;
  }
  return dm;
}

// ----------------------------------------------------------------------------
// Phi and the product cycle

// Phi stacks the annihilation maps as block rows.  Y-side coordinates carry
// the sqrt(k) rescale that turns the scalarized pairing into the standard
// one, so matrix adjoints of every block agree with module adjoints.
inline CMatrix build_phi(const DifferentiableModule& dm, const TensorModule& tm,
                         std::size_t n_gen,
                         std::vector<double>* cauchy = nullptr) {
  if (n_gen == 0 || n_gen > dm.xis.size())
    throw Error("build_phi: generator count out of range");
  if (tm.left.ambient_dim != dm.X.ambient_dim)
    throw Error("build_phi: tensor module does not match X");
  const std::size_t dy = tm.right.ambient_dim;
  const cd root(std::sqrt(double(tm.right.algebra.k)), 0.0);
  CMatrix phi(n_gen * dy, tm.dim);
  for (std::size_t n = 0; n < n_gen; ++n) {
    const CreationOp op = creation_op(dm.xis[n], tm);
    phi.set_block(n * dy, 0, root * op.T.adjoint());
  }
  const std::vector<double> sv = singular_values(phi);
  const double smax = sv.empty() ? 0.0 : sv.front();
  if (phi.cols() > phi.rows() || smax == 0.0 || sv.back() <= 1e-10 * smax)
    throw GeneratorDeficient("build_phi: generators do not span the module");
  if (cauchy) {
    cauchy->clear();
    for (std::size_t m = 0; m < n_gen; ++m)
      cauchy->push_back(
          op_norm(phi.block(m * dy, 0, (n_gen - m) * dy, tm.dim)));
  }
  return phi;
}

// X (x)_B Y as a module over the right factor's algebra, in quotient coords
inline HilbertModule quotient_module(const TensorModule& tm) {
  HilbertModule m;
  m.algebra = tm.right.algebra;
  m.ambient_dim = tm.dim;
  m.inner = [tm](const CVector& u, const CVector& v) {
    const std::size_t dx = tm.left.ambient_dim, dy = tm.right.ambient_dim;
    const CVector ru = tm.embed(u), rv = tm.embed(v);
    CMatrix out(tm.right.algebra.k, tm.right.algebra.k);
    for (std::size_t a = 0; a < dx; ++a) {
      const CVector ua(ru.begin() + a * dy, ru.begin() + (a + 1) * dy);
      for (std::size_t a2 = 0; a2 < dx; ++a2) {
        const CVector va2(rv.begin() + a2 * dy, rv.begin() + (a2 + 1) * dy);
        const CMatrix p = tm.pi_B.apply(
            tm.left.inner(tm.left.basis_vector(a), tm.left.basis_vector(a2)));
        out += tm.right.inner(ua, p * va2);
      }
    }
    return out;
  };
  m.right_action = [tm](const CVector& u, const CMatrix& c) {
    const std::size_t dy = tm.right.ambient_dim;
    CMatrix rc(dy, dy);
    for (std::size_t b = 0; b < dy; ++b) {
      const CVector col = tm.right.right_action(tm.right.basis_vector(b), c);
      for (std::size_t r = 0; r < dy; ++r) rc(r, b) = col[r];
    }
    const CVector raw =
        kron(CMatrix::identity(tm.left.ambient_dim), rc) * tm.embed(u);
    return tm.coords(raw);
  };
  return m;
}

struct ProductCycle {
  TensorModule tensor;
  LiftContext lift;      // Phi, 1 (x) D, 1 (x) Gamma, Delta = Phi*(1(x)Gamma)Phi
  HermMatrix D_lift;     // Phi*(1 (x) D)Phi
  std::optional<HermMatrix> gamma;
  ModularCycle product;  // the assembled cycle on X (x)_B Y
  CycleReport report;
  IdentityResidual dual_assembly;       // Delta vs sum_n T_n Gamma T_n^*
  IdentityResidual gram_reconstruction; // Phi Phi^* vs the generator Gram
  std::vector<IdentityResidual> twicom;      // commutator factored through Phi
  std::vector<IdentityResidual> compression; // Phi (pi_A (x) 1) Phi^* vs tau
  std::vector<double> phi_cauchy;
  std::size_t n_generators = 0;

  const CMatrix& phi() const { return lift.Phi; }
  const HermMatrix& delta() const { return lift.Delta; }
};

inline ProductCycle kasparov_product(const DifferentiableModule& dm,
                                     const ModularCycle& cycle,
                                     std::size_t n_gen,
                                     const CheckOptions& opt = {}) {
  if (cycle.pi.k != dm.X.algebra.k)
    throw Error("kasparov_product: cycle algebra does not match the module");
  {
    const CycleReport pre = check_cycle(cycle, matrix_units(cycle.pi.k), opt);
    if (!pre.all_pass)
      throw Error("kasparov_product: input cycle fails its defining conditions");
  }

  ProductCycle pc;
  pc.n_generators = n_gen;
  pc.tensor = interior_tensor(dm.X, cycle.Y, cycle.pi);
  CMatrix phi = build_phi(dm, pc.tensor, n_gen, &pc.phi_cauchy);

  const ModularCycle stab = stabilize(cycle, n_gen);
  pc.lift = make_lift_context(std::move(phi), stab.D, stab.Delta);
  pc.D_lift = modular_lift(pc.lift);

  // A acts on the quotient through pi_A (x) 1
  Representation rep;
  rep.k = dm.pi_A.k;
  rep.op_dim = pc.tensor.dim;
  rep.unit_images.reserve(dm.pi_A.unit_images.size());
  const CMatrix idy = CMatrix::identity(cycle.Y.ambient_dim);
  for (const auto& img : dm.pi_A.unit_images)
    rep.unit_images.push_back(pc.tensor.op_to_quotient(kron(img, idy)));

  std::optional<HermMatrix> gq;
  if (cycle.gamma)
    gq = hermitize(pc.tensor.op_to_quotient(
        kron(CMatrix::identity(dm.X.ambient_dim), cycle.gamma->mat())));

  pc.product = make_modular_cycle(quotient_module(pc.tensor), pc.D_lift,
                                  pc.lift.Delta, std::move(rep), std::move(gq));
  pc.gamma = pc.product.gamma;
  pc.report = check_cycle(pc.product, matrix_units(dm.pi_A.k), opt);

  // Delta assembled again, generator by generator, through module adjoints
  {
    CMatrix dual(pc.tensor.dim, pc.tensor.dim);
    for (std::size_t n = 0; n < n_gen; ++n) {
      const CreationOp op = creation_op(dm.xis[n], pc.tensor);
      dual += op.T * cycle.Delta.mat() * op.T_star;
    }
    pc.dual_assembly =
        make_residual("dual_assembly", pc.lift.Delta.mat(), dual);
  }

  // Phi Phi^* against the Gram blocks of the generators
  {
    std::vector<std::vector<CMatrix>> blocks(n_gen);
    for (std::size_t i = 0; i < n_gen; ++i) {
      blocks[i].reserve(n_gen);
      for (std::size_t j = 0; j < n_gen; ++j)
        blocks[i].push_back(dm.X.inner(dm.xis[i], dm.xis[j]));
    }
    pc.gram_reconstruction = make_residual("gram_reconstruction", pc.lift.G,
                                           k_pi(cycle.pi, blocks));
  }

  // twisted commutator of pi_A(a) (x) 1 factored through Phi, unit by unit,
  // and the compression Phi (pi_A(a) (x) 1) Phi^* against the tau blocks
  {
    const CMatrix& dd = pc.D_lift.mat();
    const CMatrix& dl = pc.lift.Delta.mat();
    const CMatrix& bd = pc.lift.D.mat();
    const CMatrix& bg = pc.lift.Gamma.mat();
    const std::size_t ka = dm.pi_A.k, k = dm.X.algebra.k;
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t j = 0; j < ka; ++j) {
        const CMatrix& t = pc.product.pi.unit_images[i * ka + j];
        const CMatrix mid = pc.lift.Phi * t * pc.lift.Phi.adjoint();
        pc.twicom.push_back(make_residual(
            "twicom", dd * t * dl - dl * t * dd,
            pc.lift.Phi.adjoint() * (bd * mid * bg - bg * mid * bd) *
                pc.lift.Phi));

        CMatrix eij(ka, ka);
        eij(i, j) = 1.0;
        const CMatrix tau = dm.tau(eij);
        std::vector<std::vector<CMatrix>> blocks(n_gen);
        for (std::size_t r = 0; r < n_gen; ++r) {
          blocks[r].reserve(n_gen);
          for (std::size_t s = 0; s < n_gen; ++s)
            blocks[r].push_back(tau.block(r * k, s * k, k, k));
        }
        pc.compression.push_back(make_residual("gram_compression", mid,
                                               k_pi(cycle.pi, blocks)));
      }
  }
  return pc;
}

// Omega = (1 (x) Gamma)^{1/2} Phi Delta^{-1/2}, with the inverse square root
// clamped to the range of Delta; Omega^*Omega is the range projection there
inline IdentityResidual omega_isometry_check(const ProductCycle& pc) {
  const EigDecomp ed = eig_herm(pc.lift.Delta);
  double top = 0.0;
  for (double ev : ed.eigenvalues) top = std::max(top, std::abs(ev));
  const double cliff = 1e-12 * top;
  const CMatrix inv_half = matfunc(ed, [&](double x) -> cd {
    return x >= cliff && x > 0.0 ? 1.0 / std::sqrt(x) : 0.0;
  });
  const CMatrix range_proj = matfunc(ed, [&](double x) -> cd {
    return x >= cliff && x > 0.0 ? 1.0 : 0.0;
  });
  const CMatrix ghalf = matfunc(pc.lift.Gamma, [](double x) -> cd {
    return std::sqrt(std::max(x, 0.0));
  });
  const CMatrix omega = ghalf * pc.lift.Phi * inv_half;
  return make_residual("omega_isometry", omega.adjoint() * omega, range_proj);
}

// bounded-transform conditions for a cycle: F selfadjoint, F^2 - 1 equal to
// -(1+D^2)^{-1}, commutators with the represented algebra reported, plus the
// doubly-twisted surrogate |[F, Delta^5 pi(a) Delta^5] pi(b)|
inline CycleReport kasparov_module_check(
    const ModularCycle& c, const std::vector<CMatrix>& algebra_elems) {
  CycleReport rep;
  const EigDecomp de = eig_herm(c.D);
  const CMatrix f = matfunc(de, [](double x) -> cd {
    return x / std::sqrt(1.0 + x * x);
  });
  const CMatrix res = matfunc(de, [](double x) -> cd {
    return 1.0 / (1.0 + x * x);
  });
  const std::size_t n = c.Y.ambient_dim;
  std::vector<CMatrix> images;
  images.reserve(algebra_elems.size());
  for (const auto& a : algebra_elems) images.push_back(c.pi.apply(a));

  {
    ConditionEntry e;
    e.name = "selfadjoint";
    e.residual =
        (f.adjoint() - f).frobenius_norm() / (1.0 + f.frobenius_norm());
    e.pass = e.residual <= 1e-12;
    rep.conditions.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "fredholm_defect";
    const CMatrix defect = f * f - CMatrix::identity(n) + res;
    e.residual = defect.frobenius_norm() / (1.0 + res.frobenius_norm());
    e.pass = e.residual <= 1e-12;
    rep.conditions.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "commutators";
    for (const auto& t : images) {
      e.details.push_back(op_norm(f * t - t * f));
      e.residual = std::max(e.residual, e.details.back());
    }
    e.pass = true;
    e.note = "norms reported per element; boundedness is a refinement claim";
    rep.conditions.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "comcom_surrogate";
    const CMatrix d5 = detail::pow_int(c.Delta.mat(), 5);
    for (const auto& ta : images) {
      const CMatrix core = d5 * ta * d5;
      const CMatrix bracket = f * core - core * f;
      for (const auto& tb : images) {
        e.details.push_back(op_norm(bracket * tb));
        e.residual = std::max(e.residual, e.details.back());
      }
    }
    e.pass = true;
    rep.conditions.push_back(std::move(e));
  }
  if (c.gamma) {
    ConditionEntry e;
    e.name = "grading";
    const CMatrix& g = c.gamma->mat();
    e.residual =
        (g * f + f * g).frobenius_norm() / (1.0 + f.frobenius_norm());
    e.pass = e.residual <= 1e-10;
    rep.conditions.push_back(std::move(e));
  }
  rep.all_pass = true;
  for (const auto& e : rep.conditions) rep.all_pass = rep.all_pass && e.pass;
  return rep;
}

// F T_xi^* - T_xi^* F_Delta together with the lambda-sweep of
// K_l = Gamma^5 Phi Delta^2 S_l Delta^4 D_Delta - D Gamma^4 T_l Gamma^2 Phi Delta^5,
// whose norm decays like (1+lambda)^{-3/4}
inline std::pair<double, DecayFit> f_connection_residual(
    const ProductCycle& pc, const ModularCycle& cycle, const CVector& xi,
    std::vector<double> lambdas = {}) {
  if (lambdas.empty()) lambdas = log_grid(0.1, 1.0e4, 25);
  const cd root(std::sqrt(double(pc.tensor.right.algebra.k)), 0.0);
  const CreationOp op = creation_op(xi, pc.tensor);
  const CMatrix t_star = root * op.T.adjoint();
  const CMatrix f = bounded_transform(cycle.D).mat();
  const CMatrix f_delta = bounded_transform(pc.D_lift).mat();
  const double head = op_norm(f * t_star - t_star * f_delta);

  const CMatrix& phi = pc.lift.Phi;
  const CMatrix& gm = pc.lift.Gamma.mat();
  const CMatrix& dl = pc.lift.Delta.mat();
  const CMatrix& bd = pc.lift.D.mat();
  const CMatrix& dd = pc.D_lift.mat();
  const CMatrix g2 = gm * gm, g4 = g2 * g2, g5 = g4 * gm;
  const CMatrix d2 = dl * dl, d4 = d2 * d2, d5 = d4 * dl;
  std::vector<double> norms;
  norms.reserve(lambdas.size());
  for (double la : lambdas) {
    const CMatrix s = lift_S(pc.lift, la);
    const CMatrix t = lift_T(pc.lift, la);
    const CMatrix k_la =
        g5 * phi * d2 * s * d4 * dd - bd * g4 * t * g2 * phi * d5;
    norms.push_back(op_norm(k_la));
  }
  return {head, fit_decay("estboukas", std::move(lambdas), std::move(norms),
                          0.75)};
}

// chain of differences reducing the connection condition to the k-th power
// hypothesis, with the two approximate-identity steps swept in n and their
// exact finite-dimensional limits appended
inline std::vector<IdentityResidual> repconcon_chain(const ProductCycle& pc,
                                                     const ModularCycle& cycle,
                                                     std::size_t k) {
  std::vector<IdentityResidual> out;
  const CMatrix& phi = pc.lift.Phi;
  const CMatrix bigf = bounded_transform(pc.lift.D).mat();
  const CMatrix f_delta = bounded_transform(pc.D_lift).mat();
  const CMatrix gk = detail::pow_int(pc.lift.Gamma.mat(), k);
  const CMatrix dk = detail::pow_int(pc.lift.Delta.mat(), k);

  out.push_back(make_residual("repconcon_hypothesis", bigf * gk * phi * dk,
                              gk * phi * dk * f_delta, double(k)));
  out.push_back(make_residual("firinccon", bigf * gk * phi,
                              gk * phi * f_delta, double(k)));
  out.push_back(
      make_residual("secinccon", phi * f_delta, bigf * phi));
  {
    // per-generator rows of the previous difference
    const CMatrix diff = phi * f_delta - bigf * phi;
    const std::size_t dy = cycle.Y.ambient_dim;
    IdentityResidual e;
    e.name = "fouinccon";
    e.lhs_norm = op_norm(phi * f_delta);
    e.rhs_norm = op_norm(bigf * phi);
    for (std::size_t nblk = 0; nblk < pc.n_generators; ++nblk)
      e.residual = std::max(
          e.residual, op_norm(diff.block(nblk * dy, 0, dy, pc.tensor.dim)));
    out.push_back(std::move(e));
  }

  const EigDecomp deig = eig_herm(pc.lift.Delta);
  const EigDecomp geig = eig_herm(cycle.Delta);
  const CMatrix lead = matfunc(pc.lift.Gamma, [](double x) -> cd {
    return std::sqrt(std::max(x, 0.0));
  }) * phi;
  const std::size_t nx = pc.tensor.dim;
  const CMatrix zero_x(lead.rows(), nx);
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    const CMatrix vn = matfunc(deig, [&](double x) -> cd {
      const double xk = std::pow(std::max(x, 0.0), double(k));
      return xk / (xk + 1.0 / double(n));
    });
    out.push_back(
        make_residual("delta_approx_id", lead * vn, lead, double(n)));
  }
  {
    double top = 0.0;
    for (double ev : deig.eigenvalues) top = std::max(top, std::abs(ev));
    const CMatrix pker = matfunc(deig, [&](double x) -> cd {
      return x < 1e-12 * top ? 1.0 : 0.0;
    });
    out.push_back(make_residual("delta_approx_id_limit", lead * pker, zero_x));
  }
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    const CMatrix wn = matfunc(geig, [&](double x) -> cd {
      const double xk = std::pow(std::max(x, 0.0), double(k));
      return xk / (xk + 1.0 / double(n));
    });
    out.push_back(make_residual(
        "gamma_approx_id", diag_lift(wn, pc.n_generators) * phi, phi,
        double(n)));
  }
  {
    double top = 0.0;
    for (double ev : geig.eigenvalues) top = std::max(top, std::abs(ev));
    const CMatrix pker = matfunc(geig, [&](double x) -> cd {
      return x < 1e-12 * top ? 1.0 : 0.0;
    });
    out.push_back(make_residual("gamma_approx_id_limit",
                                diag_lift(pker, pc.n_generators) * phi,
                                CMatrix(phi.rows(), phi.cols())));
  }
  return out;
}

// ----------------------------------------------------------------------------
// deterministic instances

// X = (p x k)-matrix module over M_k, full matrix algebra M_p acting on the
// left, generators with geometric norm decay so the Gram tail is certified
inline DifferentiableModule random_differentiable_module(std::uint64_t seed,
                                                         std::size_t p,
                                                         std::size_t k,
                                                         std::size_t n_gen) {
  Rng rng(seed, 0xD1FF);
  HilbertModule x = matrix_module(p, k);
  Representation pi;
  pi.k = p;
  pi.op_dim = p * k;
  pi.unit_images.reserve(p * p);
  const CMatrix ik = CMatrix::identity(k);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      CMatrix e(p, p);
      e(i, j) = 1.0;
      pi.unit_images.push_back(kron(e, ik));
    }
  std::vector<CVector> xis;
  xis.reserve(n_gen);
  double w = 1.0;
  for (std::size_t n = 0; n < n_gen; ++n) {
    CVector v = random_vector(rng, p * k);
    const double len = vnorm(v);
    if (len > 0.0) v = cd(w / len, 0.0) * v;
    xis.push_back(std::move(v));
    w *= 0.5;
  }
  return make_differentiable_module(std::move(x), std::move(pi),
                                    std::move(xis));
}

// the one-generator module over C whose product with any cycle returns it
inline DifferentiableModule trivial_module() {
  return make_differentiable_module(hilbert_space(1), identity_rep(1),
                                    {CVector{cd(1.0)}});
}

}  // namespace modkk
