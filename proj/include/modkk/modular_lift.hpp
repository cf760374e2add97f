#pragma once

// Lift data (Gamma, Phi, D) -> (Delta, G, D_Delta): Delta = Phi* Gamma Phi,
// G = Phi Phi*, D_Delta = Phi* D Phi, with the twisted commutator
// d_Gamma(G) = D G Gamma - Gamma G D driving every identity here.  Each
// *_residual routine assembles both sides of its identity from scratch and
// returns the operator-norm defect.

#include <optional>
#include <string>
#include <vector>

#include "decay.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "modular_cycle.hpp"

namespace modkk {

struct LiftContext {
  CMatrix Phi;       // X -> Y
  HermMatrix D;      // on Y
  HermMatrix Gamma;  // on Y, positive
  HermMatrix Delta;  // Phi* Gamma Phi, on X
  CMatrix G;         // Phi Phi*, on Y
  CMatrix d_Gamma_G; // D G Gamma - Gamma G D
  std::optional<CMatrix> rho_Gamma_G;  // Gamma^{-1/2} d_Gamma(G) Gamma^{-1/2}
  std::string rho_note;
  double r = 0.0;    // > |Delta|^2 + |Gamma|^2
  bool dense_image = true;  // sigma_min(Phi) above threshold

  std::size_t dim_X() const { return Phi.cols(); }
  std::size_t dim_Y() const { return Phi.rows(); }

  const CMatrix& rho() const {
    if (!rho_Gamma_G)
      throw NearSingular("rho_Gamma_G unavailable: " + rho_note, {});
    return *rho_Gamma_G;
  }
};

inline LiftContext make_lift_context(CMatrix phi, HermMatrix d,
                                     HermMatrix gamma, double r = -1.0) {
  if (d.dim() != phi.rows() || gamma.dim() != phi.rows())
    throw Error("make_lift_context: Phi must map into the space of D, Gamma");
  {
    EigDecomp ge = eig_herm(gamma);
    const double top = std::max(std::abs(ge.eigenvalues.front()),
                                std::abs(ge.eigenvalues.back()));
    if (ge.eigenvalues.front() < -1e-10 * (1.0 + top))
      throw DomainError("make_lift_context: Gamma not positive semidefinite");
  }
  LiftContext ctx;
  ctx.Phi = std::move(phi);
  ctx.D = std::move(d);
  ctx.Gamma = std::move(gamma);
  ctx.Delta = HermMatrix(
      hermitize(ctx.Phi.adjoint() * ctx.Gamma.mat() * ctx.Phi));
  ctx.G = ctx.Phi * ctx.Phi.adjoint();
  ctx.d_Gamma_G =
      ctx.D.mat() * ctx.G * ctx.Gamma.mat() - ctx.Gamma.mat() * ctx.G * ctx.D.mat();
  try {
    CMatrix ih = guarded_inv_power(ctx.Gamma, -0.5);
    ctx.rho_Gamma_G = ih * ctx.d_Gamma_G * ih;
  } catch (const NearSingular& ex) {
    ctx.rho_note = ex.what();
  }

  const double floor_sq =
      op_norm(ctx.Delta.mat()) * op_norm(ctx.Delta.mat()) +
      op_norm(ctx.Gamma.mat()) * op_norm(ctx.Gamma.mat());
  if (r < 0.0) {
    ctx.r = std::max(1.25 * floor_sq, 1.0);
  } else {
    if (r <= floor_sq)
      throw DomainError(
          "make_lift_context: r must exceed |Delta|^2 + |Gamma|^2");
    ctx.r = r;
  }

  std::vector<double> sv = singular_values(ctx.Phi);
  const double smax = sv.empty() ? 0.0 : sv.front();
  const double smin = sv.empty() ? 0.0 : sv.back();
  ctx.dense_image =
      ctx.Phi.cols() <= ctx.Phi.rows() && smin > 1e-10 * smax && smax > 0.0;
  return ctx;
}

struct IdentityResidual {
  std::string name;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double residual = 0.0;  // operator norm of lhs - rhs
  std::optional<double> lambda;

  double relative() const {
    return residual / (1.0 + std::max(lhs_norm, rhs_norm));
  }
};

inline IdentityResidual make_residual(std::string name, const CMatrix& lhs,
                                      const CMatrix& rhs,
                                      std::optional<double> lambda = {}) {
  IdentityResidual out;
  out.name = std::move(name);
  out.lhs_norm = op_norm(lhs);
  out.rhs_norm = op_norm(rhs);
  out.residual = op_norm(lhs - rhs);
  out.lambda = lambda;
  return out;
}

// the standing assumption on (Gamma, Phi, D): the twisted commutator exists,
// is anti-selfadjoint, and factors through Gamma^{1/2}
inline CycleReport check_assumption_diff(const LiftContext& ctx) {
  CycleReport rep;
  {
    ConditionEntry e;
    e.name = "twisted_commutator_assembled";
    e.pass = true;
    e.details = {op_norm(ctx.d_Gamma_G)};
    rep.conditions.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "anti_selfadjoint";
    e.residual = (ctx.d_Gamma_G.adjoint() + ctx.d_Gamma_G).frobenius_norm() /
                 (1.0 + ctx.d_Gamma_G.frobenius_norm());
    e.pass = e.residual <= 1e-10;
    rep.conditions.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "rho_reconstruction";
    const CMatrix& rho = ctx.rho();  // NearSingular when Gamma^{1/2} fails
    CMatrix half = matfunc(ctx.Gamma, [](double x) -> cd {
      return std::sqrt(std::max(x, 0.0));
    });
    const CMatrix back = half * rho * half;
    e.residual = op_norm(back - ctx.d_Gamma_G) /
                 (1.0 + op_norm(ctx.d_Gamma_G));
    e.pass = e.residual <= 1e-9;
    e.details = {op_norm(rho)};
    rep.conditions.push_back(std::move(e));
  }
  rep.all_pass = true;
  for (const auto& e : rep.conditions) rep.all_pass = rep.all_pass && e.pass;
  return rep;
}

// D_Delta = Phi* D Phi; the straight-commutator identity
// (Phi*DPhi)Delta - Delta(Phi*DPhi) = Phi* d_Gamma(G) Phi is exact, so a
// violation indicates corrupted context data
inline HermMatrix modular_lift(const LiftContext& ctx) {
  const CMatrix m = ctx.Phi.adjoint() * ctx.D.mat() * ctx.Phi;
  const CMatrix lhs = m * ctx.Delta.mat() - ctx.Delta.mat() * m;
  const CMatrix rhs = ctx.Phi.adjoint() * ctx.d_Gamma_G * ctx.Phi;
  const double rel =
      op_norm(lhs - rhs) / (1.0 + std::max(op_norm(lhs), op_norm(rhs)));
  if (rel > 1e-10)
    throw Error("modular_lift: commutator identity violated, relative defect " +
                std::to_string(rel));
  return hermitize(m);
}

// resolvent form of the commutator identity, z off the positive half line:
// (Phi*DPhi)(Delta-z)^{-1} =
//     (Delta-z)^{-1}(Phi*DPhi) - (Delta-z)^{-1}Phi*d_Gamma(G)Phi(Delta-z)^{-1}
inline IdentityResidual modadjinv_residual(const LiftContext& ctx, cd z) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw DomainError("modadjinv_residual: z must avoid [0, infinity)");
  const CMatrix m = ctx.Phi.adjoint() * ctx.D.mat() * ctx.Phi;
  const CMatrix w = ctx.Phi.adjoint() * ctx.d_Gamma_G * ctx.Phi;
  const CMatrix res = herm_resolvent(ctx.Delta, z);
  return make_residual("modadjinv", m * res, res * m - res * w * res);
}

inline std::vector<IdentityResidual> modadjinv_grid(const LiftContext& ctx) {
  const std::vector<cd> zs = {cd(-1.0, 0.0), cd(-10.0, 0.0), cd(0.0, 1.0),
                              cd(1.0, 2.0)};
  std::vector<IdentityResidual> out;
  out.reserve(zs.size());
  for (cd z : zs) out.push_back(modadjinv_residual(ctx, z));
  return out;
}

// values of (1/n)|(Delta+1/n)^{-1} Phi* d_Gamma(G) Phi (Delta+1/n)^{-1} Delta|
// together with the guaranteed decay bound n^{-1/2}|Gamma^{1/2}Phi||rho|
inline std::vector<double> strlimzer_sweep(const LiftContext& ctx,
                                           const std::vector<std::size_t>& ns) {
  const CMatrix& rho = ctx.rho();
  CMatrix half = matfunc(ctx.Gamma, [](double x) -> cd {
    return std::sqrt(std::max(x, 0.0));
  });
  const double lead = op_norm(half * ctx.Phi);
  const double rho_norm = op_norm(rho);
  const CMatrix w = ctx.Phi.adjoint() * ctx.d_Gamma_G * ctx.Phi;
  std::vector<double> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) {
    if (n == 0) throw DomainError("strlimzer_sweep: n must be positive");
    const CMatrix res = herm_resolvent(ctx.Delta, cd(-1.0 / double(n), 0.0));
    const double val =
        op_norm(res * w * res * ctx.Delta.mat()) / double(n);
    const double bound =
        lead * rho_norm / std::sqrt(double(n)) * (1.0 + 1e-9);
    if (val > bound)
      throw Error("strlimzer_sweep: decay bound violated at n = " +
                  std::to_string(n));
    out.push_back(val);
  }
  return out;
}

// the uniform (n-independent) estimate behind the same lemma; always <= |rho|
inline double strlimzer_uniform_norm(const LiftContext& ctx, std::size_t n) {
  if (n == 0) throw DomainError("strlimzer_uniform_norm: n must be positive");
  const CMatrix w = ctx.Phi.adjoint() * ctx.d_Gamma_G * ctx.Phi;
  const CMatrix res = herm_resolvent(ctx.Delta, cd(-1.0 / double(n), 0.0));
  return op_norm(res * w * res) / double(n);
}

// Delta^2 (i + D_Delta)^{-1} factored through the ambient resolvent:
//   Phi*Gamma(i+D)^{-1}((i(G-1)Gamma + d_Gamma(G))Phi(i+D_Delta)^{-1} + GammaPhi)
inline IdentityResidual cruxide_residual(const LiftContext& ctx) {
  const HermMatrix d_delta = modular_lift(ctx);
  const CMatrix inv_x = herm_resolvent(d_delta, cd(0.0, -1.0));
  const CMatrix inv_y = herm_resolvent(ctx.D, cd(0.0, -1.0));
  const CMatrix& gm = ctx.Gamma.mat();
  const std::size_t ny = ctx.dim_Y();
  const CMatrix lhs = ctx.Delta.mat() * ctx.Delta.mat() * inv_x;
  const CMatrix inner =
      (cd(0.0, 1.0) * ((ctx.G - CMatrix::identity(ny)) * gm) + ctx.d_Gamma_G) *
          ctx.Phi * inv_x +
      gm * ctx.Phi;
  const CMatrix rhs = ctx.Phi.adjoint() * gm * inv_y * inner;
  return make_residual("cruxide", lhs, rhs);
}

// second-order variant on X -> Y with the straight commutator
// d_Gamma(Gamma G) = D Gamma G Gamma - Gamma^2 G D
inline IdentityResidual cruxideI_residual(const LiftContext& ctx) {
  const HermMatrix d_delta = modular_lift(ctx);
  const CMatrix& d = ctx.D.mat();
  const CMatrix& gm = ctx.Gamma.mat();
  const CMatrix& phi = ctx.Phi;
  EigDecomp de = eig_herm(ctx.D);
  const CMatrix inv = matfunc(de, [](double x) -> cd {
    return 1.0 / (1.0 + x * x);
  });
  const CMatrix d_gg = d * gm * ctx.G * gm - gm * gm * ctx.G * d;
  const CMatrix dd = d_delta.mat();
  const CMatrix delta2 = ctx.Delta.mat() * ctx.Delta.mat();
  const CMatrix lhs =
      d * d * inv * phi * delta2 - inv * gm * gm * phi * dd * dd;
  const CMatrix rhs = d * inv * ctx.d_Gamma_G * ctx.G * gm * phi +
                      d * inv * gm * ctx.G * ctx.d_Gamma_G * phi +
                      inv * d_gg * phi * dd;
  return make_residual("cruxideI", lhs, rhs);
}

// ambient-side resolvent on Y for the two-resolvent identity
inline CMatrix lift_T(const LiftContext& ctx, double lambda) {
  const std::size_t ny = ctx.dim_Y();
  const CMatrix& gm = ctx.Gamma.mat();
  return dense_inverse(CMatrix::identity(ny) +
                       cd(lambda / ctx.r, 0.0) * (gm * gm) +
                       ctx.D.mat() * ctx.D.mat());
}

// module-side resolvent on X
inline CMatrix lift_S(const LiftContext& ctx, double lambda) {
  const HermMatrix d_delta = modular_lift(ctx);
  const std::size_t nx = ctx.dim_X();
  const CMatrix& dm = ctx.Delta.mat();
  return dense_inverse(CMatrix::identity(nx) +
                       cd(lambda / ctx.r, 0.0) * (dm * dm) +
                       d_delta.mat() * d_delta.mat());
}

// two-resolvent comparison: Phi Delta^2 S_l - T_l Gamma^2 Phi expanded in
// twisted commutators
inline IdentityResidual cruxideII_residual(const LiftContext& ctx,
                                           double lambda) {
  if (lambda < 0.0)
    throw DomainError("cruxideII_residual: lambda must be nonnegative");
  const HermMatrix d_delta = modular_lift(ctx);
  const CMatrix& d = ctx.D.mat();
  const CMatrix& gm = ctx.Gamma.mat();
  const CMatrix& phi = ctx.Phi;
  const CMatrix& dm = ctx.Delta.mat();
  const CMatrix t = lift_T(ctx, lambda);
  const CMatrix s = lift_S(ctx, lambda);
  const CMatrix delta2 = dm * dm;
  const CMatrix gamma2 = gm * gm;
  const CMatrix d_gg = d * gm * ctx.G * gm - gamma2 * ctx.G * d;
  const CMatrix lhs = phi * delta2 * s - t * gamma2 * phi;
  const CMatrix rhs =
      t * (phi * delta2 - gamma2 * phi + d_gg * phi * d_delta.mat()) * s +
      t * d *
          (ctx.d_Gamma_G * ctx.G * gm * phi + gm * ctx.G * ctx.d_Gamma_G * phi) *
          s;
  return make_residual("cruxideII", lhs, rhs, lambda);
}

struct CompacresReport {
  DecayFit sigma_decay;          // singular values of Delta(i+D_Delta)^{-1}
  IdentityResidual factorization;
};

inline CompacresReport compacres_bound(const LiftContext& ctx) {
  const HermMatrix d_delta = modular_lift(ctx);
  const CMatrix inv = herm_resolvent(d_delta, cd(0.0, -1.0));
  std::vector<double> sigmas = singular_values(ctx.Delta.mat() * inv);
  std::vector<double> idx(sigmas.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = double(i + 1);
  CompacresReport out;
  out.sigma_decay = fit_decay("compacres", std::move(idx), std::move(sigmas));
  out.factorization = cruxide_residual(ctx);
  return out;
}

// deterministic lift data with positive Gamma and a well-conditioned Phi
inline LiftContext random_lift_context(std::uint64_t seed, std::size_t dim_x,
                                       std::size_t dim_y,
                                       double spectral_radius = 1.0) {
  Rng rng(seed, 0x11F7);
  HermMatrix d = random_hermitian(rng, dim_y, spectral_radius);
  HermMatrix gamma = random_positive(rng, dim_y, spectral_radius, 8.0);
  CMatrix phi = random_gaussian_matrix(rng, dim_y, dim_x);
  const double top = op_norm(phi);
  if (top > 0.0) phi *= cd(1.0 / top, 0.0);
  return make_lift_context(std::move(phi), std::move(d), std::move(gamma));
}

}  // namespace modkk
