#pragma once

// Resolvent/series machinery for a pair (D, Delta) with r > |Delta|^2:
//   R_l = (l + 1 + D^2)^{-1},  S_l = (l Delta^2/r + 1 + D^2)^{-1},
//   K = 1 - Delta^2/r,  X_l = l R_l K,  I(T) = [D^2, T],
//   L_l = I(S_l K l Delta^3) R_l,  L_l(m) = I((1 - X_l^m) S_l K l Delta^3) R_l.
// Sums of the shape sum_n l^n K^n M R_l^{n+1} are evaluated exactly in the
// Delta-eigenbasis (rows) and D-eigenbasis (columns), where the geometric
// series collapses entrywise.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decay.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "modular_lift.hpp"
#include "quadrature.hpp"

namespace modkk {

struct DeltaSingular : Error {
  using Error::Error;
};

struct TransformContext {
  HermMatrix D;
  HermMatrix Delta;
  double r = 0.0;  // strictly above |Delta|^2
  EigDecomp eig_d;
  EigDecomp eig_delta;
  CMatrix K;  // 1 - Delta^2/r

  std::size_t dim() const { return D.dim(); }

  CMatrix d_pow(double p) const {  // (1 + D^2)^p
    return matfunc(eig_d, [p](double x) -> cd {
      return std::pow(1.0 + x * x, p);
    });
  }

  CMatrix delta_pow(double p) const {
    return matfunc(eig_delta, [p](double x) -> cd {
      return std::pow(std::max(x, 0.0), p);
    });
  }

  CMatrix R(double lambda) const {
    return matfunc(eig_d, [lambda](double x) -> cd {
      return 1.0 / (lambda + 1.0 + x * x);
    });
  }

  // l Delta^2/r + 1 + D^2 is >= 1, so fractional powers are safe
  EigDecomp s_eig(double lambda) const {
    const CMatrix& dm = Delta.mat();
    const HermMatrix a = hermitize(cd(lambda / r, 0.0) * (dm * dm) +
                                   CMatrix::identity(dim()) +
                                   D.mat() * D.mat());
    return eig_herm(a);
  }

  CMatrix S_pow(double lambda, double p) const {
    EigDecomp e = s_eig(lambda);
    return matfunc(e, [p](double x) -> cd { return std::pow(x, -p); });
  }

  CMatrix S(double lambda) const { return S_pow(lambda, 1.0); }

  CMatrix X(double lambda) const {
    return cd(lambda, 0.0) * (R(lambda) * K);
  }

  CMatrix I_of(const CMatrix& t) const {
    const CMatrix d2 = D.mat() * D.mat();
    return d2 * t - t * d2;
  }

  CMatrix L(double lambda) const {
    return cd(lambda, 0.0) *
           (I_of(S(lambda) * K * delta_pow(3.0)) * R(lambda));
  }

  CMatrix L_trunc(double lambda, std::size_t m) const {
    const CMatrix x = X(lambda);
    CMatrix xm = CMatrix::identity(dim());
    for (std::size_t i = 0; i < m; ++i) xm = xm * x;
    return cd(lambda, 0.0) *
           (I_of((CMatrix::identity(dim()) - xm) * S(lambda) * K *
                 delta_pow(3.0)) *
            R(lambda));
  }
};

inline TransformContext make_transform_context(HermMatrix d, HermMatrix delta,
                                               double r = -1.0) {
  if (d.dim() != delta.dim())
    throw Error("make_transform_context: dimension mismatch");
  TransformContext ctx;
  ctx.eig_delta = eig_herm(delta);
  const double top = std::max(std::abs(ctx.eig_delta.eigenvalues.front()),
                              std::abs(ctx.eig_delta.eigenvalues.back()));
  if (ctx.eig_delta.eigenvalues.front() < -1e-10 * (1.0 + top))
    throw DomainError("make_transform_context: Delta not positive semidefinite");
  const double nd2 = top * top;
  if (r < 0.0) {
    ctx.r = std::max(2.0 * nd2, 1.0);
  } else {
    if (r <= nd2)
      throw DomainError("make_transform_context: r must exceed |Delta|^2");
    ctx.r = r;
  }
  ctx.D = std::move(d);
  ctx.Delta = std::move(delta);
  ctx.eig_d = eig_herm(ctx.D);
  const CMatrix& dm = ctx.Delta.mat();
  ctx.K = CMatrix::identity(ctx.D.dim()) - cd(1.0 / ctx.r, 0.0) * (dm * dm);
  return ctx;
}

inline HermMatrix bounded_transform(const HermMatrix& d) {
  return HermMatrix(matfunc(d, [](double x) -> cd {
    return x / std::sqrt(1.0 + x * x);
  }));
}

// (1/pi) int l^{-1/2} R_l D dl, the integral representation of the bounded
// transform; used to cross-check the quadrature layer
inline CMatrix bounded_transform_integral(const HermMatrix& d,
                                          const QuadratureSpec& spec = {}) {
  EigDecomp e = eig_herm(d);
  CMatrix out = integrate_halfline_sqrt(
      [&](double lambda) {
        CMatrix r = matfunc(e, [lambda](double x) -> cd {
          return 1.0 / (lambda + 1.0 + x * x);
        });
        return r * d.mat();
      },
      spec);
  out *= cd(1.0 / 3.14159265358979323846, 0.0);
  return out;
}

// (1/pi) int (l r)^{-1/2} Delta S_l D dl; defined on the range of Delta, a
// genuine matrix once Delta is invertible
inline CMatrix modular_transform(const TransformContext& ctx,
                                 const QuadratureSpec& spec = {}) {
  const double top = ctx.eig_delta.eigenvalues.back();
  if (ctx.eig_delta.eigenvalues.front() <= 1e-12 * std::max(top, 1.0))
    throw DeltaSingular("modular_transform: Delta must be strictly positive");
  CMatrix out = integrate_halfline_sqrt(
      [&](double lambda) {
        return ctx.Delta.mat() * ctx.S(lambda) * ctx.D.mat();
      },
      spec);
  out *= cd(1.0 / (3.14159265358979323846 * std::sqrt(ctx.r)), 0.0);
  return out;
}

// B(p,q) (1 + L^2)^{-q} = int l^{p-1} (1 + l + L^2)^{-p-q} dl
inline IdentityResidual beta_resolvent_check(const HermMatrix& lam, double p,
                                             double q,
                                             const QuadratureSpec& spec = {}) {
  if (p <= 0.0 || q <= 0.0)
    throw DomainError("beta_resolvent_check: p, q must be positive");
  EigDecomp e = eig_herm(lam);
  CMatrix lhs = matfunc(e, [q](double x) -> cd {
    return std::pow(1.0 + x * x, -q);
  });
  lhs *= cd(std::beta(p, q), 0.0);
  CMatrix rhs = integrate_halfline(
      [&](double lambda) {
        CMatrix m = matfunc(e, [&](double x) -> cd {
          return std::pow(1.0 + lambda + x * x, -p - q);
        });
        m *= cd(std::pow(lambda, p - 1.0), 0.0);
        return m;
      },
      spec);
  return make_residual("betide", lhs, rhs);
}

// sum_{n=0}^{N} l^n K^n M R_l^{n+1}, collapsed entrywise between the Delta-
// and D-eigenbases; n_terms < 0 gives the full sum.  Always converges since
// |l K-eig R-eig| <= l/(1+l) < 1.
inline CMatrix geometric_kernel_sum(const TransformContext& ctx, double lambda,
                                    const CMatrix& m,
                                    long long n_terms = -1) {
  const CMatrix& u = ctx.eig_delta.eigenvectors;
  const CMatrix& v = ctx.eig_d.eigenvectors;
  CMatrix mt = u.adjoint() * m * v;
  const std::size_t n = ctx.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const double kappa = 1.0 - ctx.eig_delta.eigenvalues[i] *
                                   ctx.eig_delta.eigenvalues[i] / ctx.r;
    for (std::size_t k = 0; k < n; ++k) {
      const double rho =
          1.0 / (lambda + 1.0 + ctx.eig_d.eigenvalues[k] *
                                    ctx.eig_d.eigenvalues[k]);
      const double x = lambda * kappa * rho;
      double factor = rho / (1.0 - x);
      if (n_terms >= 0)
        factor *= 1.0 - std::pow(x, double(n_terms + 1));
      mt(i, k) *= factor;
    }
  }
  return u * mt * v.adjoint();
}

// S_l = sum X_l^n R_l = (1 - X_l)^{-1} R_l: returns the closed-form defect
// and verifies the geometric tail bound on the explicit partial sum
inline IdentityResidual series_expansion_check(const TransformContext& ctx,
                                               double lambda,
                                               std::size_t n_terms) {
  const CMatrix s = ctx.S(lambda);
  const CMatrix x = ctx.X(lambda);
  const CMatrix r = ctx.R(lambda);
  const CMatrix closed =
      dense_inverse(CMatrix::identity(ctx.dim()) - x) * r;
  CMatrix partial = r;  // Horner: R + X(R + X(R + ...))
  for (std::size_t i = 0; i < n_terms; ++i) partial = r + x * partial;
  const double q = lambda / (1.0 + lambda);
  const double tail_bound = op_norm(s) * std::pow(q, double(n_terms) + 1.0) /
                            (1.0 - q);
  const double tail = op_norm(s - partial);
  if (tail > tail_bound * (1.0 + 1e-9) + 1e-14 * op_norm(s))
    throw Error("series_expansion_check: geometric tail bound violated");
  return make_residual("firreside", s, closed, lambda);
}

// S_l Delta^3 = sum Delta^3 K^n R^{n+1} l^n - sum K^n L_l R^{n+1} l^n
//               - (1 - X_l)^{-1} I(R_l Delta^3) R_l
inline IdentityResidual prealg_decomposition(const TransformContext& ctx,
                                             double lambda) {
  if (lambda < 0.0)
    throw DomainError("prealg_decomposition: lambda must be nonnegative");
  const CMatrix d3 = ctx.delta_pow(3.0);
  const CMatrix lhs = ctx.S(lambda) * d3;
  const CMatrix sum1 =
      d3 * geometric_kernel_sum(ctx, lambda, CMatrix::identity(ctx.dim()));
  const CMatrix sum2 = geometric_kernel_sum(ctx, lambda, ctx.L(lambda));
  const CMatrix r = ctx.R(lambda);
  const CMatrix tail =
      dense_inverse(CMatrix::identity(ctx.dim()) - ctx.X(lambda)) *
      ctx.I_of(r * d3) * r;
  return make_residual("prealgideI", lhs, sum1 - sum2 - tail, lambda);
}

// (1/pi) int (l r)^{-1/2} sum_n Delta^6 K^n R^{n+1} l^n dl
//   = Delta^5 (1 + D^2)^{-1/2}
inline IdentityResidual sqrt_integral_check(const TransformContext& ctx,
                                            const QuadratureSpec& spec = {}) {
  const CMatrix d6 = ctx.delta_pow(6.0);
  CMatrix lhs = integrate_halfline_sqrt(
      [&](double lambda) {
        return d6 *
               geometric_kernel_sum(ctx, lambda, CMatrix::identity(ctx.dim()));
      },
      spec);
  lhs *= cd(1.0 / (3.14159265358979323846 * std::sqrt(ctx.r)), 0.0);
  const CMatrix rhs = ctx.delta_pow(5.0) * ctx.d_pow(-0.5);
  return make_residual("comboutraI", lhs, rhs);
}

// norm of Delta^5 F_D (1+D^2)^p
//   - [(1/pi) int (l r)^{-1/2} Delta^3 (1-X_l)^{-1} Delta^3 R_l dl] D (1+D^2)^p
inline double comparison_residual(const TransformContext& ctx, double p,
                                  const QuadratureSpec& spec = {}) {
  if (p < 0.0 || p > 0.49)
    throw DomainError("comparison_residual: p must lie in [0, 0.49]");
  const CMatrix d3 = ctx.delta_pow(3.0);
  const CMatrix dp = ctx.d_pow(p);
  CMatrix integral = integrate_halfline_sqrt(
      [&](double lambda) {
        return d3 *
               dense_inverse(CMatrix::identity(ctx.dim()) - ctx.X(lambda)) *
               d3 * ctx.R(lambda);
      },
      spec);
  integral *= cd(1.0 / (3.14159265358979323846 * std::sqrt(ctx.r)), 0.0);
  const CMatrix lhs = ctx.delta_pow(5.0) * bounded_transform(ctx.D).mat() * dp;
  const CMatrix rhs = integral * ctx.D.mat() * dp;
  return op_norm(lhs - rhs);
}

// sum_n (1+D^2)^p R^{2n+2} l^{2n} = (1+D^2)^{p-1} (2l + 1 + D^2)^{-1};
// the left side is summed by explicit matrix products
inline IdentityResidual intrig_check(const TransformContext& ctx,
                                     double lambda, double p,
                                     std::size_t n_terms = 0) {
  const CMatrix r = ctx.R(lambda);
  const CMatrix r2 = r * r;
  const double q2 = std::pow(lambda / (1.0 + lambda), 2.0);
  if (n_terms == 0) {
    // enough terms for a 1e-13 geometric tail, capped
    n_terms = 64;
    if (q2 > 0.0)
      n_terms = std::min<std::size_t>(
          100000, std::size_t(std::log(1e-13) / std::log(q2)) + 2);
  }
  CMatrix term = ctx.d_pow(p) * r2;
  CMatrix sum = term;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    term = cd(lambda * lambda, 0.0) * (term * r2);
    sum += term;
    if (term.frobenius_norm() < 1e-17 * sum.frobenius_norm()) break;
  }
  const CMatrix rhs = matfunc(ctx.eig_d, [&](double x) -> cd {
    return std::pow(1.0 + x * x, p - 1.0) / (2.0 * lambda + 1.0 + x * x);
  });
  return make_residual("intrig", sum, rhs, lambda);
}

// sum_{n<=N} (Delta^2/r) K^{2n} (2 - Delta^2/r) = 1 - K^{2(N+1)}
inline IdentityResidual conkay_check(const TransformContext& ctx,
                                     std::size_t big_n) {
  const std::size_t n = ctx.dim();
  const CMatrix& dm = ctx.Delta.mat();
  const CMatrix a = cd(1.0 / ctx.r, 0.0) * (dm * dm);
  const CMatrix two_minus = cd(2.0, 0.0) * CMatrix::identity(n) - a;
  const CMatrix k2 = ctx.K * ctx.K;
  CMatrix pow = CMatrix::identity(n);
  CMatrix lhs(n, n);
  for (std::size_t i = 0; i <= big_n; ++i) {
    lhs += a * pow * two_minus;
    pow = pow * k2;
  }
  const CMatrix rhs = CMatrix::identity(n) - pow;  // pow = K^{2(N+1)} now
  return make_residual("conkay", lhs, rhs);
}

struct WeasqrReport {
  std::vector<std::size_t> terms;   // partial-sum lengths N
  std::vector<double> traces;       // tr(rho * partial_N), nondecreasing
  double limit = 0.0;               // tr(rho * Delta)
};

// (1/(pi sqrt r)) sum_{n<=N} Delta^2 K^n B(n+1/2, 1/2) increases to Delta;
// tested against a state rho
inline WeasqrReport weasqr_check(const TransformContext& ctx,
                                 const CMatrix& rho,
                                 const std::vector<std::size_t>& n_list) {
  const std::size_t n = ctx.dim();
  if (rho.rows() != n || rho.cols() != n)
    throw DomainError("weasqr_check: state has wrong shape");
  if (hermitian_defect(rho) > 1e-10 * (1.0 + rho.frobenius_norm()) ||
      std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-8)
    throw DomainError("weasqr_check: rho is not a density matrix");
  std::size_t n_max = 0;
  for (std::size_t v : n_list) n_max = std::max(n_max, v);
  std::vector<double> beta_vals(n_max + 1);
  for (std::size_t k = 0; k <= n_max; ++k)
    beta_vals[k] = std::beta(double(k) + 0.5, 0.5);

  WeasqrReport rep;
  rep.terms = n_list;
  const double pi = 3.14159265358979323846;
  for (std::size_t big_n : n_list) {
    CMatrix partial = matfunc(ctx.eig_delta, [&](double x) -> cd {
      const double xs = std::max(x, 0.0);
      const double kap = 1.0 - xs * xs / ctx.r;
      double acc = 0.0, kp = 1.0;
      for (std::size_t k = 0; k <= big_n; ++k) {
        acc += kp * beta_vals[k];
        kp *= kap;
      }
      return xs * xs * acc / (pi * std::sqrt(ctx.r));
    });
    rep.traces.push_back((rho * partial).trace().real());
  }
  rep.limit = (rho * ctx.Delta.mat()).trace().real();
  return rep;
}

enum class EstimateId {
  eleestI,    // |Delta S^{1/2}|            <= sqrt(2r) (1+l)^{-1/2}
  eleestII,   // |Delta^2 S Delta^{1/2}|    ~ (1+l)^{-1}
  eleestIV,   // |Delta D S Delta^{1/2}|    ~ (1+l)^{-1/2}
  eleestV,    // |D S Delta^2 (i+D)^{-1}|   ~ (1+l)^{-1}
  eleestVI,   // |S^{3/2} Delta^3 (i+D)^{-1}| ~ (1+l)^{-9/8}
  esterr,     // |Delta^2 L_l|              ~ (1+l)^{-1/2}
  truerr      // sup_m |Delta^2 L_l(m) (i+D)^{-1}| ~ (1+l)^{-1/8}
};

inline const char* estimate_name(EstimateId id) {
  switch (id) {
    case EstimateId::eleestI: return "eleestI";
    case EstimateId::eleestII: return "eleestII";
    case EstimateId::eleestIV: return "eleestIV";
    case EstimateId::eleestV: return "eleestV";
    case EstimateId::eleestVI: return "eleestVI";
    case EstimateId::esterr: return "esterr";
    case EstimateId::truerr: return "truerr";
  }
  return "unknown";
}

inline double estimate_exponent(EstimateId id) {
  switch (id) {
    case EstimateId::eleestI: return 0.5;
    case EstimateId::eleestII: return 1.0;
    case EstimateId::eleestIV: return 0.5;
    case EstimateId::eleestV: return 1.0;
    case EstimateId::eleestVI: return 1.0 + 1.0 / 8.0;
    case EstimateId::esterr: return 0.5;
    case EstimateId::truerr: return 1.0 / 8.0;
  }
  return 0.0;
}

inline DecayFit appendix_sweep(const TransformContext& ctx,
                               const std::vector<double>& grid,
                               EstimateId which) {
  const CMatrix inv_id = herm_resolvent(ctx.D, cd(0.0, -1.0));  // (i+D)^{-1}
  const CMatrix dm = ctx.Delta.mat();
  const CMatrix half = ctx.delta_pow(0.5);
  std::vector<double> norms;
  norms.reserve(grid.size());
  for (double lambda : grid) {
    double v = 0.0;
    switch (which) {
      case EstimateId::eleestI:
        v = op_norm(dm * ctx.S_pow(lambda, 0.5));
        break;
      case EstimateId::eleestII:
        v = op_norm(dm * dm * ctx.S(lambda) * half);
        break;
      case EstimateId::eleestIV:
        v = op_norm(dm * ctx.D.mat() * ctx.S(lambda) * half);
        break;
      case EstimateId::eleestV:
        v = op_norm(ctx.D.mat() * ctx.S(lambda) * dm * dm * inv_id);
        break;
      case EstimateId::eleestVI:
        v = op_norm(ctx.S_pow(lambda, 1.5) * ctx.delta_pow(3.0) * inv_id);
        break;
      case EstimateId::esterr:
        v = op_norm(dm * dm * ctx.L(lambda));
        break;
      case EstimateId::truerr: {
        for (std::size_t m : {1, 2, 4, 8, 16})
          v = std::max(v, op_norm(dm * dm * ctx.L_trunc(lambda, m) * inv_id));
        break;
      }
    }
    norms.push_back(v);
  }
  return fit_decay(estimate_name(which), grid, std::move(norms),
                   estimate_exponent(which));
}

inline CMatrix error_term_L(const TransformContext& ctx, double lambda,
                            std::optional<std::size_t> m = {}) {
  return m ? ctx.L_trunc(lambda, *m) : ctx.L(lambda);
}

struct ConellPoint {
  std::size_t m = 0;
  double diff = 0.0;   // |L_l(m) - L_l|
  double bound = 0.0;  // guaranteed decay bound
};

// |L_l(m) - L_l| <= (l^2/r) |I(R Delta^2) S| |K Delta^3 R| m q^{m-1}
//                   + |L_l| q^m,  q = l/(1+l)
inline std::vector<ConellPoint> conell_check(const TransformContext& ctx,
                                             double lambda,
                                             const std::vector<std::size_t>& ms) {
  const CMatrix l_full = ctx.L(lambda);
  const CMatrix r = ctx.R(lambda);
  const CMatrix s = ctx.S(lambda);
  const CMatrix d2 = ctx.Delta.mat() * ctx.Delta.mat();
  const double lead = (lambda * lambda / ctx.r) * op_norm(ctx.I_of(r * d2) * s) *
                      op_norm(ctx.K * ctx.delta_pow(3.0) * r);
  const double l_norm = op_norm(l_full);
  const double q = lambda / (1.0 + lambda);
  std::vector<ConellPoint> out;
  out.reserve(ms.size());
  for (std::size_t m : ms) {
    if (m == 0) throw DomainError("conell_check: m must be positive");
    ConellPoint pt;
    pt.m = m;
    pt.diff = op_norm(ctx.L_trunc(lambda, m) - l_full);
    pt.bound = lead * double(m) * std::pow(q, double(m) - 1.0) +
               l_norm * std::pow(q, double(m));
    if (pt.diff > pt.bound * (1.0 + 1e-9) + 1e-12 * (1.0 + l_norm))
      throw Error("conell_check: truncation bound violated at m = " +
                  std::to_string(m));
    out.push_back(pt);
  }
  return out;
}

// (l r)^{-1/2} |sum_{n<=N} Delta^6 K^n R^{n+1} l^n| for one partial sum
inline double comboutra_partial_norm(const TransformContext& ctx,
                                     double lambda, long long n_terms) {
  const CMatrix d6 = ctx.delta_pow(6.0);
  return op_norm(d6 * geometric_kernel_sum(
                          ctx, lambda, CMatrix::identity(ctx.dim()), n_terms)) /
         std::sqrt(lambda * ctx.r);
}

// computable dominating envelope for the partial sums above, uniform in N,
// assembled from the three-term split of the reorganized series.  Needs
// Delta strictly positive so that |K| < 1.
inline double comboutra_envelope(const TransformContext& ctx, double lambda) {
  if (lambda <= 0.0)
    throw DomainError("comboutra_envelope: lambda must be positive");
  const double kappa = op_norm(ctx.K);
  if (kappa >= 1.0 - 1e-14)
    throw DeltaSingular("comboutra_envelope: needs strictly positive Delta");

  const CMatrix s = ctx.S(lambda);
  const CMatrix r = ctx.R(lambda);
  const CMatrix d3 = ctx.delta_pow(3.0);
  const CMatrix d2m = ctx.Delta.mat() * ctx.Delta.mat();
  const CMatrix& d = ctx.D.mat();
  const double nd = ctx.eig_delta.eigenvalues.back();
  const double nd3 = nd * nd * nd;
  const CMatrix c3 = d * d3 - d3 * d;    // [D, Delta^3]
  const CMatrix c2 = d * d2m - d2m * d;  // [D, Delta^2]

  const double e1 = op_norm(d3 * s * d3) + op_norm(d3 * s) * nd3;
  const double e2 = op_norm(d3 * s * d * c3 * r) + op_norm(d3 * s * c3 * d * r) +
                    nd3 * (op_norm(s * d * c3 * r) + op_norm(s * c3 * d * r));

  // uniform-in-m control of |Delta^2 L_l(m) (i+D)^{-1}|
  const CMatrix inv_id = herm_resolvent(ctx.D, cd(0.0, -1.0));
  const CMatrix l_full = ctx.L(lambda);
  const double h_a =
      op_norm(d2m * l_full * inv_id) + nd * nd * op_norm(l_full * inv_id);
  const CMatrix inv_one_minus_x_star =
      dense_inverse(CMatrix::identity(ctx.dim()) - ctx.X(lambda).adjoint());
  const double p_factor = std::pow(
      op_norm(ctx.S_pow(lambda, 0.5) * inv_one_minus_x_star * d3 * inv_id), 2.0);
  const double cs_common = op_norm(d2m * s * d2m) *
                           std::pow(op_norm(c2), 2.0) * p_factor /
                           (1.0 + lambda);
  const double h_inf = h_a + 2.0 * (lambda / ctx.r) * std::sqrt(cs_common);
  const double e3 = nd * h_inf /
                    std::sqrt(1.0 - kappa * kappa) /
                    std::sqrt(2.0 * lambda + 1.0);

  return (e1 + e2 + e3) / std::sqrt(lambda * ctx.r);
}

// deterministic context with strictly positive Delta
inline TransformContext random_transform_context(std::uint64_t seed,
                                                 std::size_t dim,
                                                 double spectral_radius = 1.0,
                                                 double delta_cond = 4.0) {
  Rng rng(seed, 0x7A5F);
  HermMatrix d = random_hermitian(rng, dim, spectral_radius);
  HermMatrix delta = random_positive(rng, dim, spectral_radius, delta_cond);
  return make_transform_context(std::move(d), std::move(delta));
}

}  // namespace modkk
