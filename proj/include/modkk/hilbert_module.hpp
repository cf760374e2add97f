#pragma once

// Finite Hilbert C*-modules over M_k, their interior tensor products and the
// associated plumbing: creation operators, standard-module truncations,
// GNS-style localization and a completely-bounded-norm estimator.
//
// A module element is a coordinate vector in C^d; the module structure lives
// in the two callables (B-valued inner product, right action).

#include <functional>
#include <optional>

#include "matfun.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace modkk {

struct NotRepresentation : Error {
  using Error::Error;
};
struct NotState : Error {
  using Error::Error;
};

struct MatrixAlgebra {
  std::size_t k = 1;  // B = M_k(C)
};

struct HilbertModule {
  MatrixAlgebra algebra;
  std::size_t ambient_dim = 0;
  std::function<CMatrix(const CVector&, const CVector&)> inner;  // k x k
  std::function<CVector(const CVector&, const CMatrix&)> right_action;

  CVector basis_vector(std::size_t a) const {
    CVector e(ambient_dim, cd(0.0));
    e[a] = 1.0;
    return e;
  }
};

// canonical instance: elements are p x k matrices (row-major coordinates),
// <x,y> = x^* y in M_k, right action by matrix multiplication
inline HilbertModule matrix_module(std::size_t p, std::size_t k) {
  HilbertModule m;
  m.algebra = {k};
  m.ambient_dim = p * k;
  m.inner = [p, k](const CVector& x, const CVector& y) {
    CMatrix b(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        cd s = 0.0;
        for (std::size_t r = 0; r < p; ++r)
          s += std::conj(x[r * k + i]) * y[r * k + j];
        b(i, j) = s;
      }
    return b;
  };
  m.right_action = [p, k](const CVector& x, const CMatrix& b) {
    CVector y(p * k, cd(0.0));
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t j = 0; j < k; ++j) {
        cd s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += x[r * k + i] * b(i, j);
        y[r * k + j] = s;
      }
    return y;
  };
  return m;
}

// plain Hilbert space: module over C
inline HilbertModule hilbert_space(std::size_t d) { return matrix_module(d, 1); }

// N-fold direct sum with componentwise structure (standard-module truncation)
inline HilbertModule std_module_trunc(const HilbertModule& x, std::size_t n) {
  HilbertModule m;
  m.algebra = x.algebra;
  m.ambient_dim = n * x.ambient_dim;
  const std::size_t d = x.ambient_dim;
  const std::size_t k = x.algebra.k;
  auto inner0 = x.inner;
  auto action0 = x.right_action;
  m.inner = [n, d, k, inner0](const CVector& a, const CVector& b) {
    CMatrix s(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      CVector ac(a.begin() + c * d, a.begin() + (c + 1) * d);
      CVector bc(b.begin() + c * d, b.begin() + (c + 1) * d);
      s += inner0(ac, bc);
    }
    return s;
  };
  m.right_action = [n, d, action0](const CVector& a, const CMatrix& b) {
    CVector out(n * d);
    for (std::size_t c = 0; c < n; ++c) {
      CVector ac(a.begin() + c * d, a.begin() + (c + 1) * d);
      CVector yc = action0(ac, b);
      std::copy(yc.begin(), yc.end(), out.begin() + c * d);
    }
    return out;
  };
  return m;
}

// scalar Gram of the ambient basis under the normalized trace of the module's
// own algebra; identity for plain Hilbert spaces
inline CMatrix scalar_gram(const HilbertModule& m) {
  const std::size_t d = m.ambient_dim;
  const double kinv = 1.0 / double(m.algebra.k);
  CMatrix g(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    CVector ea = m.basis_vector(a);
    for (std::size_t b = 0; b < d; ++b) {
      CVector eb = m.basis_vector(b);
      g(a, b) = m.inner(ea, eb).trace() * kinv;
    }
  }
  return g;
}

// ----------------------------------------------------------------------------
// representations, stored through their matrix-unit images

struct Representation {
  std::size_t k = 1;                 // source algebra M_k
  std::size_t op_dim = 0;            // dimension the images act on
  std::vector<CMatrix> unit_images;  // k^2 entries, image of e_ij at i*k+j

  CMatrix apply(const CMatrix& b) const {
    CMatrix out(op_dim, op_dim);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const cd c = b(i, j);
        if (c == cd(0.0)) continue;
        out += c * unit_images[i * k + j];
      }
    return out;
  }
};

inline void validate_representation(const Representation& rep,
                                    double tol = 1e-12) {
  if (rep.unit_images.size() != rep.k * rep.k)
    throw NotRepresentation("representation: expected k^2 matrix-unit images");
  double scale = 0.0;
  for (const auto& m : rep.unit_images) {
    if (m.rows() != rep.op_dim || m.cols() != rep.op_dim)
      throw NotRepresentation("representation: image dimension mismatch");
    scale = std::max(scale, m.frobenius_norm());
  }
  const double bound = tol * (1.0 + scale) * (1.0 + scale);
  const std::size_t k = rep.k;
  auto img = [&](std::size_t i, std::size_t j) -> const CMatrix& {
    return rep.unit_images[i * k + j];
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if ((img(i, j).adjoint() - img(j, i)).frobenius_norm() > bound)
        throw NotRepresentation("representation: adjoint relation fails");
      for (std::size_t l = 0; l < k; ++l)
        for (std::size_t m = 0; m < k; ++m) {
          CMatrix lhs = img(i, j) * img(l, m);
          CMatrix rhs = (j == l) ? img(i, m)
                                 : CMatrix::zero(rep.op_dim, rep.op_dim);
          if ((lhs - rhs).frobenius_norm() > bound)
            throw NotRepresentation(
                "representation: multiplicativity fails on matrix units");
        }
    }
}

inline Representation make_representation(std::size_t k, std::size_t op_dim,
                                          std::vector<CMatrix> unit_images,
                                          double tol = 1e-12) {
  Representation rep{k, op_dim, std::move(unit_images)};
  validate_representation(rep, tol);
  return rep;
}

// defining representation of M_k on C^k
inline Representation identity_rep(std::size_t k) {
  std::vector<CMatrix> imgs;
  imgs.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      CMatrix e(k, k);
      e(i, j) = 1.0;
      imgs.push_back(e);
    }
  return Representation{k, k, std::move(imgs)};
}

// C acting by scalars
inline Representation scalar_rep(std::size_t op_dim) {
  return Representation{1, op_dim, {CMatrix::identity(op_dim)}};
}

inline std::vector<CMatrix> matrix_units(std::size_t k) {
  std::vector<CMatrix> units;
  units.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      CMatrix e(k, k);
      e(i, j) = 1.0;
      units.push_back(std::move(e));
    }
  return units;
}

// b |-> u (b (x) 1_m) u^*
inline Representation conjugated_amplified_rep(std::size_t k, std::size_t m,
                                               const CMatrix& u) {
  std::vector<CMatrix> imgs;
  imgs.reserve(k * k);
  const CMatrix im = CMatrix::identity(m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      CMatrix e(k, k);
      e(i, j) = 1.0;
      imgs.push_back(u * kron(e, im) * u.adjoint());
    }
  return Representation{k, k * m, std::move(imgs)};
}

// ----------------------------------------------------------------------------
// interior tensor product

struct TensorModule {
  HilbertModule left, right;
  Representation pi_B;
  CMatrix gram;            // scalarized semi-inner product on the raw basis
  CMatrix quotient_basis;  // raw_dim x dim, Gram-orthonormal columns
  CMatrix coord_map;       // dim x raw_dim, coord_map = Q^H gram
  CMatrix y_gram;          // scalar Gram of the right module's basis
  CMatrix y_gram_inv;
  std::size_t dim = 0;

  std::size_t raw_dim() const { return left.ambient_dim * right.ambient_dim; }

  CVector embed(const CVector& u) const { return quotient_basis * u; }
  CVector coords(const CVector& raw) const { return coord_map * raw; }
  CMatrix op_to_quotient(const CMatrix& t_raw) const {
    return coord_map * t_raw * quotient_basis;
  }
  CVector simple_tensor_coords(const CVector& x, const CVector& y) const {
    return coords(kron_vec(x, y));
  }
};

// X (x)_B Y with the kernel of the scalarized Gram quotiented away.
// Gram entries: <e_a (x) e_b, e_a' (x) e_b'> = tr_norm <e_b, pi_B(<e_a,e_a'>) e_b'>.
inline TensorModule interior_tensor(const HilbertModule& x,
                                    const HilbertModule& y,
                                    const Representation& pi_b,
                                    double cliff_rel = 1e-10) {
  if (pi_b.k != x.algebra.k)
    throw NotRepresentation("interior_tensor: pi_B algebra size mismatch");
  if (pi_b.op_dim != y.ambient_dim)
    throw NotRepresentation("interior_tensor: pi_B does not act on Y");
  validate_representation(pi_b);

  const std::size_t dx = x.ambient_dim, dy = y.ambient_dim;
  const std::size_t raw = dx * dy;
  const double trace_norm = 1.0 / double(y.algebra.k);

  TensorModule tm;
  tm.left = x;
  tm.right = y;
  tm.pi_B = pi_b;
  tm.gram = CMatrix(raw, raw);

  std::vector<CVector> ybasis(dy);
  for (std::size_t b = 0; b < dy; ++b) ybasis[b] = y.basis_vector(b);

  for (std::size_t a = 0; a < dx; ++a) {
    CVector ea = x.basis_vector(a);
    for (std::size_t a2 = 0; a2 < dx; ++a2) {
      CVector ea2 = x.basis_vector(a2);
      const CMatrix p = pi_b.apply(x.inner(ea, ea2));
      for (std::size_t b2 = 0; b2 < dy; ++b2) {
        const CVector pb2 = p * ybasis[b2];
        for (std::size_t b = 0; b < dy; ++b)
          tm.gram(a * dy + b, a2 * dy + b2) =
              y.inner(ybasis[b], pb2).trace() * trace_norm;
      }
    }
  }

  EigDecomp ed = eig_herm(hermitize(tm.gram));
  double top = 0.0;
  for (double ev : ed.eigenvalues) top = std::max(top, ev);
  const double cliff = cliff_rel * top;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i)
    if (top > 0.0 && ed.eigenvalues[i] >= cliff) keep.push_back(i);

  tm.dim = keep.size();
  tm.quotient_basis = CMatrix(raw, tm.dim);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double s = 1.0 / std::sqrt(ed.eigenvalues[keep[c]]);
    for (std::size_t r = 0; r < raw; ++r)
      tm.quotient_basis(r, c) = ed.eigenvectors(r, keep[c]) * s;
  }
  tm.coord_map = tm.quotient_basis.adjoint() * tm.gram;

  tm.y_gram = scalar_gram(y);
  tm.y_gram_inv = dense_inverse(tm.y_gram);
  return tm;
}

struct CreationOp {
  CMatrix T;       // Y -> X (x) Y (quotient coordinates)
  CMatrix T_star;  // adjoint w.r.t. the scalarized inner products
};

inline CreationOp creation_op(const CVector& xi, const TensorModule& tm) {
  const std::size_t dx = tm.left.ambient_dim, dy = tm.right.ambient_dim;
  if (xi.size() != dx) throw Error("creation_op: xi has wrong dimension");
  CMatrix emb(dx * dy, dy);  // y |-> xi (x) y in raw coordinates
  for (std::size_t a = 0; a < dx; ++a)
    for (std::size_t b = 0; b < dy; ++b) emb(a * dy + b, b) = xi[a];
  CreationOp op;
  op.T = tm.coord_map * emb;
  op.T_star = tm.y_gram_inv * op.T.adjoint();
  return op;
}

inline CMatrix diag_lift(const CMatrix& op, std::size_t n) {
  return kron(CMatrix::identity(n), op);
}

// ----------------------------------------------------------------------------
// localization along a state on B

struct Localization {
  std::size_t dim = 0;
  CMatrix gram;      // rho-Gram of the ambient basis
  CMatrix isometry;  // ambient x dim
  CMatrix coord_map;

  CMatrix induced_op(const CMatrix& t) const {
    return coord_map * t * isometry;
  }
};

inline Localization localize(const HilbertModule& m, const CMatrix& rho,
                             double cliff_rel = 1e-10) {
  const std::size_t k = m.algebra.k;
  if (rho.rows() != k || rho.cols() != k)
    throw NotState("localize: state has wrong dimension");
  if (hermitian_defect(rho) > 1e-10 * (1.0 + rho.frobenius_norm()))
    throw NotState("localize: state not Hermitian");
  if (std::abs(rho.trace() - cd(1.0)) > 1e-10)
    throw NotState("localize: state trace differs from 1");
  EigDecomp rd = eig_herm(HermMatrix(rho, 1e-10));
  for (double ev : rd.eigenvalues)
    if (ev < -1e-10) throw NotState("localize: state not positive");

  const std::size_t d = m.ambient_dim;
  Localization loc;
  loc.gram = CMatrix(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    CVector ea = m.basis_vector(a);
    for (std::size_t b = 0; b < d; ++b)
      loc.gram(a, b) = (rho * m.inner(ea, m.basis_vector(b))).trace();
  }
  EigDecomp ed = eig_herm(hermitize(loc.gram));
  double top = 0.0;
  for (double ev : ed.eigenvalues) top = std::max(top, ev);
  const double cliff = cliff_rel * top;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i)
    if (top > 0.0 && ed.eigenvalues[i] >= cliff) keep.push_back(i);
  loc.dim = keep.size();
  loc.isometry = CMatrix(d, loc.dim);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double s = 1.0 / std::sqrt(ed.eigenvalues[keep[c]]);
    for (std::size_t r = 0; r < d; ++r)
      loc.isometry(r, c) = ed.eigenvectors(r, keep[c]) * s;
  }
  loc.coord_map = loc.isometry.adjoint() * loc.gram;
  return loc;
}

// ----------------------------------------------------------------------------
// completely bounded norm, estimated from below by alternating ascent

struct LinearMatrixMap {
  std::size_t p = 1, q = 1;          // M_p -> M_q
  std::vector<CMatrix> unit_images;  // p^2 images, q x q

  CMatrix apply(const CMatrix& b) const {
    CMatrix out(q, q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        const cd c = b(i, j);
        if (c == cd(0.0)) continue;
        out += c * unit_images[i * p + j];
      }
    return out;
  }
};

namespace detail {

inline CMatrix amplified_apply(const LinearMatrixMap& phi, std::size_t n,
                               const CMatrix& x) {
  CMatrix y(n * phi.q, n * phi.q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      y.set_block(i * phi.q, j * phi.q,
                  phi.apply(x.block(i * phi.p, j * phi.p, phi.p, phi.p)));
  return y;
}

// one monotone ascent run; returns the best value and the maximizer
inline std::pair<double, CMatrix> cb_ascent(const LinearMatrixMap& phi,
                                            std::size_t n, CMatrix x,
                                            std::size_t max_iter = 80) {
  const std::size_t np = n * phi.p, nq = n * phi.q;
  double best = 0.0;
  CMatrix best_x = x;
  for (std::size_t it = 0; it < max_iter; ++it) {
    CMatrix y = amplified_apply(phi, n, x);
    Eigen::MatrixXcd ye(nq, nq);
    ye = y.map();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        ye, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double val = svd.singularValues()(0);
    if (val > best) {
      best = val;
      best_x = x;
    } else if (it > 0 && val <= best * (1.0 + 1e-12)) {
      break;
    }
    Eigen::VectorXcd a = svd.matrixU().col(0), b = svd.matrixV().col(0);
    // C with <a, phi_n(X) b> = tr(C^H X)
    CMatrix c(np, np);
    for (std::size_t i = 0; i < phi.p; ++i)
      for (std::size_t j = 0; j < phi.p; ++j) {
        const CMatrix& g = phi.unit_images[i * phi.p + j];
        for (std::size_t bi = 0; bi < n; ++bi)
          for (std::size_t bj = 0; bj < n; ++bj) {
            cd s = 0.0;
            for (std::size_t u = 0; u < phi.q; ++u)
              for (std::size_t v = 0; v < phi.q; ++v)
                s += std::conj(a(bi * phi.q + u)) * g(u, v) * b(bj * phi.q + v);
            c(bi * phi.p + i, bj * phi.p + j) = std::conj(s);
          }
      }
    Eigen::MatrixXcd ce(np, np);
    ce = c.map();
    Eigen::JacobiSVD<Eigen::MatrixXcd> csvd(
        ce, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMatrix xn(np, np);
    xn.map() = csvd.matrixU() * csvd.matrixV().adjoint();
    x = xn;
  }
  return {best, best_x};
}

}  // namespace detail

// levels[i] estimates |phi_(i+1)| from below; the sequence is nondecreasing
// because each level is warm-started from the previous maximizer
inline std::vector<double> cb_norm_estimate(const LinearMatrixMap& phi,
                                            std::size_t max_level = 4) {
  std::vector<double> levels;
  CMatrix prev_best;
  for (std::size_t n = 1; n <= max_level; ++n) {
    const std::size_t np = n * phi.p;
    std::vector<CMatrix> starts;
    starts.push_back(CMatrix::identity(np));
    if (n == phi.p) {  // swap unitary on C^p (x) C^p
      CMatrix sw(np, np);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < phi.p; ++j) sw(i * phi.p + j, j * n + i) = 1.0;
      starts.push_back(sw);
    }
    if (n > 1 && prev_best.rows() == np - phi.p) {
      CMatrix padded = CMatrix::identity(np);
      padded.set_block(0, 0, prev_best);
      starts.push_back(padded);
    }
    Rng rng(0xCB00 + 101 * n);
    for (int s = 0; s < 4; ++s) starts.push_back(random_unitary(rng, np));

    double best = 0.0;
    CMatrix best_x = starts.front();
    for (const auto& x0 : starts) {
      auto [val, xbest] = detail::cb_ascent(phi, n, x0);
      if (val > best) {
        best = val;
        best_x = xbest;
      }
    }
    if (!levels.empty() && best < levels.back()) best = levels.back();
    levels.push_back(best);
    prev_best = best_x;
  }
  return levels;
}

}  // namespace modkk
