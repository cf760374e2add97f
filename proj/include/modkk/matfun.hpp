#pragma once

// Hermitian eigenmachinery and functional calculus.  The eigensolver is
// Eigen's SelfAdjointEigenSolver (tridiagonalization + implicit QL), which is
// deterministic for fixed input bytes; the operator norm goes through an SVD
// so it stays an independent path from eig-based oracles.

#include <functional>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "matrix.hpp"

namespace modkk {

struct NonHermitian : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NearSingular : Error {
  NearSingular(const std::string& msg, std::vector<double> eigs)
      : Error(msg), offending(std::move(eigs)) {}
  std::vector<double> offending;
};

// Hermitian-by-contract wrapper: the constructor rejects matrices whose
// defect exceeds 1e-12 * (1 + |M|) in Frobenius norm, then stores the
// symmetrized part so downstream eigensolves see an exactly Hermitian matrix.
class HermMatrix {
public:
  HermMatrix() = default;
  explicit HermMatrix(const CMatrix& m, double tol_scale = 1e-12) {
    if (m.rows() != m.cols())
      throw NonHermitian("HermMatrix: not square (" + m.shape_str() + ")");
    const double defect = hermitian_defect(m);
    if (!(defect <= tol_scale * (1.0 + m.frobenius_norm()))) {
      std::ostringstream os;
      os << "HermMatrix: defect " << defect << " exceeds tolerance";
      throw NonHermitian(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  std::size_t dim() const { return m_.rows(); }
  const CMatrix& mat() const { return m_; }

private:
  CMatrix m_;
};

struct EigDecomp {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns, unitary
};

inline EigDecomp eig_herm(const HermMatrix& h) {
  const std::size_t n = h.dim();
  Eigen::MatrixXcd a(n, n);
  a = h.mat().map();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw NoConvergence("eig_herm: eigensolver did not converge");
  EigDecomp d;
  d.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  d.eigenvectors = CMatrix(n, n);
  d.eigenvectors.map() = es.eigenvectors();
  return d;
}

// f applied on the spectrum: U diag(f(lambda)) U^*.  Throws DomainError when
// f produces a NaN on some eigenvalue.
inline CMatrix matfunc(const EigDecomp& d, const std::function<cd(double)>& f) {
  const std::size_t n = d.eigenvalues.size();
  CVector fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cd y = f(d.eigenvalues[i]);
    if (std::isnan(y.real()) || std::isnan(y.imag())) {
      std::ostringstream os;
      os << "matfunc: f undefined at eigenvalue " << d.eigenvalues[i];
      throw DomainError(os.str());
    }
    fv[i] = y;
  }
  const CMatrix& u = d.eigenvectors;
  CMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = u(i, j) * fv[j];
  return scaled * u.adjoint();
}

inline CMatrix matfunc(const HermMatrix& h,
                       const std::function<cd(double)>& f) {
  return matfunc(eig_herm(h), f);
}

// largest singular value (SVD, not via M^*M)
inline double op_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::MatrixXcd a(m.rows(), m.cols());
  a = m.map();
  if (std::max(m.rows(), m.cols()) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

inline std::vector<double> singular_values(const CMatrix& m) {
  Eigen::MatrixXcd a(m.rows(), m.cols());
  a = m.map();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() +
                            svd.singularValues().size());
  return s;
}

inline double op_norm(const HermMatrix& h) { return op_norm(h.mat()); }

// M^p on the spectrum with a positivity guard.  For p < 0 any eigenvalue
// below the floor is rejected (NearSingular, carrying the offenders); for
// p >= 0 eigenvalues in [-floor, 0) are clamped to 0 and anything more
// negative violates the positive-semidefinite precondition.
inline CMatrix guarded_inv_power(const HermMatrix& m, double p,
                                 double floor = -1.0,
                                 std::vector<double>* used_eigs = nullptr) {
  EigDecomp d = eig_herm(m);
  double top = 0.0;
  for (double ev : d.eigenvalues) top = std::max(top, std::abs(ev));
  if (floor < 0.0) floor = 1e-12 * top;
  if (used_eigs) *used_eigs = d.eigenvalues;

  if (p < 0.0) {
    std::vector<double> offending;
    for (double ev : d.eigenvalues)
      if (ev < floor) offending.push_back(ev);
    if (!offending.empty()) {
      std::ostringstream os;
      os << "guarded_inv_power: " << offending.size() << " eigenvalue(s) below floor "
         << floor << " with exponent " << p;
      throw NearSingular(os.str(), offending);
    }
  } else {
    for (double ev : d.eigenvalues)
      if (ev < -std::max(floor, 1e-12 * (1.0 + top))) {
        std::ostringstream os;
        os << "guarded_inv_power: matrix not positive semidefinite (eigenvalue "
           << ev << ")";
        throw DomainError(os.str());
      }
  }
  return matfunc(d, [&](double x) -> cd {
    if (p >= 0.0 && x < 0.0) x = 0.0;
    return std::pow(x, p);
  });
}

// (H - z)^{-1} through the spectral decomposition
inline CMatrix herm_resolvent(const EigDecomp& d, cd z) {
  const std::size_t n = d.eigenvalues.size();
  const CMatrix& u = d.eigenvectors;
  CMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scaled(i, j) = u(i, j) / (d.eigenvalues[j] - z);
  return scaled * u.adjoint();
}

inline CMatrix herm_resolvent(const HermMatrix& h, cd z) {
  return herm_resolvent(eig_herm(h), z);
}

// general dense inverse (LU); used where the matrix is not Hermitian
inline CMatrix dense_inverse(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error("dense_inverse: not square");
  Eigen::MatrixXcd a(m.rows(), m.cols());
  a = m.map();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  CMatrix r(m.rows(), m.cols());
  r.map() = lu.inverse();
  return r;
}

// for matrices that are Hermitian in exact arithmetic but carry roundoff
inline HermMatrix hermitize(const CMatrix& m, double tol_scale = 1e-10) {
  return HermMatrix(m, tol_scale);
}

}  // namespace modkk
