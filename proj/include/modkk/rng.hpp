#pragma once

// Deterministic seeded generators.  splitmix64 plus an explicit Box-Muller
// keeps every draw bit-reproducible across platforms (no
// implementation-defined std::*_distribution in sight).

#include <cstdint>

#include <Eigen/Dense>

#include "matfun.hpp"
#include "matrix.hpp"

namespace modkk {

class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed * 0x9E3779B97F4A7C15ULL + stream) {
    // warm up so nearby seeds decorrelate
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cd cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline CMatrix random_gaussian_matrix(Rng& rng, std::size_t rows,
                                      std::size_t cols) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

inline CVector random_vector(Rng& rng, std::size_t n) {
  CVector v(n);
  for (auto& x : v) x = rng.cgaussian();
  return v;
}

// Haar-ish unitary: QR of a Gaussian matrix with the R-diagonal phases fixed,
// which makes the result unique and reproducible.
inline CMatrix random_unitary(Rng& rng, std::size_t n) {
  CMatrix g = random_gaussian_matrix(rng, n, n);
  Eigen::MatrixXcd a(n, n);
  a = g.map();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < n; ++j) {
    cd d = r(j, j);
    const double ad = std::abs(d);
    cd phase = (ad > 0.0) ? d / ad : cd(1.0);
    q.col(j) *= phase;
  }
  CMatrix u(n, n);
  u.map() = q;
  return u;
}

inline HermMatrix random_hermitian(Rng& rng, std::size_t n,
                                   double spectral_radius = 1.0) {
  CMatrix g = random_gaussian_matrix(rng, n, n);
  CMatrix h = 0.5 * (g + g.adjoint());
  HermMatrix hm(h);
  const double nrm = op_norm(hm);
  if (nrm > 0.0) hm = HermMatrix(h * (spectral_radius / nrm));
  return hm;
}

// positive matrix with prescribed spectrum window: eigenvalues log-uniform in
// [radius/cond, radius], conjugated by a seeded unitary.  cond == 1 yields
// the exact scalar matrix radius * I.
inline HermMatrix random_positive(Rng& rng, std::size_t n, double radius,
                                  double cond) {
  if (cond == 1.0) return HermMatrix(CMatrix::identity(n) * radius);
  std::vector<double> eigs(n);
  const double lo = std::log(radius / cond), hi = std::log(radius);
  for (auto& e : eigs) e = std::exp(rng.uniform(lo, hi));
  CMatrix u = random_unitary(rng, n);
  return HermMatrix(u * CMatrix::diag(eigs) * u.adjoint(), 1e-10);
}

// positive with eigenvalues uniform in [lo, hi]
inline HermMatrix random_positive_window(Rng& rng, std::size_t n, double lo,
                                         double hi) {
  std::vector<double> eigs(n);
  for (auto& e : eigs) e = rng.uniform(lo, hi);
  CMatrix u = random_unitary(rng, n);
  return HermMatrix(u * CMatrix::diag(eigs) * u.adjoint(), 1e-10);
}

}  // namespace modkk
