#pragma once

// Dense complex matrices, row-major, value semantics.  Products go through
// Eigen maps; everything else is plain loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace modkk {

using cd = std::complex<double>;
using CVector = std::vector<cd>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
using EigenRowMat =
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix zero(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols);
  }
  static CMatrix diag(const std::vector<double>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static CMatrix diag(const CVector& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  cd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cd& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  cd* data() { return a_.data(); }
  const cd* data() const { return a_.data(); }

  Eigen::Map<detail::EigenRowMat> map() {
    return {a_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }
  Eigen::Map<const detail::EigenRowMat> map() const {
    return {a_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  CMatrix& operator*=(cd s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cd s) { return a *= s; }
  friend CMatrix operator*(cd s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= cd(s); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= cd(s); }
  friend CMatrix operator-(CMatrix a) { return a *= cd(-1.0); }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_)
      throw Error("matrix product: shape mismatch " + a.shape_str() + " * " +
                  b.shape_str());
    CMatrix c(a.rows_, b.cols_);
    c.map().noalias() = a.map() * b.map();
    return c;
  }

  CMatrix adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m(j, i) = std::conj((*this)(i, j));
    return m;
  }
  CMatrix transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  CMatrix conj() const {
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
    return m;
  }

  cd trace() const {
    cd t = 0.0;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    // compensated accumulation so the value does not depend on entry order
    double s = 0.0, c = 0.0;
    for (const auto& x : a_) {
      double term = std::norm(x);
      double y = term - c;
      double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  CMatrix block(std::size_t i0, std::size_t j0, std::size_t r,
                std::size_t c) const {
    CMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
  }
  void set_block(std::size_t i0, std::size_t j0, const CMatrix& m) {
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j)
        (*this)(i0 + i, j0 + j) = m(i, j);
  }

  // rescale row i by s[i] (diagonal matrix on the left) without forming it
  CMatrix scale_rows(const std::vector<double>& s) const {
    CMatrix m(*this);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) *= s[i];
    return m;
  }
  CMatrix scale_cols(const std::vector<double>& s) const {
    CMatrix m(*this);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) *= s[j];
    return m;
  }

  CVector col(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(std::size_t j, const CVector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

private:
  void require_same_shape(const CMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(std::string(what) + ": shape mismatch " + shape_str() +
                  " vs " + o.shape_str());
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cd> a_;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cd s = a(i, j);
      if (s == cd(0.0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          m(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
    }
  return m;
}

inline CVector kron_vec(const CVector& x, const CVector& y) {
  CVector v(x.size() * y.size());
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b)
      v[a * y.size() + b] = x[a] * y[b];
  return v;
}

// conjugate-linear in the first argument
inline cd vdot(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw Error("vdot: length mismatch");
  cd s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double vnorm(const CVector& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline CVector operator*(const CMatrix& m, const CVector& x) {
  if (m.cols() != x.size()) throw Error("mat*vec: shape mismatch");
  CVector y(m.rows(), cd(0.0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cd s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline CVector operator+(CVector x, const CVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return x;
}
inline CVector operator-(CVector x, const CVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}
inline CVector operator*(cd s, CVector x) {
  for (auto& v : x) v *= s;
  return x;
}

inline CMatrix block_diag(const std::vector<CMatrix>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  CMatrix m(r, c);
  std::size_t i0 = 0, j0 = 0;
  for (const auto& b : blocks) {
    m.set_block(i0, j0, b);
    i0 += b.rows();
    j0 += b.cols();
  }
  return m;
}

inline double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).frobenius_norm();
}

}  // namespace modkk
