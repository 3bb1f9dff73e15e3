#ifndef DAMPLAB_DENSE_HPP
#define DAMPLAB_DENSE_HPP

// Dense column-major matrices over double or complex<double>, with the
// arithmetic routed through the dispatched kernels.

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "damplab/kernels.hpp"

namespace damplab {

using cplx = std::complex<double>;

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i + j * rows_];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i + j * rows_];
  }

  T* data() { return a_.data(); }
  const T* data() const { return a_.data(); }
  T* col(std::size_t j) { return a_.data() + j * rows_; }
  const T* col(std::size_t j) const { return a_.data() + j * rows_; }

  Mat& operator+=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Mat& operator*=(T s) {
    kern::scal(a_.size(), s, a_.data());
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(T s, Mat a) { return a *= s; }

  Mat adjoint() const {
    Mat r(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) {
        if constexpr (std::is_same_v<T, cplx>)
          r(j, i) = std::conj((*this)(i, j));
        else
          r(j, i) = (*this)(i, j);
      }
    return r;
  }

  Mat block(std::size_t i0, std::size_t j0, std::size_t nr,
            std::size_t nc) const {
    assert(i0 + nr <= rows_ && j0 + nc <= cols_);
    Mat r(nr, nc);
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t i = 0; i < nr; ++i) r(i, j) = (*this)(i0 + i, j0 + j);
    return r;
  }

  void set_block(std::size_t i0, std::size_t j0, const Mat& b) {
    assert(i0 + b.rows_ <= rows_ && j0 + b.cols_ <= cols_);
    for (std::size_t j = 0; j < b.cols_; ++j)
      for (std::size_t i = 0; i < b.rows_; ++i)
        (*this)(i0 + i, j0 + j) = b(i, j);
  }

  Mat columns(std::size_t j0, std::size_t count) const {
    return block(0, j0, rows_, count);
  }

  double norm_fro() const {
    return std::sqrt(kern::nrm2sq(a_.size(), a_.data()));
  }
  double norm_max() const {
    double m = 0.0;
    for (const T& x : a_) m = std::max(m, std::abs(x));
    return m;
  }
  double norm_one() const {  // max column sum
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using Matrix = Mat<cplx>;
using RMatrix = Mat<double>;

// c := op(a) * op(b)
template <class T>
Mat<T> matmul(kern::Op opa, const Mat<T>& a, kern::Op opb, const Mat<T>& b) {
  const std::size_t m = opa == kern::Op::None ? a.rows() : a.cols();
  const std::size_t ka = opa == kern::Op::None ? a.cols() : a.rows();
  [[maybe_unused]] const std::size_t kb =
      opb == kern::Op::None ? b.rows() : b.cols();
  const std::size_t n = opb == kern::Op::None ? b.cols() : b.rows();
  assert(ka == kb);
  Mat<T> c(m, n);
  kern::gemm_acc(m, n, ka, T(1), a.data(), a.rows(), opa, b.data(), b.rows(),
                 opb, c.data(), c.rows());
  return c;
}

template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  return matmul(kern::Op::None, a, kern::Op::None, b);
}

// a^H * b
template <class T>
Mat<T> mulH(const Mat<T>& a, const Mat<T>& b) {
  return matmul(kern::Op::ConjT, a, kern::Op::None, b);
}

// y := a * x  (x, y dense vectors)
template <class T>
void matvec(const Mat<T>& a, const T* x, T* y) {
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = T(0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    kern::axpy(a.rows(), x[j], a.col(j), y);
}

// y := a^H * x
template <class T>
void matvec_adj(const Mat<T>& a, const T* x, T* y) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    y[j] = kern::dotc(a.rows(), a.col(j), x);
}

inline void matvec_adj(const RMatrix& a, const double* x, double* y) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    y[j] = kern::dot(a.rows(), a.col(j), x);
}

template <class T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x) {
  assert(x.size() == a.cols());
  std::vector<T> y(a.rows());
  matvec(a, x.data(), y.data());
  return y;
}

inline bool is_real(const Matrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j).imag() != 0.0) return false;
  return true;
}

inline RMatrix real_part(const Matrix& a) {
  RMatrix r(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) r(i, j) = a(i, j).real();
  return r;
}

inline Matrix to_complex(const RMatrix& a) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) r(i, j) = a(i, j);
  return r;
}

inline double vec_norm(std::span<const cplx> x) {
  return std::sqrt(kern::nrm2sq(x.size(), x.data()));
}
inline double vec_norm(std::span<const double> x) {
  return std::sqrt(kern::nrm2sq(x.size(), x.data()));
}

}  // namespace damplab

#endif
