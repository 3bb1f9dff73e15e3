#include <algorithm>
#include <cmath>
#include <limits>

#include "damplab/factor.hpp"

namespace damplab {

template <class T>
LuFac<T> lu_factor(Mat<T> a) {
  const std::size_t n = a.rows();
  LuFac<T> f;
  f.piv.resize(n);
  f.min_pivot = n ? std::numeric_limits<double>::max() : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    f.piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    f.min_pivot = std::min(f.min_pivot, best);
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    const T inv = T(1) / a(k, k);
    kern::scal(n - k - 1, inv, a.col(k) + k + 1);
    for (std::size_t j = k + 1; j < n; ++j)
      kern::axpy(n - k - 1, -a(k, j), a.col(k) + k + 1, a.col(j) + k + 1);
  }
  f.a = std::move(a);
  return f;
}

template <class T>
void lu_solve_vec(const LuFac<T>& f, T* b) {
  const std::size_t n = f.a.rows();
  if (f.singular) throw DecompositionFailure("singular LU factor");
  for (std::size_t k = 0; k < n; ++k)
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
  for (std::size_t k = 0; k < n; ++k)
    kern::axpy(n - k - 1, -b[k], f.a.col(k) + k + 1, b + k + 1);
  for (std::size_t k = n; k-- > 0;) {
    b[k] /= f.a(k, k);
    kern::axpy(k, -b[k], f.a.col(k), b);
  }
}

template <class T>
void lu_solve_inplace(const LuFac<T>& f, Mat<T>& b) {
  for (std::size_t j = 0; j < b.cols(); ++j) lu_solve_vec(f, b.col(j));
}

template <class T>
Mat<T> lu_inverse(const LuFac<T>& f) {
  Mat<T> inv = Mat<T>::identity(f.a.rows());
  lu_solve_inplace(f, inv);
  return inv;
}

template struct LuFac<double>;
template struct LuFac<cplx>;
template LuFac<double> lu_factor<double>(RMatrix);
template LuFac<cplx> lu_factor<cplx>(Matrix);
template void lu_solve_vec<double>(const LuFac<double>&, double*);
template void lu_solve_vec<cplx>(const LuFac<cplx>&, cplx*);
template void lu_solve_inplace<double>(const LuFac<double>&, RMatrix&);
template void lu_solve_inplace<cplx>(const LuFac<cplx>&, Matrix&);
template RMatrix lu_inverse<double>(const LuFac<double>&);
template Matrix lu_inverse<cplx>(const LuFac<cplx>&);

}  // namespace damplab
