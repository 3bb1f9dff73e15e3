#include <algorithm>

#include "damplab/factor.hpp"
#include "householder.hpp"

namespace damplab {

namespace {

constexpr std::size_t QR_NB = 32;

template <class T>
T conj_if(T x) {
  if constexpr (std::is_same_v<T, cplx>)
    return std::conj(x);
  else
    return x;
}

// Unit lower-trapezoidal reflector panel V from the factored columns
// j0 .. j0+nb-1 (rows j0 .. m-1).
template <class T>
Mat<T> panel_v(const Mat<T>& a, std::size_t j0, std::size_t nb) {
  const std::size_t m = a.rows();
  Mat<T> v(m - j0, nb);
  for (std::size_t j = 0; j < nb; ++j) {
    v(j, j) = T(1);
    for (std::size_t i = j0 + j + 1; i < m; ++i) v(i - j0, j) = a(i, j0 + j);
  }
  return v;
}

// Compact WY factor: H(j0) ... H(j0+nb-1) = I - V T V^H with T upper
// triangular.
template <class T>
Mat<T> panel_t(const Mat<T>& v, const std::vector<T>& tau, std::size_t j0,
               std::size_t nb) {
  Mat<T> t(nb, nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const T ti = tau[j0 + i];
    t(i, i) = ti;
    if (ti == T(0) || i == 0) continue;
    // t(0:i, i) = -tau_i * T(0:i,0:i) * (V(:,0:i)^H v_i)
    std::vector<T> w(i);
    for (std::size_t j = 0; j < i; ++j)
      w[j] = detail::dot_conj(v.rows(), v.col(j), v.col(i));
    for (std::size_t j = 0; j < i; ++j) {
      T s = T(0);
      for (std::size_t p = j; p < i; ++p) s += t(j, p) * w[p];
      t(j, i) = -ti * s;
    }
  }
  return t;
}

// w := T w (upper triangular) or T^H w, columnwise on an nb x nc block.
template <class T>
void trmul(const Mat<T>& t, bool conj_trans, Mat<T>& w) {
  const std::size_t nb = t.rows();
  for (std::size_t c = 0; c < w.cols(); ++c) {
    T* wc = w.col(c);
    if (!conj_trans) {
      for (std::size_t i = 0; i < nb; ++i) {
        T s = T(0);
        for (std::size_t j = i; j < nb; ++j) s += t(i, j) * wc[j];
        wc[i] = s;
      }
    } else {
      for (std::size_t i = nb; i-- > 0;) {
        T s = T(0);
        for (std::size_t j = 0; j <= i; ++j) s += conj_if(t(j, i)) * wc[j];
        wc[i] = s;
      }
    }
  }
}

// c(j0:m, :) := (I - V T V^H)^(H?) c(j0:m, :)
template <class T>
void block_apply(const Mat<T>& v, const Mat<T>& t, bool conj_trans, T* c,
                 std::size_t rows, std::size_t cols, std::size_t ldc) {
  if (cols == 0) return;
  const std::size_t nb = v.cols();
  Mat<T> w(nb, cols);
  kern::gemm_acc(nb, cols, rows, T(1), v.data(), v.rows(), kern::Op::ConjT, c,
                 ldc, kern::Op::None, w.data(), nb);
  trmul(t, conj_trans, w);
  kern::gemm_acc(rows, cols, nb, T(-1), v.data(), v.rows(), kern::Op::None,
                 w.data(), nb, kern::Op::None, c, ldc);
}

}  // namespace

template <class T>
QrFac<T> qr_factor(Mat<T> a) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t k = std::min(m, n);
  QrFac<T> f;
  f.m = m;
  f.n = n;
  f.tau.assign(k, T(0));
  for (std::size_t j0 = 0; j0 < k; j0 += QR_NB) {
    const std::size_t nb = std::min(QR_NB, k - j0);
    for (std::size_t j = j0; j < j0 + nb; ++j) {
      detail::make_householder(a(j, j), m > j + 1 ? &a(j + 1, j) : nullptr,
                               m - j - 1, f.tau[j]);
      if (j + 1 < j0 + nb)
        detail::apply_householder_left(m > j + 1 ? &a(j + 1, j) : nullptr,
                                       f.tau[j], true, &a(j, j + 1), m - j,
                                       j0 + nb - j - 1, m);
    }
    if (j0 + nb < n) {
      Mat<T> v = panel_v(a, j0, nb);
      Mat<T> t = panel_t(v, f.tau, j0, nb);
      block_apply(v, t, true, &a(j0, j0 + nb), m - j0, n - j0 - nb, m);
    }
  }
  f.a = std::move(a);
  return f;
}

template <class T>
Mat<T> QrFac<T>::r() const {
  const std::size_t k = std::min(m, n);
  Mat<T> out(k, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= std::min(j, k - 1); ++i) out(i, j) = a(i, j);
  return out;
}

template <class T>
void QrFac<T>::apply_q(Mat<T>& c, bool conj_trans) const {
  const std::size_t k = std::min(m, n);
  const std::size_t nblocks = (k + QR_NB - 1) / QR_NB;
  for (std::size_t bi = 0; bi < nblocks; ++bi) {
    const std::size_t b = conj_trans ? bi : nblocks - 1 - bi;
    const std::size_t j0 = b * QR_NB;
    const std::size_t nb = std::min(QR_NB, k - j0);
    Mat<T> v = panel_v(a, j0, nb);
    Mat<T> t = panel_t(v, tau, j0, nb);
    block_apply(v, t, conj_trans, c.data() + j0, m - j0, c.cols(), m);
  }
}

template <class T>
Mat<T> QrFac<T>::q_columns(std::size_t j0, std::size_t count) const {
  Mat<T> c(m, count);
  for (std::size_t j = 0; j < count; ++j) c(j0 + j, j) = T(1);
  apply_q(c, false);
  return c;
}

template <class T>
Mat<T> QrFac<T>::q(std::size_t ncols) const {
  return q_columns(0, ncols);
}

template struct QrFac<double>;
template struct QrFac<cplx>;
template QrFac<double> qr_factor<double>(RMatrix);
template QrFac<cplx> qr_factor<cplx>(Matrix);

}  // namespace damplab
