#ifndef DAMPLAB_HOUSEHOLDER_HPP
#define DAMPLAB_HOUSEHOLDER_HPP

// Elementary reflector generation in the LAPACK convention:
//   H = I - tau * v v^H,  v(0) = 1,  H^H (alpha; x) = (beta; 0),  beta real.

#include <cmath>

#include "damplab/dense.hpp"

namespace damplab::detail {

template <class T>
double re_of(T x) {
  if constexpr (std::is_same_v<T, cplx>)
    return x.real();
  else
    return x;
}

template <class T>
T dot_conj(std::size_t n, const T* x, const T* y) {
  if constexpr (std::is_same_v<T, cplx>)
    return kern::dotc(n, x, y);
  else
    return kern::dot(n, x, y);
}

// alpha is overwritten by beta (real); x (length n_rest) is overwritten by
// the reflector tail v(1..). Returns beta; sets tau (0 when no reflection is
// needed).
template <class T>
double make_householder(T& alpha, T* x, std::size_t n_rest, T& tau) {
  const double xnorm = std::sqrt(kern::nrm2sq(n_rest, x));
  double ai = 0.0;
  if constexpr (std::is_same_v<T, cplx>) ai = alpha.imag();
  const double ar = re_of(alpha);
  if (xnorm == 0.0 && ai == 0.0) {
    tau = T(0);
    return ar;
  }
  double beta = -std::copysign(std::hypot(std::hypot(ar, ai), xnorm), ar);
  if constexpr (std::is_same_v<T, cplx>) {
    tau = cplx((beta - ar) / beta, -ai / beta);
    const cplx scale = 1.0 / (alpha - beta);
    kern::scal(n_rest, scale, x);
  } else {
    tau = (beta - ar) / beta;
    kern::scal(n_rest, 1.0 / (ar - beta), x);
  }
  alpha = T(beta);
  return beta;
}

// c (rows x cols, leading dimension ldc) := H^H c or H c, where the
// reflector vector is (1; v) with v of length rows-1.
template <class T>
void apply_householder_left(const T* v, T tau, bool conj_tau, T* c,
                            std::size_t rows, std::size_t cols,
                            std::size_t ldc) {
  if (tau == T(0)) return;
  T t = tau;
  if constexpr (std::is_same_v<T, cplx>) {
    if (conj_tau) t = std::conj(tau);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    T* cj = c + j * ldc;
    T w = cj[0] + dot_conj(rows - 1, v, cj + 1);
    w *= t;
    cj[0] -= w;
    kern::axpy(rows - 1, -w, v, cj + 1);
  }
}

// c (rows x cols, ldc) := c * H, H built on the column space of size cols
// with vector (1; v), v of length cols-1.
template <class T>
void apply_householder_right(const T* v, T tau, T* c, std::size_t rows,
                             std::size_t cols, std::size_t ldc) {
  if (tau == T(0)) return;
  // w = C (1; v), then C -= tau * w (1; v)^H
  std::vector<T> w(c, c + rows);
  for (std::size_t j = 1; j < cols; ++j) kern::axpy(rows, v[j - 1], c + j * ldc, w.data());
  kern::axpy(rows, -tau, w.data(), c);
  for (std::size_t j = 1; j < cols; ++j) {
    T coef;
    if constexpr (std::is_same_v<T, cplx>)
      coef = -tau * std::conj(v[j - 1]);
    else
      coef = -tau * v[j - 1];
    kern::axpy(rows, coef, w.data(), c + j * ldc);
  }
}

// Givens rotation (dlartg): [c s; -s c] [f; g] = [r; 0], real.
inline void givens(double f, double g, double& c, double& s, double& r) {
  if (g == 0.0) {
    c = 1.0;
    s = 0.0;
    r = f;
  } else if (f == 0.0) {
    c = 0.0;
    s = g > 0.0 ? 1.0 : -1.0;
    r = std::abs(g);
  } else {
    const double d = std::hypot(f, g);
    const double sign = f > 0.0 ? 1.0 : -1.0;
    c = std::abs(f) / d;
    s = sign * g / d;
    r = sign * d;
  }
}

// Complex Givens (zlartg): [c s; -conj(s) c] [f; g] = [r; 0], c real.
inline void cgivens(cplx f, cplx g, double& c, cplx& s, cplx& r) {
  const double af = std::abs(f), ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
    r = f;
  } else if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
    r = ag;
  } else {
    const double d = std::hypot(af, ag);
    const cplx fs = f / af;
    c = af / d;
    s = fs * (std::conj(g) / d);
    r = fs * d;
  }
}

}  // namespace damplab::detail

#endif
