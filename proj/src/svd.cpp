#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "damplab/factor.hpp"
#include "householder.hpp"

namespace damplab {

namespace {

constexpr double EPS = std::numeric_limits<double>::epsilon();

template <class T>
T conj_if(T x) {
  if constexpr (std::is_same_v<T, cplx>)
    return std::conj(x);
  else
    return x;
}

// Smallest singular value of [[f, g], [0, h]] (LAPACK dlas2).
double ssmin_2x2(double f, double g, double h) {
  const double fa = std::abs(f), ga = std::abs(g), ha = std::abs(h);
  const double fhmn = std::min(fa, ha), fhmx = std::max(fa, ha);
  if (fhmn == 0.0) return 0.0;
  if (ga < fhmx) {
    const double as = 1.0 + fhmn / fhmx;
    const double at = (fhmx - fhmn) / fhmx;
    const double au = (ga / fhmx) * (ga / fhmx);
    const double c = 2.0 / (std::sqrt(as * as + au) + std::sqrt(at * at + au));
    return fhmn * c;
  }
  const double au = fhmx / ga;
  if (au == 0.0) return fhmn * fhmx / ga;
  const double as = 1.0 + fhmn / fhmx;
  const double at = (fhmx - fhmn) / fhmx;
  const double c =
      1.0 / (std::sqrt(1.0 + (as * au) * (as * au)) +
             std::sqrt(1.0 + (at * au) * (at * au)));
  return 2.0 * (fhmn * c) * au;
}

// Upper bidiagonalization of tall a (m >= n): a = Q B P^H with B real
// (diagonal d, superdiagonal e). Reflector tails stay in a; the right
// reflector tail for step j is stored in row j at columns j+2..n-1.
template <class T>
void bidiagonalize(Mat<T>& a, std::vector<double>& d, std::vector<double>& e,
                   std::vector<T>& tauq, std::vector<T>& taup) {
  const std::size_t m = a.rows(), n = a.cols();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  tauq.assign(n, T(0));
  taup.assign(n > 0 ? n - 1 : 0, T(0));
  std::vector<T> y;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = detail::make_householder(
        a(j, j), m > j + 1 ? &a(j + 1, j) : nullptr, m - j - 1, tauq[j]);
    if (j + 1 < n)
      detail::apply_householder_left(m > j + 1 ? &a(j + 1, j) : nullptr,
                                     tauq[j], true, &a(j, j + 1), m - j,
                                     n - j - 1, m);
    if (j + 1 < n) {
      const std::size_t len = n - j - 1;
      y.resize(len);
      for (std::size_t p = 0; p < len; ++p) y[p] = conj_if(a(j, j + 1 + p));
      T alpha = y[0];
      e[j] = detail::make_householder(alpha, y.data() + 1, len - 1, taup[j]);
      a(j, j + 1) = T(e[j]);
      for (std::size_t p = 1; p < len; ++p) a(j, j + 1 + p) = y[p];
      if (m > j + 1)
        detail::apply_householder_right(y.data() + 1, taup[j], &a(j + 1, j + 1),
                                        m - j - 1, len, m);
    }
  }
}

// Q applied to the identity: u is m x ucols.
template <class T>
Mat<T> form_bidiag_u(const Mat<T>& a, const std::vector<T>& tauq,
                     std::size_t ucols) {
  const std::size_t m = a.rows(), n = a.cols();
  Mat<T> u(m, ucols);
  for (std::size_t j = 0; j < std::min(ucols, m); ++j) u(j, j) = T(1);
  for (std::size_t j = n; j-- > 0;) {
    detail::apply_householder_left(m > j + 1 ? &a(j + 1, j) : nullptr, tauq[j],
                                   false, &u(j, 0), m - j, ucols, m);
    // apply_householder_left walks all columns; entries above row j are
    // untouched because the reflector lives on rows j..m-1
  }
  return u;
}

template <class T>
Mat<T> form_bidiag_v(const Mat<T>& a, const std::vector<T>& taup) {
  const std::size_t n = a.cols();
  Mat<T> v = Mat<T>::identity(n);
  if (n < 2) return v;
  std::vector<T> tail(n);
  for (std::size_t j = n - 1; j-- > 0;) {
    const std::size_t len = n - j - 1;  // reflector on coordinates j+1..n-1
    if (len < 1) continue;
    for (std::size_t p = 1; p < len; ++p) tail[p - 1] = a(j, j + 1 + p);
    detail::apply_householder_left(len > 1 ? tail.data() : nullptr, taup[j],
                                   false, &v(j + 1, 0), len, n, n);
  }
  return v;
}

// Implicit-shift QR on the real bidiagonal (d, e), rotations accumulated
// into the columns of u / v when present. dbdsqr-style with zero-shift
// (Demmel-Kahan) sweeps when the shift would drown small singular values.
template <class T>
void bidiag_qr(std::vector<double>& d, std::vector<double>& e, Mat<T>* u,
               Mat<T>* v) {
  const std::size_t n = d.size();
  if (n == 0) return;
  double smax = 0.0;
  for (double x : d) smax = std::max(smax, std::abs(x));
  for (double x : e) smax = std::max(smax, std::abs(x));
  if (smax == 0.0) return;

  const std::size_t maxit = 40 * n * n + 100;
  std::size_t iter = 0;
  std::size_t hi = n - 1;
  while (true) {
    // deflate negligible superdiagonals
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(e[i]) <= EPS * (std::abs(d[i]) + std::abs(d[i + 1])) ||
          std::abs(e[i]) <= 0.5 * EPS * smax)
        e[i] = 0.0;
    while (hi > 0 && e[hi - 1] == 0.0) --hi;
    if (hi == 0) break;
    std::size_t lo = hi;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;
    if (++iter > maxit)
      throw DecompositionFailure("bidiagonal QR did not converge");

    double shift = ssmin_2x2(d[hi - 1], e[hi - 1], d[hi]);
    if (shift > 0.0 && (shift / smax) * (shift / smax) <= EPS) shift = 0.0;
    if (d[lo] == 0.0) shift = 0.0;

    double c, s, r;
    if (shift == 0.0) {
      double cs = 1.0, oldcs = 1.0, oldsn = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        detail::givens(d[i] * cs, e[i], cs, s, r);
        if (i > lo) e[i - 1] = oldsn * r;
        detail::givens(oldcs * r, d[i + 1] * s, oldcs, oldsn, d[i]);
        if (v) kern::rot(v->rows(), v->col(i), v->col(i + 1), cs, s);
        if (u) kern::rot(u->rows(), u->col(i), u->col(i + 1), oldcs, oldsn);
      }
      const double h = d[hi] * cs;
      e[hi - 1] = h * oldsn;
      d[hi] = h * oldcs;
    } else {
      double f = (std::abs(d[lo]) - shift) *
                 (std::copysign(1.0, d[lo]) + shift / d[lo]);
      double g = e[lo];
      for (std::size_t i = lo; i < hi; ++i) {
        detail::givens(f, g, c, s, r);
        if (i > lo) e[i - 1] = r;
        f = c * d[i] + s * e[i];
        e[i] = c * e[i] - s * d[i];
        g = s * d[i + 1];
        d[i + 1] = c * d[i + 1];
        if (v) kern::rot(v->rows(), v->col(i), v->col(i + 1), c, s);
        detail::givens(f, g, c, s, r);
        d[i] = r;
        f = c * e[i] + s * d[i + 1];
        d[i + 1] = c * d[i + 1] - s * e[i];
        if (i + 1 < hi) {
          g = s * e[i + 1];
          e[i + 1] = c * e[i + 1];
        }
        if (u) kern::rot(u->rows(), u->col(i), u->col(i + 1), c, s);
      }
      e[hi - 1] = f;
    }
  }
}

template <class T>
void flip_and_sort(std::vector<double>& d, Mat<T>* u, Mat<T>* v) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] < 0.0) {
      d[i] = -d[i];
      if (u)
        for (std::size_t r = 0; r < u->rows(); ++r) (*u)(r, i) = -(*u)(r, i);
      else if (v)
        for (std::size_t r = 0; r < v->rows(); ++r) (*v)(r, i) = -(*v)(r, i);
    }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  std::vector<double> ds(n);
  for (std::size_t i = 0; i < n; ++i) ds[i] = d[idx[i]];
  d = ds;
  auto permute_cols = [&](Mat<T>& m) {
    Mat<T> out(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::size_t src = j < n ? idx[j] : j;
      std::copy(m.col(src), m.col(src) + m.rows(), out.col(j));
    }
    m = std::move(out);
  };
  if (u) permute_cols(*u);
  if (v) permute_cols(*v);
}

// Tall (m >= n) path with independently selectable vector sides.
template <class T>
SvdResult<T> svd_tall(Mat<T> a, bool want_u, bool want_v, bool full_u) {
  const std::size_t m = a.rows(), n = a.cols();
  SvdResult<T> out;
  if (n == 0) {
    if (want_u && full_u) out.u = Mat<T>::identity(m);
    return out;
  }

  // QR-first reduction for clearly tall inputs
  if (m >= n + n / 4 + 8) {
    QrFac<T> f = qr_factor(std::move(a));
    SvdResult<T> s = svd_tall(f.r(), want_u, want_v, false);
    out.sigma = std::move(s.sigma);
    out.v = std::move(s.v);
    if (want_u && !full_u) {
      Mat<T> q = f.q(n);
      out.u = mul(q, s.u);
    } else if (want_u) {
      Mat<T> q = f.q(m);
      out.u = Mat<T>(m, m);
      kern::gemm_acc(m, n, n, T(1), q.data(), m, kern::Op::None, s.u.data(), n,
                     kern::Op::None, out.u.data(), m);
      for (std::size_t j = n; j < m; ++j)
        std::copy(q.col(j), q.col(j) + m, out.u.col(j));
    }
    return out;
  }

  std::vector<double> d, e;
  std::vector<T> tauq, taup;
  bidiagonalize(a, d, e, tauq, taup);

  Mat<T> u, v;
  Mat<T>*up = nullptr, *vp = nullptr;
  if (want_u) {
    u = form_bidiag_u(a, tauq, full_u ? m : n);
    up = &u;
  }
  if (want_v) {
    v = form_bidiag_v(a, taup);
    vp = &v;
  }
  bidiag_qr(d, e, up, vp);
  flip_and_sort(d, up, vp);
  out.sigma = std::move(d);
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

}  // namespace

template <class T>
SvdResult<T> svd_compute(const Mat<T>& a, SvdMode mode) {
  const bool want_u =
      mode == SvdMode::Thin || mode == SvdMode::FullU || mode == SvdMode::LeftOnly;
  const bool want_v = mode == SvdMode::Thin || mode == SvdMode::FullU ||
                      mode == SvdMode::RightOnly;
  if (a.rows() >= a.cols())
    return svd_tall(Mat<T>(a), want_u, want_v, mode == SvdMode::FullU);
  // wide: factor the adjoint and swap factors; v of the original needs the
  // full left factor of the adjoint
  SvdResult<T> s = svd_tall(a.adjoint(), want_v, want_u, true);
  SvdResult<T> out;
  out.sigma = std::move(s.sigma);
  out.u = std::move(s.v);  // m x m
  out.v = std::move(s.u);  // n x n
  return out;
}

SvdResult<cplx> svd_auto(const Matrix& a, SvdMode mode) {
  if (is_real(a)) {
    SvdResult<double> s = svd_compute(real_part(a), mode);
    return {std::move(s.sigma), to_complex(s.u), to_complex(s.v)};
  }
  return svd_compute(a, mode);
}

template SvdResult<double> svd_compute<double>(const RMatrix&, SvdMode);
template SvdResult<cplx> svd_compute<cplx>(const Matrix&, SvdMode);

}  // namespace damplab
