#include <algorithm>
#include <cmath>
#include <limits>

#include "damplab/factor.hpp"
#include "householder.hpp"

namespace damplab {

namespace {

constexpr double EPS = std::numeric_limits<double>::epsilon();

// Unitary reduction to upper Hessenberg form; q accumulates the transform.
void hessenberg(Matrix& h, Matrix& q) {
  const std::size_t n = h.rows();
  q = Matrix::identity(n);
  if (n < 3) return;
  std::vector<cplx> tau(n - 2);
  for (std::size_t j = 0; j + 2 < n; ++j) {
    const std::size_t len = n - j - 1;
    detail::make_householder(h(j + 1, j), &h(j + 2, j), len - 1, tau[j]);
    // H^H from the left on rows j+1.., columns j+1..
    detail::apply_householder_left(&h(j + 2, j), tau[j], true, &h(j + 1, j + 1),
                                   len, n - j - 1, n);
    // H from the right on columns j+1.., all rows
    detail::apply_householder_right(&h(j + 2, j), tau[j], &h(0, j + 1), n, len,
                                    n);
  }
  for (std::size_t j = n - 2; j-- > 0;) {
    const std::size_t len = n - j - 1;
    detail::apply_householder_left(&h(j + 2, j), tau[j], false, &q(j + 1, 0),
                                   len, n, n);
  }
  // clear the annihilated entries
  for (std::size_t j = 0; j + 2 < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i) h(i, j) = cplx(0);
}

// Apply the rotation [c s; -conj(s) c] to rows (r1, r2) over columns
// [c0, c1). Rows are strided; kept scalar.
void rot_rows(Matrix& a, std::size_t r1, std::size_t r2, std::size_t c0,
              std::size_t c1, double c, cplx s) {
  const cplx sc = std::conj(s);
  for (std::size_t j = c0; j < c1; ++j) {
    const cplx x = a(r1, j), y = a(r2, j);
    a(r1, j) = c * x + s * y;
    a(r2, j) = c * y - sc * x;
  }
}

void rot_cols(Matrix& a, std::size_t c1, std::size_t c2, std::size_t r0,
              std::size_t r1, double c, cplx s) {
  // columns transform with the adjoint rotation so that similarity holds
  const cplx sc = std::conj(s);
  for (std::size_t i = r0; i < r1; ++i) {
    const cplx x = a(i, c1), y = a(i, c2);
    a(i, c1) = c * x + sc * y;
    a(i, c2) = c * y - s * x;
  }
}

}  // namespace

SchurResult schur_compute(const Matrix& a_in) {
  const std::size_t n = a_in.rows();
  if (a_in.cols() != n) throw DecompositionFailure("schur needs a square matrix");
  SchurResult out;
  out.t = a_in;
  hessenberg(out.t, out.q);
  Matrix& t = out.t;
  Matrix& q = out.q;

  double anorm = t.norm_fro();
  if (anorm == 0.0) anorm = 1.0;

  std::size_t hi = n;  // active block is [0, hi)
  std::size_t stall = 0;
  const std::size_t maxiter = 60 * n + 200;
  std::size_t total = 0;
  while (hi > 1) {
    if (++total > maxiter)
      throw DecompositionFailure("QR iteration did not converge");
    // deflation scan
    std::size_t lo = hi - 1;
    while (lo > 0) {
      const double sub = std::abs(t(lo, lo - 1));
      if (sub <= EPS * (std::abs(t(lo - 1, lo - 1)) + std::abs(t(lo, lo))) ||
          sub <= EPS * anorm * 1e-3) {
        t(lo, lo - 1) = cplx(0);
        break;
      }
      --lo;
    }
    if (lo == hi - 1) {
      hi -= 1;
      stall = 0;
      continue;
    }

    // shift
    cplx shift;
    if (++stall % 12 == 0) {
      shift = t(hi - 1, hi - 1) + 0.75 * std::abs(t(hi - 1, hi - 2));
    } else {
      const cplx a11 = t(hi - 2, hi - 2), a12 = t(hi - 2, hi - 1);
      const cplx a21 = t(hi - 1, hi - 2), a22 = t(hi - 1, hi - 1);
      const cplx tr = a11 + a22;
      const cplx disc = std::sqrt(tr * tr - 4.0 * (a11 * a22 - a12 * a21));
      const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
      shift = std::abs(l1 - a22) < std::abs(l2 - a22) ? l1 : l2;
    }

    // implicit single-shift sweep over [lo, hi)
    cplx f = t(lo, lo) - shift;
    cplx g = t(lo + 1, lo);
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      double c;
      cplx s, r;
      detail::cgivens(f, g, c, s, r);
      if (k > lo) {
        t(k, k - 1) = r;
        t(k + 1, k - 1) = cplx(0);
      }
      rot_rows(t, k, k + 1, k, n, c, s);
      rot_cols(t, k, k + 1, 0, std::min(k + 3, hi), c, s);
      rot_cols(q, k, k + 1, 0, n, c, s);
      if (k + 2 < hi) {
        f = t(k + 1, k);
        g = t(k + 2, k);
      }
    }
  }

  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = t(i, i);
  return out;
}

EigResult eig_compute(const Matrix& a) {
  const std::size_t n = a.rows();
  SchurResult s = schur_compute(a);
  // right eigenvectors of the triangular factor by back-substitution
  Matrix x(n, n);
  const double tnorm = std::max(s.t.norm_max(), 1e-300);
  const double smin = EPS * tnorm;
  for (std::size_t k = 0; k < n; ++k) {
    x(k, k) = cplx(1);
    for (std::size_t i = k; i-- > 0;) {
      cplx acc = cplx(0);
      for (std::size_t j = i + 1; j <= k; ++j) acc += s.t(i, j) * x(j, k);
      cplx den = s.t(i, i) - s.t(k, k);
      if (std::abs(den) < smin) den = cplx(smin);
      x(i, k) = -acc / den;
    }
  }
  EigResult out;
  out.values = std::move(s.values);
  out.vectors = mul(s.q, x);
  for (std::size_t j = 0; j < n; ++j) {
    const double nrm = std::sqrt(kern::nrm2sq(n, out.vectors.col(j)));
    if (nrm > 0.0) kern::scal(n, cplx(1.0 / nrm), out.vectors.col(j));
  }
  // residual ||A V - V diag|| / max(1, ||A||)
  Matrix av = mul(a, out.vectors);
  for (std::size_t j = 0; j < n; ++j)
    kern::axpy(n, -out.values[j], out.vectors.col(j), av.col(j));
  out.vector_residual = av.norm_fro() / std::max(1.0, a.norm_fro());
  return out;
}

}  // namespace damplab
