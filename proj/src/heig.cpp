#include <algorithm>
#include <cmath>
#include <cstdint>
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

// Hermitian tridiagonalization; reflector tails stay in the lower triangle.
template <class T>
void tridiagonalize(Mat<T>& a, std::vector<double>& d, std::vector<double>& e,
                    std::vector<T>& tau) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  tau.assign(n > 0 ? n - 1 : 0, T(0));
  std::vector<T> v(n), x(n), w(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t len = n - j - 1;
    e[j] = detail::make_householder(
        a(j + 1, j), len > 1 ? &a(j + 2, j) : nullptr, len - 1, tau[j]);
    if (tau[j] == T(0)) continue;
    v[0] = T(1);
    for (std::size_t i = 1; i < len; ++i) v[i] = a(j + 1 + i, j);
    // x = tau * A_sub * v
    std::fill(x.begin(), x.begin() + len, T(0));
    for (std::size_t c = 0; c < len; ++c)
      kern::axpy(len, tau[j] * v[c], &a(j + 1, j + 1 + c), x.data());
    // w = x - (tau/2)(x^H v) v
    T alpha;
    if constexpr (std::is_same_v<T, cplx>)
      alpha = kern::dotc(len, x.data(), v.data());
    else
      alpha = kern::dot(len, x.data(), v.data());
    alpha *= T(-0.5) * tau[j];
    std::copy(x.begin(), x.begin() + len, w.begin());
    kern::axpy(len, alpha, v.data(), w.data());
    // A_sub -= v w^H + w v^H
    for (std::size_t c = 0; c < len; ++c) {
      kern::axpy(len, -conj_if(w[c]), v.data(), &a(j + 1, j + 1 + c));
      kern::axpy(len, -conj_if(v[c]), w.data(), &a(j + 1, j + 1 + c));
    }
  }
  for (std::size_t j = 0; j < n; ++j) d[j] = detail::re_of(a(j, j));
}

template <class T>
Mat<T> form_tridiag_q(const Mat<T>& a, const std::vector<T>& tau) {
  const std::size_t n = a.rows();
  Mat<T> q = Mat<T>::identity(n);
  if (n < 2) return q;
  for (std::size_t j = n - 1; j-- > 0;) {
    const std::size_t len = n - j - 1;
    detail::apply_householder_left(len > 1 ? &a(j + 2, j) : nullptr, tau[j],
                                   false, &q(j + 1, 0), len, n, n);
  }
  return q;
}

// Implicit-shift QL on a real symmetric tridiagonal, rotations accumulated
// into the columns of z when present (tql2 lineage).
template <class T>
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, Mat<T>* z) {
  const std::size_t n = d.size();
  if (n < 2) return;
  e.resize(n, 0.0);  // one spare slot; the sweep parks values in e[m]
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    while (true) {
      std::size_t m = l;
      while (m + 1 < n &&
             std::abs(e[m]) > EPS * (std::abs(d[m]) + std::abs(d[m + 1])))
        ++m;
      if (m == l) break;
      if (++iter > 80)
        throw DecompositionFailure("tridiagonal QL did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z) kern::rot(z->rows(), z->col(i + 1), z->col(i), c, s);
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

template <class T>
HeigResult<T> heig_dense(Mat<T> a, bool want_vectors) {
  const std::size_t n = a.rows();
  std::vector<double> d, e;
  std::vector<T> tau;
  tridiagonalize(a, d, e, tau);
  HeigResult<T> out;
  if (want_vectors) {
    Mat<T> z = form_tridiag_q(a, tau);
    tridiag_ql(d, e, &z);
    out.vectors = std::move(z);
  } else {
    tridiag_ql<T>(d, e, nullptr);
  }
  // ascending sort
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.w[i] = d[idx[i]];
  if (want_vectors) {
    Mat<T> sorted(n, n);
    for (std::size_t j = 0; j < n; ++j)
      std::copy(out.vectors.col(idx[j]), out.vectors.col(idx[j]) + n,
                sorted.col(j));
    out.vectors = std::move(sorted);
  }
  return out;
}

// Connected components of the off-diagonal sparsity pattern; decoupled
// blocks (block-diagonal material matrices, masked damping) are solved
// independently.
std::vector<std::size_t> components(const auto& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> comp(n, SIZE_MAX);
  std::vector<std::size_t> stack;
  std::size_t ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != SIZE_MAX) continue;
    stack.push_back(s);
    comp[s] = ncomp;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (comp[j] != SIZE_MAX || j == i) continue;
        if (std::abs(a(i, j)) != 0.0 || std::abs(a(j, i)) != 0.0) {
          comp[j] = ncomp;
          stack.push_back(j);
        }
      }
    }
    ++ncomp;
  }
  comp.push_back(ncomp);  // sentinel: component count at the back
  return comp;
}

}  // namespace

template <class T>
HeigResult<T> heig_compute(const Mat<T>& a_in, bool want_vectors) {
  const std::size_t n = a_in.rows();
  // only the Hermitian part is referenced
  Mat<T> a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      a(i, j) = (a_in(i, j) + conj_if(a_in(j, i))) * T(0.5);

  std::vector<std::size_t> comp = components(a);
  const std::size_t ncomp = comp.back();
  comp.pop_back();
  if (ncomp <= 1) return heig_dense(std::move(a), want_vectors);

  HeigResult<T> out;
  out.w.resize(n);
  if (want_vectors) out.vectors = Mat<T>(n, n);
  std::vector<std::pair<double, std::size_t>> order;  // (value, position)
  order.reserve(n);
  std::size_t written = 0;
  for (std::size_t c = 0; c < ncomp; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (comp[i] == c) idx.push_back(i);
    Mat<T> sub(idx.size(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (std::size_t i = 0; i < idx.size(); ++i)
        sub(i, j) = a(idx[i], idx[j]);
    HeigResult<T> r = heig_dense(std::move(sub), want_vectors);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const std::size_t pos = written + j;
      out.w[pos] = r.w[j];
      order.emplace_back(r.w[j], pos);
      if (want_vectors)
        for (std::size_t i = 0; i < idx.size(); ++i)
          out.vectors(idx[i], pos) = r.vectors(i, j);
    }
    written += idx.size();
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<double> w(n);
  Mat<T> vecs;
  if (want_vectors) vecs = Mat<T>(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = order[j].first;
    if (want_vectors)
      std::copy(out.vectors.col(order[j].second),
                out.vectors.col(order[j].second) + n, vecs.col(j));
  }
  out.w = std::move(w);
  if (want_vectors) out.vectors = std::move(vecs);
  return out;
}

HeigResult<cplx> heig_auto(const Matrix& a, bool want_vectors) {
  if (is_real(a)) {
    HeigResult<double> r = heig_compute(real_part(a), want_vectors);
    return {std::move(r.w), to_complex(r.vectors)};
  }
  return heig_compute(a, want_vectors);
}

template HeigResult<double> heig_compute<double>(const RMatrix&, bool);
template HeigResult<cplx> heig_compute<cplx>(const Matrix&, bool);

}  // namespace damplab
