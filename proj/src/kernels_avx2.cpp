// AVX2/FMA backend. This translation unit is compiled with -mavx2 -mfma;
// nothing here runs unless the CPU reports both features at startup.

#include "kernels_detail.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define DAMPLAB_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace damplab::kern::detail {

#if DAMPLAB_HAVE_AVX2_TU

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

cplx v_dotc(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc1 = _mm256_setzero_pd();  // xr*yr at even, xr*yi at odd
  __m256d acc2 = _mm256_setzero_pd();  // xi*yi at even, xi*yr at odd
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xrr = _mm256_movedup_pd(xv);
    __m256d xii = _mm256_permute_pd(xv, 0xF);
    __m256d ys = _mm256_permute_pd(yv, 0x5);
    acc1 = _mm256_fmadd_pd(xrr, yv, acc1);
    acc2 = _mm256_fmadd_pd(xii, ys, acc2);
  }
  // re = even(acc1) + even(acc2), im = odd(acc1) - odd(acc2)
  __m256d comb = _mm256_addsub_pd(acc1, _mm256_sub_pd(_mm256_setzero_pd(), acc2));
  __m128d lo = _mm256_castpd256_pd128(comb);
  __m128d hi = _mm256_extractf128_pd(comb, 1);
  __m128d pair = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(pair);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double v_dot(std::size_t n, const double* x, const double* y) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void v_axpy_z(std::size_t n, cplx a, const cplx* x, cplx* y) {
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  const double ar = a.real(), ai = a.imag();
  __m256d arv = _mm256_broadcast_sd(&ar);
  __m256d aiv = _mm256_broadcast_sd(&ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(xs, aiv);
    __m256d p = _mm256_fmaddsub_pd(xv, arv, t);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_axpy_d(std::size_t n, double a, const double* x, double* y) {
  __m256d av = _mm256_broadcast_sd(&a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_scal_z(std::size_t n, cplx a, cplx* x) {
  double* xd = reinterpret_cast<double*>(x);
  const double ar = a.real(), ai = a.imag();
  __m256d arv = _mm256_broadcast_sd(&ar);
  __m256d aiv = _mm256_broadcast_sd(&ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d t = _mm256_mul_pd(xs, aiv);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(xv, arv, t));
  }
  for (; i < n; ++i) x[i] *= a;
}

void v_scal_d(std::size_t n, double a, double* x) {
  __m256d av = _mm256_broadcast_sd(&a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double v_nrm2sq_d(std::size_t n, const double* x) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d x0 = _mm256_loadu_pd(x + i);
    __m256d x1 = _mm256_loadu_pd(x + i + 4);
    a0 = _mm256_fmadd_pd(x0, x0, a0);
    a1 = _mm256_fmadd_pd(x1, x1, a1);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void v_rot_d(std::size_t n, double* x, double* y, double c, double s) {
  __m256d cv = _mm256_broadcast_sd(&c);
  __m256d sv = _mm256_broadcast_sd(&s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d xn = _mm256_fmadd_pd(sv, yv, _mm256_mul_pd(cv, xv));
    __m256d yn = _mm256_fnmadd_pd(sv, xv, _mm256_mul_pd(cv, yv));
    _mm256_storeu_pd(x + i, xn);
    _mm256_storeu_pd(y + i, yn);
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

void v_crot_z(std::size_t n, cplx* x, cplx* y, double c, cplx s) {
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const double sr = s.real(), si = s.imag(), nsi = -s.imag();
  __m256d cv = _mm256_broadcast_sd(&c);
  __m256d srv = _mm256_broadcast_sd(&sr);
  __m256d siv = _mm256_broadcast_sd(&si);
  __m256d nsiv = _mm256_broadcast_sd(&nsi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d ys = _mm256_permute_pd(yv, 0x5);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d sy = _mm256_fmaddsub_pd(yv, srv, _mm256_mul_pd(ys, siv));
    __m256d csx = _mm256_fmaddsub_pd(xv, srv, _mm256_mul_pd(xs, nsiv));
    __m256d xn = _mm256_fmadd_pd(xv, cv, sy);
    __m256d yn = _mm256_fmsub_pd(yv, cv, csx);
    _mm256_storeu_pd(xd + 2 * i, xn);
    _mm256_storeu_pd(yd + 2 * i, yn);
  }
  const cplx sc = std::conj(s);
  for (; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - sc * xi;
  }
}

void v_ukern_d(std::size_t k, const double* apack, const double* bpack,
               double* c, std::size_t ldc) {
  __m256d acc[2 * DNR];
  for (auto& a : acc) a = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    __m256d a0 = _mm256_loadu_pd(apack + p * DMR);
    __m256d a1 = _mm256_loadu_pd(apack + p * DMR + 4);
    const double* b = bpack + p * DNR;
    for (std::size_t j = 0; j < DNR; ++j) {
      __m256d bv = _mm256_broadcast_sd(b + j);
      acc[2 * j] = _mm256_fmadd_pd(a0, bv, acc[2 * j]);
      acc[2 * j + 1] = _mm256_fmadd_pd(a1, bv, acc[2 * j + 1]);
    }
  }
  for (std::size_t j = 0; j < DNR; ++j) {
    double* cj = c + j * ldc;
    _mm256_storeu_pd(cj, _mm256_add_pd(_mm256_loadu_pd(cj), acc[2 * j]));
    _mm256_storeu_pd(cj + 4, _mm256_add_pd(_mm256_loadu_pd(cj + 4), acc[2 * j + 1]));
  }
}

void v_ukern_z(std::size_t k, const cplx* apack, const cplx* bpack,
               cplx* c, std::size_t ldc) {
  __m256d acc[2 * ZNR];
  for (auto& a : acc) a = _mm256_setzero_pd();
  const double* ad = reinterpret_cast<const double*>(apack);
  const double* bd = reinterpret_cast<const double*>(bpack);
  for (std::size_t p = 0; p < k; ++p) {
    __m256d a0 = _mm256_loadu_pd(ad + p * 2 * ZMR);
    __m256d a1 = _mm256_loadu_pd(ad + p * 2 * ZMR + 4);
    __m256d s0 = _mm256_permute_pd(a0, 0x5);
    __m256d s1 = _mm256_permute_pd(a1, 0x5);
    const double* b = bd + p * 2 * ZNR;
    for (std::size_t j = 0; j < ZNR; ++j) {
      __m256d brv = _mm256_broadcast_sd(b + 2 * j);
      __m256d biv = _mm256_broadcast_sd(b + 2 * j + 1);
      __m256d t0 = _mm256_mul_pd(s0, biv);
      __m256d t1 = _mm256_mul_pd(s1, biv);
      acc[2 * j] = _mm256_add_pd(acc[2 * j], _mm256_fmaddsub_pd(a0, brv, t0));
      acc[2 * j + 1] = _mm256_add_pd(acc[2 * j + 1], _mm256_fmaddsub_pd(a1, brv, t1));
    }
  }
  for (std::size_t j = 0; j < ZNR; ++j) {
    double* cj = reinterpret_cast<double*>(c + j * ldc);
    _mm256_storeu_pd(cj, _mm256_add_pd(_mm256_loadu_pd(cj), acc[2 * j]));
    _mm256_storeu_pd(cj + 4, _mm256_add_pd(_mm256_loadu_pd(cj + 4), acc[2 * j + 1]));
  }
}

const Table avx2_impl = {
    v_dotc, v_dot, v_axpy_z, v_axpy_d, v_scal_z, v_scal_d,
    v_nrm2sq_d, v_rot_d, v_crot_z, v_ukern_d, v_ukern_z,
};

}  // namespace

const Table* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_impl;
  return nullptr;
}

#else

const Table* avx2_table() { return nullptr; }

#endif

}  // namespace damplab::kern::detail
