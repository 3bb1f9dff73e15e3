#include "kernels_detail.hpp"

#include <stdexcept>
#include <vector>

namespace damplab::kern {

namespace {

struct State {
  const detail::Table* table;
  Backend backend;
};

State pick_default() {
  if (const detail::Table* t = detail::avx2_table()) return {t, Backend::Avx2};
  return {&detail::scalar_table, Backend::Scalar};
}

State& state() {
  static State s = pick_default();
  return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

bool avx2_available() { return detail::avx2_table() != nullptr; }

void force_backend(Backend b) {
  if (b == Backend::Avx2) {
    const detail::Table* t = detail::avx2_table();
    if (!t) throw std::runtime_error("AVX2 backend not available on this CPU");
    state() = {t, Backend::Avx2};
  } else {
    state() = {&detail::scalar_table, Backend::Scalar};
  }
}

void reset_backend() { state() = pick_default(); }

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  return state().table->dotc(n, x, y);
}
double dot(std::size_t n, const double* x, const double* y) {
  return state().table->dot(n, x, y);
}
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  state().table->axpy_z(n, a, x, y);
}
void axpy(std::size_t n, double a, const double* x, double* y) {
  state().table->axpy_d(n, a, x, y);
}
void scal(std::size_t n, cplx a, cplx* x) { state().table->scal_z(n, a, x); }
void scal(std::size_t n, double a, double* x) { state().table->scal_d(n, a, x); }

double nrm2sq(std::size_t n, const cplx* x) {
  return state().table->nrm2sq_d(2 * n, reinterpret_cast<const double*>(x));
}
double nrm2sq(std::size_t n, const double* x) {
  return state().table->nrm2sq_d(n, x);
}

void rot(std::size_t n, double* x, double* y, double c, double s) {
  state().table->rot_d(n, x, y, c, s);
}
// A rotation with real coefficients acts on re/im parts independently.
void rot(std::size_t n, cplx* x, cplx* y, double c, double s) {
  state().table->rot_d(2 * n, reinterpret_cast<double*>(x),
                       reinterpret_cast<double*>(y), c, s);
}
void crot(std::size_t n, cplx* x, cplx* y, double c, cplx s) {
  state().table->crot_z(n, x, y, c, s);
}

// ---- blocked GEMM ----------------------------------------------------------

namespace {

constexpr std::size_t KC = 256;
constexpr std::size_t MC = 128;
constexpr std::size_t NC = 512;

template <class T>
T fetch(const T* a, std::size_t lda, Op op, std::size_t i, std::size_t k) {
  if (op == Op::None) return a[i + k * lda];
  if constexpr (std::is_same_v<T, cplx>)
    return std::conj(a[k + i * lda]);
  else
    return a[k + i * lda];
}

template <class T, std::size_t MR, std::size_t NR>
void gemm_driver(std::size_t m, std::size_t n, std::size_t k, T alpha,
                 const T* a, std::size_t lda, Op opa, const T* b,
                 std::size_t ldb, Op opb, T* c, std::size_t ldc,
                 void (*ukern)(std::size_t, const T*, const T*, T*, std::size_t)) {
  if (m == 0 || n == 0 || k == 0 || alpha == T(0)) return;
  static thread_local std::vector<T> apack, bpack;
  apack.resize(MC * KC);
  bpack.resize(KC * ((NC + NR - 1) / NR) * NR);

  for (std::size_t p0 = 0; p0 < k; p0 += KC) {
    const std::size_t kb = std::min(KC, k - p0);
    for (std::size_t j0 = 0; j0 < n; j0 += NC) {
      const std::size_t nb = std::min(NC, n - j0);
      const std::size_t jstrips = (nb + NR - 1) / NR;
      for (std::size_t js = 0; js < jstrips; ++js) {
        T* dst = bpack.data() + js * (kb * NR);
        const std::size_t jv = std::min(NR, nb - js * NR);
        for (std::size_t p = 0; p < kb; ++p)
          for (std::size_t jc = 0; jc < NR; ++jc)
            dst[p * NR + jc] =
                jc < jv ? fetch(b, ldb, opb, p0 + p, j0 + js * NR + jc) : T(0);
      }
      for (std::size_t i0 = 0; i0 < m; i0 += MC) {
        const std::size_t mb = std::min(MC, m - i0);
        const std::size_t istrips = (mb + MR - 1) / MR;
        for (std::size_t is = 0; is < istrips; ++is) {
          T* dst = apack.data() + is * (kb * MR);
          const std::size_t iv = std::min(MR, mb - is * MR);
          for (std::size_t p = 0; p < kb; ++p)
            for (std::size_t r = 0; r < MR; ++r)
              dst[p * MR + r] =
                  r < iv ? alpha * fetch(a, lda, opa, i0 + is * MR + r, p0 + p)
                         : T(0);
        }
        for (std::size_t js = 0; js < jstrips; ++js) {
          const std::size_t jv = std::min(NR, nb - js * NR);
          for (std::size_t is = 0; is < istrips; ++is) {
            const std::size_t iv = std::min(MR, mb - is * MR);
            T* ctile = c + (i0 + is * MR) + (j0 + js * NR) * ldc;
            if (iv == MR && jv == NR) {
              ukern(kb, apack.data() + is * (kb * MR),
                    bpack.data() + js * (kb * NR), ctile, ldc);
            } else {
              T tmp[MR * NR] = {};
              ukern(kb, apack.data() + is * (kb * MR),
                    bpack.data() + js * (kb * NR), tmp, MR);
              for (std::size_t jc = 0; jc < jv; ++jc)
                for (std::size_t r = 0; r < iv; ++r)
                  ctile[r + jc * ldc] += tmp[r + jc * MR];
            }
          }
        }
      }
    }
  }
}

}  // namespace

void gemm_acc(std::size_t m, std::size_t n, std::size_t k, cplx alpha,
              const cplx* a, std::size_t lda, Op opa, const cplx* b,
              std::size_t ldb, Op opb, cplx* c, std::size_t ldc) {
  gemm_driver<cplx, detail::ZMR, detail::ZNR>(m, n, k, alpha, a, lda, opa, b,
                                              ldb, opb, c, ldc,
                                              state().table->ukern_z);
}

void gemm_acc(std::size_t m, std::size_t n, std::size_t k, double alpha,
              const double* a, std::size_t lda, Op opa, const double* b,
              std::size_t ldb, Op opb, double* c, std::size_t ldc) {
  gemm_driver<double, detail::DMR, detail::DNR>(m, n, k, alpha, a, lda, opa, b,
                                                ldb, opb, c, ldc,
                                                state().table->ukern_d);
}

}  // namespace damplab::kern
