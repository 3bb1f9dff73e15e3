#ifndef DAMPLAB_KERNELS_HPP
#define DAMPLAB_KERNELS_HPP

// Low-level dense arithmetic kernels. Every kernel exists in a scalar
// reference version and (on x86-64 with AVX2+FMA) a vectorized version;
// the active backend is chosen once at runtime and can be forced for
// equivalence testing. All higher-level factorizations are built on these.

#include <complex>
#include <cstddef>

namespace damplab::kern {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

// Backend actually executing right now.
Backend active_backend();

// True if the AVX2 path is compiled in and the CPU supports it.
bool avx2_available();

// Force a backend (tests). Forcing Avx2 on unsupported hardware throws.
void force_backend(Backend b);
void reset_backend();

// ---- level-1 --------------------------------------------------------------

// sum_i conj(x_i) * y_i
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
double dot(std::size_t n, const double* x, const double* y);

// y += a*x
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void axpy(std::size_t n, double a, const double* x, double* y);

// x *= a
void scal(std::size_t n, cplx a, cplx* x);
void scal(std::size_t n, double a, double* x);

// sum_i |x_i|^2
double nrm2sq(std::size_t n, const cplx* x);
double nrm2sq(std::size_t n, const double* x);

// Plane rotation with real coefficients:
//   x_i <-  c*x_i + s*y_i
//   y_i <- -s*x_i + c*y_i
void rot(std::size_t n, double* x, double* y, double c, double s);
void rot(std::size_t n, cplx* x, cplx* y, double c, double s);

// Plane rotation with complex s (c real), as used on complex Hessenberg
// sweeps:
//   x_i <-  c*x_i + s*y_i
//   y_i <- -conj(s)*x_i + c*y_i
void crot(std::size_t n, cplx* x, cplx* y, double c, cplx s);

// ---- level-3 --------------------------------------------------------------

enum class Op { None, ConjT };

// C += alpha * op(A) * op(B), all column-major.
// m, n are the dimensions of C; k is the inner dimension.
void gemm_acc(std::size_t m, std::size_t n, std::size_t k, cplx alpha,
              const cplx* a, std::size_t lda, Op opa,
              const cplx* b, std::size_t ldb, Op opb,
              cplx* c, std::size_t ldc);
void gemm_acc(std::size_t m, std::size_t n, std::size_t k, double alpha,
              const double* a, std::size_t lda, Op opa,
              const double* b, std::size_t ldb, Op opb,
              double* c, std::size_t ldc);

}  // namespace damplab::kern

#endif
