#ifndef DAMPLAB_FACTOR_HPP
#define DAMPLAB_FACTOR_HPP

// Dense factorizations: Householder QR, singular value decomposition,
// Hermitian eigendecomposition, complex Schur form, LU, matrix exponential.
// Everything is deterministic: fixed sweep orders, no randomization, no
// threading, so repeated runs produce identical bits.

#include <stdexcept>
#include <vector>

#include "damplab/dense.hpp"

namespace damplab {

struct DecompositionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- QR ---------------------------------------------------------------

template <class T>
struct QrFac {
  Mat<T> a;            // R in the upper triangle, reflectors below
  std::vector<T> tau;  // one per reflector
  std::size_t m = 0, n = 0;

  Mat<T> r() const;  // min(m,n) x n upper triangular factor

  // First `ncols` columns of the full m x m Q.
  Mat<T> q(std::size_t ncols) const;

  // Columns j0 .. j0+count-1 of the full Q (used for orthogonal complements).
  Mat<T> q_columns(std::size_t j0, std::size_t count) const;

  // c := Q c (conj_trans=false) or Q^H c (true); c has m rows.
  void apply_q(Mat<T>& c, bool conj_trans) const;
};

template <class T>
QrFac<T> qr_factor(Mat<T> a);

// ---- SVD --------------------------------------------------------------

enum class SvdMode { ValuesOnly, Thin, FullU, LeftOnly, RightOnly };

template <class T>
struct SvdResult {
  std::vector<double> sigma;  // descending, min(m,n) values
  Mat<T> u;                   // m x min(m,n) (Thin/LeftOnly) or m x m (FullU)
  Mat<T> v;                   // n x n full (Thin/FullU/RightOnly), else empty
};

template <class T>
SvdResult<T> svd_compute(const Mat<T>& a, SvdMode mode);

// Complex entry point with a real fast path: exactly-real input is factored
// in real arithmetic and widened afterwards.
SvdResult<cplx> svd_auto(const Matrix& a, SvdMode mode);

// ---- Hermitian eigendecomposition --------------------------------------

template <class T>
struct HeigResult {
  std::vector<double> w;  // ascending
  Mat<T> vectors;         // n x n when requested
};

// Assumes a is Hermitian (symmetric for T=double); only the Hermitian part
// is referenced. Decoupled blocks (a permuted block-diagonal structure) are
// detected and solved independently.
template <class T>
HeigResult<T> heig_compute(const Mat<T>& a, bool want_vectors);

HeigResult<cplx> heig_auto(const Matrix& a, bool want_vectors);

// ---- Schur form / eigendecomposition (complex, general) ----------------

struct SchurResult {
  Matrix t;  // upper triangular
  Matrix q;  // unitary, a = q t q^H
  std::vector<cplx> values;
};
SchurResult schur_compute(const Matrix& a);

struct EigResult {
  std::vector<cplx> values;
  Matrix vectors;          // right eigenvectors, unit columns
  double vector_residual;  // ||A V - V diag|| _F / max(1, ||A||_F)
};
EigResult eig_compute(const Matrix& a);

// ---- LU -----------------------------------------------------------------

template <class T>
struct LuFac {
  Mat<T> a;
  std::vector<std::size_t> piv;
  bool singular = false;
  double min_pivot = 0.0;
};

template <class T>
LuFac<T> lu_factor(Mat<T> a);

template <class T>
void lu_solve_inplace(const LuFac<T>& f, Mat<T>& b);

template <class T>
Mat<T> lu_solve(const LuFac<T>& f, Mat<T> b) {
  lu_solve_inplace(f, b);
  return b;
}

template <class T>
void lu_solve_vec(const LuFac<T>& f, T* b);

template <class T>
Mat<T> lu_inverse(const LuFac<T>& f);

// ---- matrix exponential --------------------------------------------------

// Pade(13) with scaling and squaring.
Matrix expm(const Matrix& a);

}  // namespace damplab

#endif
