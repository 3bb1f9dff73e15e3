// Factorization correctness: QR, SVD, Hermitian eigendecomposition, LU,
// Schur form, matrix exponential.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "damplab/factor.hpp"

using namespace damplab;

namespace {

std::mt19937_64 rng(777);

Matrix rand_matrix(std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j) = cplx(u(rng), u(rng));
  return a;
}

RMatrix rand_rmatrix(std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RMatrix a(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j) = u(rng);
  return a;
}

template <class T>
double ortho_residual(const Mat<T>& q) {
  Mat<T> g = mulH(q, q);
  g -= Mat<T>::identity(q.cols());
  return g.norm_fro();
}

}  // namespace

TEST_CASE("QR reconstructs and Q is unitary") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{6, 6},
                      {40, 12},
                      {12, 40},
                      {100, 70},
                      {65, 64}}) {
    Matrix a = rand_matrix(m, n);
    auto f = qr_factor(a);
    const std::size_t k = std::min(m, n);
    Matrix q = f.q(k);
    Matrix r = f.r();
    CHECK(ortho_residual(q) < 1e-12);
    Matrix qr = mul(q, r);
    qr -= a;
    CHECK(qr.norm_fro() < 1e-12 * a.norm_fro());
    // full Q
    Matrix qf = f.q(m);
    CHECK(ortho_residual(qf) < 1e-12);
  }
}

TEST_CASE("QR real path") {
  RMatrix a = rand_rmatrix(50, 20);
  auto f = qr_factor(a);
  RMatrix q = f.q(20);
  CHECK(ortho_residual(q) < 1e-12);
  RMatrix qr = mul(q, f.r());
  qr -= a;
  CHECK(qr.norm_fro() < 1e-12 * a.norm_fro());
}

namespace {

template <class T>
void check_svd(const Mat<T>& a, double tol = 1e-11) {
  auto s = svd_compute(a, SvdMode::Thin);
  const std::size_t k = std::min(a.rows(), a.cols());
  REQUIRE(s.sigma.size() == k);
  for (std::size_t i = 0; i + 1 < k; ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);
  CHECK(ortho_residual(s.u) < tol);
  CHECK(ortho_residual(s.v) < tol);
  // a = u diag(sigma) v^H  (v full n x n; first k columns carry sigma)
  Mat<T> us = s.u;
  for (std::size_t j = 0; j < k; ++j)
    kern::scal(us.rows(), T(s.sigma[j]), us.col(j));
  Mat<T> rec = matmul(kern::Op::None, us, kern::Op::ConjT, s.v.columns(0, k));
  rec -= a;
  CHECK(rec.norm_fro() <= tol * (1.0 + a.norm_fro()));
  // values-only agrees
  auto sv = svd_compute(a, SvdMode::ValuesOnly);
  for (std::size_t i = 0; i < k; ++i)
    CHECK(sv.sigma[i] == doctest::Approx(s.sigma[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("SVD on random complex shapes") {
  check_svd(rand_matrix(5, 5));
  check_svd(rand_matrix(30, 30));
  check_svd(rand_matrix(40, 13));
  check_svd(rand_matrix(13, 40));
  check_svd(rand_matrix(120, 20));
  check_svd(rand_matrix(64, 63));
}

TEST_CASE("SVD on random real shapes") {
  check_svd(rand_rmatrix(25, 25));
  check_svd(rand_rmatrix(60, 24));
  check_svd(rand_rmatrix(24, 60));
}

TEST_CASE("SVD of a diagonal matrix is exact") {
  Matrix a(4, 4);
  a(0, 0) = 3.0;
  a(1, 1) = -1.0;
  a(2, 2) = 0.25;
  a(3, 3) = 0.0;
  auto s = svd_compute(a, SvdMode::Thin);
  CHECK(s.sigma[0] == 3.0);
  CHECK(s.sigma[1] == 1.0);
  CHECK(s.sigma[2] == 0.25);
  CHECK(s.sigma[3] == 0.0);
}

TEST_CASE("SVD rank deficiency is resolved cleanly") {
  // rank-3 product of 20x3 and 15x3
  Matrix a = matmul(kern::Op::None, rand_matrix(20, 3), kern::Op::ConjT,
                    rand_matrix(15, 3));
  auto s = svd_compute(a, SvdMode::Thin);
  CHECK(s.sigma[2] > 1e-8);
  for (std::size_t i = 3; i < s.sigma.size(); ++i) CHECK(s.sigma[i] < 1e-12 * s.sigma[0]);
}

TEST_CASE("SVD FullU spans the whole codomain") {
  Matrix a = rand_matrix(30, 10);
  auto s = svd_compute(a, SvdMode::FullU);
  CHECK(s.u.rows() == 30);
  CHECK(s.u.cols() == 30);
  CHECK(ortho_residual(s.u) < 1e-11);
}

TEST_CASE("svd_auto takes the real fast path consistently") {
  RMatrix ar = rand_rmatrix(22, 14);
  Matrix a = to_complex(ar);
  auto s1 = svd_auto(a, SvdMode::Thin);
  auto s2 = svd_compute(a, SvdMode::Thin);
  REQUIRE(s1.sigma.size() == s2.sigma.size());
  for (std::size_t i = 0; i < s1.sigma.size(); ++i)
    CHECK(s1.sigma[i] == doctest::Approx(s2.sigma[i]).epsilon(1e-11));
}

TEST_CASE("Hermitian eigendecomposition") {
  Matrix b = rand_matrix(18, 18);
  Matrix a = mulH(b, b);  // Hermitian PSD
  auto h = heig_compute(a, true);
  CHECK(ortho_residual(h.vectors) < 1e-11);
  for (std::size_t i = 0; i + 1 < h.w.size(); ++i) CHECK(h.w[i] <= h.w[i + 1]);
  Matrix av = mul(a, h.vectors);
  for (std::size_t j = 0; j < 18; ++j)
    kern::axpy(std::size_t(18), -cplx(h.w[j]), h.vectors.col(j), av.col(j));
  CHECK(av.norm_fro() < 1e-11 * a.norm_fro());
  for (double w : h.w) CHECK(w > -1e-12);
}

TEST_CASE("heig detects decoupled blocks") {
  // permuted block-diagonal with 2x2 blocks
  const std::size_t n = 12;
  Matrix a(n, n);
  std::vector<std::size_t> perm{7, 2, 9, 0, 4, 11, 1, 8, 3, 10, 5, 6};
  for (std::size_t b = 0; b < n / 2; ++b) {
    const std::size_t i = perm[2 * b], j = perm[2 * b + 1];
    a(i, i) = 2.0 + b;
    a(j, j) = 1.0 + 0.5 * b;
    a(i, j) = cplx(0.3, 0.4);
    a(j, i) = cplx(0.3, -0.4);
  }
  auto h = heig_compute(a, true);
  Matrix av = mul(a, h.vectors);
  for (std::size_t j = 0; j < n; ++j)
    kern::axpy(n, -cplx(h.w[j]), h.vectors.col(j), av.col(j));
  CHECK(av.norm_fro() < 1e-12 * a.norm_fro());
}

TEST_CASE("LU solves and inverts") {
  Matrix a = rand_matrix(25, 25);
  Matrix b = rand_matrix(25, 3);
  auto f = lu_factor(a);
  Matrix x = lu_solve(f, b);
  Matrix r = mul(a, x);
  r -= b;
  CHECK(r.norm_fro() < 1e-10 * b.norm_fro());
  Matrix inv = lu_inverse(f);
  Matrix id = mul(a, inv);
  id -= Matrix::identity(25);
  CHECK(id.norm_fro() < 1e-10);
}

TEST_CASE("Schur form of a random complex matrix") {
  Matrix a = rand_matrix(24, 24);
  auto s = schur_compute(a);
  CHECK(ortho_residual(s.q) < 1e-11);
  // strictly lower part of t vanishes
  double low = 0.0;
  for (std::size_t j = 0; j < 24; ++j)
    for (std::size_t i = j + 1; i < 24; ++i) low = std::max(low, std::abs(s.t(i, j)));
  CHECK(low < 1e-12 * a.norm_fro());
  Matrix rec = mul(s.q, matmul(kern::Op::None, s.t, kern::Op::ConjT, s.q));
  rec -= a;
  CHECK(rec.norm_fro() < 1e-11 * a.norm_fro());
}

TEST_CASE("eig produces small residuals on diagonalizable input") {
  Matrix a = rand_matrix(20, 20);
  auto e = eig_compute(a);
  CHECK(e.vector_residual < 1e-10);
}

TEST_CASE("SVD resolves a graded spectrum to the absolute floor") {
  const std::size_t n = 12;
  Matrix u = qr_factor(rand_matrix(n, n)).q(n);
  Matrix v = qr_factor(rand_matrix(n, n)).q(n);
  std::vector<double> want(n);
  for (std::size_t i = 0; i < n; ++i) want[i] = std::pow(10.0, -double(i));
  Matrix us = u;
  for (std::size_t j = 0; j < n; ++j)
    kern::scal(n, cplx(want[j]), us.col(j));
  Matrix a = matmul(kern::Op::None, us, kern::Op::ConjT, v);
  auto s = svd_compute(a, SvdMode::ValuesOnly);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(s.sigma[i] - want[i]) <= 1e-13 * want[0]);
}

TEST_CASE("singular values are invariant under unitary factors") {
  for (int trial = 0; trial < 4; ++trial) {
    Matrix a = rand_matrix(14, 9);
    Matrix u = qr_factor(rand_matrix(14, 14)).q(14);
    Matrix v = qr_factor(rand_matrix(9, 9)).q(9);
    Matrix uav = mul(u, mul(a, v));
    auto s1 = svd_compute(a, SvdMode::ValuesOnly);
    auto s2 = svd_compute(uav, SvdMode::ValuesOnly);
    auto s3 = svd_compute(Matrix(a.adjoint()), SvdMode::ValuesOnly);
    for (std::size_t i = 0; i < s1.sigma.size(); ++i) {
      CHECK(s1.sigma[i] == doctest::Approx(s2.sigma[i]).epsilon(1e-11));
      CHECK(s1.sigma[i] == doctest::Approx(s3.sigma[i]).epsilon(1e-11));
    }
  }
}

TEST_CASE("factorizations are safe to run concurrently") {
  // pure inputs, no shared mutable state: run the same decompositions on
  // two threads and compare against the serial result
  Matrix a = rand_matrix(30, 30);
  auto serial = svd_compute(a, SvdMode::ValuesOnly);
  auto eserial = heig_compute(Matrix(mulH(a, a)), false);
  std::vector<double> sig1, sig2, eig1, eig2;
  std::thread t1([&] {
    sig1 = svd_compute(a, SvdMode::ValuesOnly).sigma;
    eig1 = heig_compute(Matrix(mulH(a, a)), false).w;
  });
  std::thread t2([&] {
    sig2 = svd_compute(a, SvdMode::ValuesOnly).sigma;
    eig2 = heig_compute(Matrix(mulH(a, a)), false).w;
  });
  t1.join();
  t2.join();
  for (std::size_t i = 0; i < serial.sigma.size(); ++i) {
    CHECK(sig1[i] == serial.sigma[i]);
    CHECK(sig2[i] == serial.sigma[i]);
  }
  for (std::size_t i = 0; i < eserial.w.size(); ++i) {
    CHECK(eig1[i] == eserial.w[i]);
    CHECK(eig2[i] == eserial.w[i]);
  }
}

TEST_CASE("expm basics") {
  // expm(0) = I
  Matrix z(5, 5);
  Matrix e0 = expm(z);
  e0 -= Matrix::identity(5);
  CHECK(e0.norm_fro() < 1e-14);
  // rotation block: expm(t*[[0,-1],[1,0]]) at t = pi/2 maps e1 -> e2
  Matrix r(2, 2);
  r(0, 1) = -1.0;
  r(1, 0) = 1.0;
  r *= cplx(std::acos(-1.0) / 2.0);
  Matrix er = expm(r);
  CHECK(std::abs(er(0, 0)) < 1e-13);
  CHECK(std::abs(er(1, 0) - 1.0) < 1e-13);
  // expm(a) expm(-a) = I
  Matrix a = rand_matrix(10, 10);
  Matrix na = a;
  na *= cplx(-1.0);
  Matrix p = mul(expm(a), expm(na));
  p -= Matrix::identity(10);
  CHECK(p.norm_fro() < 1e-11);
}
