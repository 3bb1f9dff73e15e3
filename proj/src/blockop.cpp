#include "damplab/blockop.hpp"

#include <cmath>

namespace damplab {

namespace {

bool is_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != (i == j ? cplx(1) : cplx(0))) return false;
  return true;
}

}  // namespace

BlockSystem make_block_system(LinearMap c, LinearMap gamma, LinearMap alpha,
                              LinearMap beta) {
  if (!gamma.square_on(c.domain) || gamma.rows() != c.cols())
    throw SpaceMismatch("gamma must be square on H0 = " + c.domain);
  if (!alpha.square_on(c.domain) || alpha.rows() != c.cols())
    throw SpaceMismatch("alpha must be square on H0");
  if (!beta.square_on(c.codomain) || beta.rows() != c.rows())
    throw SpaceMismatch("beta must be square on H1");
  // dissipativity of the damping block
  Matrix re = gamma.m + gamma.m.adjoint();
  re *= cplx(0.5);
  auto h = heig_auto(re, false);
  const double lo = h.w.empty() ? 0.0 : h.w.front();
  if (lo < -1e-10)
    throw HypothesisViolated("Re gamma has eigenvalue " + std::to_string(lo));
  BlockSystem sys{std::move(c), std::move(gamma), std::move(alpha),
                  std::move(beta), false};
  sys.normalized = is_identity(sys.alpha.m) && is_identity(sys.beta.m);
  return sys;
}

BlockSystem make_normalized_system(LinearMap c, LinearMap gamma) {
  LinearMap alpha(Matrix::identity(c.cols()), c.domain, c.domain);
  LinearMap beta(Matrix::identity(c.rows()), c.codomain, c.codomain);
  return make_block_system(std::move(c), std::move(gamma), std::move(alpha),
                           std::move(beta));
}

BlockSystem normalize(const BlockSystem& sys) {
  if (sys.normalized) return sys;
  auto sa = hermitian_sqrt(sys.alpha);
  auto sb = hermitian_sqrt(sys.beta);
  LinearMap c2 = compose(sb.inv_sqrt, compose(sys.c, sa.inv_sqrt));
  LinearMap g2 = compose(sa.inv_sqrt, compose(sys.gamma, sa.inv_sqrt));
  BlockSystem out{std::move(c2), std::move(g2),
                  LinearMap(Matrix::identity(sys.alpha.rows()), sys.h0(),
                            sys.h0()),
                  LinearMap(Matrix::identity(sys.beta.rows()), sys.h1(),
                            sys.h1()),
                  true};
  return out;
}

LinearMap assemble_A(const BlockSystem& sys) {
  if (!sys.normalized)
    throw NotNormalized("assemble_A expects alpha = beta = 1");
  const std::size_t n0 = sys.c.cols(), n1 = sys.c.rows();
  Matrix a(n0 + n1, n0 + n1);
  for (std::size_t j = 0; j < n0; ++j)
    for (std::size_t i = 0; i < n0; ++i) a(i, j) = -sys.gamma.m(i, j);
  Matrix ch = sys.c.m.adjoint();
  a.set_block(0, n0, ch);
  for (std::size_t j = 0; j < n0; ++j)
    for (std::size_t i = 0; i < n1; ++i) a(n0 + i, j) = -sys.c.m(i, j);
  const std::string label = sys.h0() + "+" + sys.h1();
  return {std::move(a), label, label};
}

LinearMap assemble_A_reduced(const BlockSystem& sys,
                             const HelmholtzFrame& frame) {
  if (!sys.normalized)
    throw NotNormalized("assemble_A_reduced expects alpha = beta = 1");
  const std::size_t n0 = sys.c.cols(), r = frame.rank();
  Matrix chx = mulH(sys.c.m, frame.ran_c.q);          // C^H iota1: n0 x r
  Matrix xc = mulH(frame.ran_c.q, sys.c.m);           // iota1^H C: r x n0
  Matrix a(n0 + r, n0 + r);
  for (std::size_t j = 0; j < n0; ++j)
    for (std::size_t i = 0; i < n0; ++i) a(i, j) = -sys.gamma.m(i, j);
  a.set_block(0, n0, chx);
  for (std::size_t j = 0; j < n0; ++j)
    for (std::size_t i = 0; i < r; ++i) a(n0 + i, j) = -xc(i, j);
  const std::string label = sys.h0() + "+ranC";
  return {std::move(a), label, label};
}

ShiftedSystem assemble_B(const BlockSystem& sys, const HelmholtzFrame& frame,
                         double lambda, const RankPolicy& policy) {
  if (!sys.normalized)
    throw NotNormalized("assemble_B expects alpha = beta = 1");
  ShiftedSystem sh;
  sh.lambda = lambda;
  sh.r = frame.rank();
  sh.k = frame.ker_c.dim();
  const std::size_t r = sh.r, k = sh.k, n = 2 * r + k;

  sh.g00 = compress(sys.gamma, frame.ran_cstar, frame.ran_cstar).m;
  sh.g0k = compress(sys.gamma, frame.ran_cstar, frame.ker_c).m;
  sh.gk0 = compress(sys.gamma, frame.ker_c, frame.ran_cstar).m;
  sh.gkk = compress(sys.gamma, frame.ker_c, frame.ker_c).m;
  sh.x = compress(sys.c, frame.ran_c, frame.ran_cstar).m;

  const cplx il(0.0, lambda);
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) b(i, i) = il;
  b.set_block(0, 0, b.block(0, 0, r, r) + sh.g00);
  b.set_block(0, 2 * r, sh.g0k);
  b.set_block(2 * r, 0, sh.gk0);
  b.set_block(2 * r, 2 * r, b.block(2 * r, 2 * r, k, k) + sh.gkk);
  Matrix xh = sh.x.adjoint();
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      b(i, r + j) -= xh(i, j);   // -iota0^H C^H iota1
      b(r + i, j) += sh.x(i, j);  // iota1^H C iota0
    }
  sh.b = std::move(b);

  if (lambda != 0.0) {
    Matrix s = sh.gkk;
    for (std::size_t i = 0; i < k; ++i) s(i, i) += il;
    if (k > 0) {
      auto sv = svd_auto(s, SvdMode::ValuesOnly);
      if (sv.sigma.back() < policy.absolute_floor)
        throw ShiftSingular("sigma_min(i lambda + kappa0^H gamma kappa0) = " +
                            std::to_string(sv.sigma.back()));
    }
    auto lu = lu_factor(s);
    Matrix sinv_gk0 = lu_solve(lu, sh.gk0);  // S^{-1} gk0: k x r
    sh.t1 = Matrix::identity(n);
    sh.t2 = Matrix::identity(n);
    // g0k S^{-1} via the adjoint solve: (S^H y = g0k^H), then y^H
    auto luh = lu_factor(Matrix(s.adjoint()));
    Matrix y = lu_solve(luh, Matrix(sh.g0k.adjoint()));  // k x r
    Matrix g0k_si = y.adjoint();                         // r x k
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < r; ++i) sh.t1(i, 2 * r + j) = -g0k_si(i, j);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < k; ++i)
        sh.t2(2 * r + i, j) = -sinv_gk0(i, j);
    sh.has_transforms = true;
  }
  return sh;
}

SchurIdentityReport schur_identity_check(const ShiftedSystem& sh) {
  if (!sh.has_transforms)
    throw ShiftSingular("schur_identity_check needs lambda != 0");
  const std::size_t r = sh.r, k = sh.k, n = 2 * r + k;
  Matrix lhs = mul(sh.t1, mul(sh.b, sh.t2));

  // stated decoupled form
  const cplx il(0.0, sh.lambda);
  Matrix s = sh.gkk;
  for (std::size_t i = 0; i < k; ++i) s(i, i) += il;
  auto lu = lu_factor(s);
  Matrix sinv_gk0 = lu_solve(lu, sh.gk0);
  Matrix schur = sh.g00 - mul(sh.g0k, sinv_gk0);
  Matrix rhs(n, n);
  for (std::size_t i = 0; i < n; ++i) rhs(i, i) = il;
  rhs.set_block(0, 0, rhs.block(0, 0, r, r) + schur);
  rhs.set_block(2 * r, 2 * r, rhs.block(2 * r, 2 * r, k, k) + sh.gkk);
  Matrix xh = sh.x.adjoint();
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      rhs(i, r + j) -= xh(i, j);
      rhs(r + i, j) += sh.x(i, j);
    }
  SchurIdentityReport rep;
  rep.decoupled_block = lhs.block(2 * r, 2 * r, k, k);
  lhs -= rhs;
  rep.residual = lhs.norm_fro();
  return rep;
}

SchurZeroReport schur_reduce_B0(const BlockSystem& sys,
                                const HelmholtzFrame& frame,
                                const RankPolicy& policy) {
  if (!sys.normalized)
    throw NotNormalized("schur_reduce_B0 expects alpha = beta = 1");
  const std::size_t r = frame.rank(), k = frame.ker_c.dim();
  Matrix g00 = compress(sys.gamma, frame.ran_cstar, frame.ran_cstar).m;
  Matrix g0k = compress(sys.gamma, frame.ran_cstar, frame.ker_c).m;
  Matrix gk0 = compress(sys.gamma, frame.ker_c, frame.ran_cstar).m;
  Matrix gkk = compress(sys.gamma, frame.ker_c, frame.ker_c).m;
  Matrix x = compress(sys.c, frame.ran_c, frame.ran_cstar).m;
  {
    auto sv = svd_auto(x, SvdMode::ValuesOnly);
    if (!sv.sigma.empty() && sv.sigma.back() < policy.absolute_floor)
      throw SingularBlock("iota1^H C iota0 has sigma_min " +
                          std::to_string(sv.sigma.back()));
  }
  // a = [[g00, -x^H], [x, 0]], inverted numerically
  Matrix a(2 * r, 2 * r);
  a.set_block(0, 0, g00);
  Matrix xh = x.adjoint();
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      a(i, r + j) = -xh(i, j);
      a(r + i, j) = x(i, j);
    }
  auto lu = lu_factor(std::move(a));
  Matrix ainv = lu_inverse(lu);
  SchurZeroReport rep;
  rep.a11_residual = ainv.block(0, 0, r, r).norm_fro();

  // cross-check against the antitriangular block formula
  if (r > 0) {
    LinearMap la(g00, "r", "r");
    Matrix nxh(r, r);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) nxh(i, j) = -xh(i, j);
    LinearMap lb(std::move(nxh), "rc", "r");
    LinearMap lc(x, "r", "rc");
    LinearMap formula = block_inverse_antitriangular(la, lb, lc, policy);
    Matrix diff = formula.m - ainv;
    rep.formula_deviation = diff.norm_fro();
  }

  // d - c a^{-1} b with c = [gk0 0], b = [g0k; 0]
  Matrix b(2 * r, k);
  b.set_block(0, 0, g0k);
  Matrix ainv_b = mul(ainv, b);
  Matrix c_full(k, 2 * r);
  c_full.set_block(0, 0, gk0);
  Matrix correction = mul(c_full, ainv_b);
  rep.schur_deviation = correction.norm_fro();
  rep.compressed_gamma =
      LinearMap(std::move(gkk), "sub:" + sys.h0(), "sub:" + sys.h0());
  return rep;
}

}  // namespace damplab
