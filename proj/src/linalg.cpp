#include "damplab/linalg.hpp"

#include <cmath>

namespace damplab {

LinearMap::LinearMap(Matrix mat, std::string dom, std::string codom)
    : m(std::move(mat)), domain(std::move(dom)), codomain(std::move(codom)) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw Error("LinearMap entries must be finite");
}

LinearMap compose(const LinearMap& a, const LinearMap& b) {
  if (a.domain != b.codomain)
    throw SpaceMismatch("compose: " + a.domain + " vs " + b.codomain);
  if (a.cols() != b.rows())
    throw SpaceMismatch("compose: inner dimensions " + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()));
  return {mul(a.m, b.m), b.domain, a.codomain};
}

LinearMap adjoint_map(const LinearMap& a) {
  return {a.m.adjoint(), a.codomain, a.domain};
}

LinearMap add(const LinearMap& a, const LinearMap& b) {
  if (a.domain != b.domain || a.codomain != b.codomain)
    throw SpaceMismatch("add: label mismatch");
  return {a.m + b.m, a.domain, a.codomain};
}

double orthonormality_residual(const Matrix& q) {
  Matrix g = mulH(q, q);
  g -= Matrix::identity(q.cols());
  return g.norm_fro();
}

double containment_residual(const SubspaceBasis& inner,
                            const SubspaceBasis& outer) {
  if (inner.space != outer.space)
    throw SpaceMismatch("containment_residual: " + inner.space + " vs " +
                        outer.space);
  if (inner.dim() == 0) return 0.0;
  Matrix coef = mulH(outer.q, inner.q);
  Matrix proj = mul(outer.q, coef);
  proj -= inner.q;
  double worst = 0.0;
  for (std::size_t j = 0; j < proj.cols(); ++j)
    worst = std::max(worst,
                     std::sqrt(kern::nrm2sq(proj.rows(), proj.col(j))));
  return worst;
}

SubspaceBasis orthonormal_complement(const SubspaceBasis& b) {
  const std::size_t m = b.ambient_dim(), k = b.dim();
  if (k == 0) {
    return {Matrix::identity(m), b.space, b.tol_used};
  }
  auto f = qr_factor(b.q);
  return {f.q_columns(k, m - k), b.space, b.tol_used};
}

RankReport decide_rank(const std::vector<double>& sigma,
                       const RankPolicy& policy) {
  policy.validate();
  RankReport r;
  const double smax = sigma.empty() ? 0.0 : sigma.front();
  r.cutoff = std::max(policy.relative_threshold * smax, policy.absolute_floor);
  for (double s : sigma) {
    if (s > r.cutoff) ++r.rank;
    if (s >= 0.9 * r.cutoff && s <= 1.1 * r.cutoff) r.ambiguous = true;
  }
  r.smallest_kept = r.rank > 0 ? sigma[r.rank - 1] : 0.0;
  r.largest_dropped = r.rank < sigma.size() ? sigma[r.rank] : 0.0;
  return r;
}

HermitianSqrtResult hermitian_sqrt(const LinearMap& m,
                                   const RankPolicy& policy) {
  if (m.rows() != m.cols() || m.domain != m.codomain)
    throw SpaceMismatch("hermitian_sqrt needs a square map on one space");
  Matrix diff = m.m - m.m.adjoint();
  if (diff.norm_fro() > 1e-12 * std::max(1.0, m.m.norm_fro()))
    throw NotHermitian("asymmetry " + std::to_string(diff.norm_fro()));
  auto h = heig_auto(m.m, true);
  if (!h.w.empty() && h.w.front() < policy.absolute_floor)
    throw NotPositiveDefinite("smallest eigenvalue " +
                              std::to_string(h.w.empty() ? 0.0 : h.w.front()));
  const std::size_t n = m.rows();
  Matrix s = h.vectors, si = h.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = std::sqrt(h.w[j]);
    kern::scal(n, cplx(r), s.col(j));
    kern::scal(n, cplx(1.0 / r), si.col(j));
  }
  Matrix sq = matmul(kern::Op::None, s, kern::Op::ConjT, h.vectors);
  Matrix sqi = matmul(kern::Op::None, si, kern::Op::ConjT, h.vectors);
  return {LinearMap(std::move(sq), m.domain, m.domain),
          LinearMap(std::move(sqi), m.domain, m.domain)};
}

double min_singular_value(const LinearMap& m) {
  if (m.m.empty()) throw Error("min_singular_value of an empty map");
  auto s = svd_auto(m.m, SvdMode::ValuesOnly);
  return s.sigma.back();
}

SubspaceBasis range_basis(const LinearMap& m, const RankPolicy& policy,
                          RankReport* report) {
  auto s = svd_auto(m.m, SvdMode::Thin);
  RankReport r = decide_rank(s.sigma, policy);
  if (report) *report = r;
  return {s.u.columns(0, r.rank), m.codomain, r.cutoff};
}

SubspaceBasis kernel_basis(const LinearMap& m, const RankPolicy& policy,
                           RankReport* report) {
  auto s = svd_auto(m.m, SvdMode::Thin);
  RankReport r = decide_rank(s.sigma, policy);
  if (report) *report = r;
  return {s.v.columns(r.rank, m.cols() - r.rank), m.domain, r.cutoff};
}

SubspaceBasis subspace_intersection(const SubspaceBasis& b1,
                                    const SubspaceBasis& b2, double cos_tol) {
  if (b1.space != b2.space)
    throw SpaceMismatch("subspace_intersection: " + b1.space + " vs " +
                        b2.space);
  if (b1.dim() == 0 || b2.dim() == 0)
    return {Matrix(b1.ambient_dim(), 0), b1.space, cos_tol};
  Matrix overlap = mulH(b1.q, b2.q);
  auto s = svd_auto(overlap, SvdMode::Thin);
  std::size_t k = 0;
  while (k < s.sigma.size() && s.sigma[k] >= 1.0 - cos_tol) ++k;
  // common directions expressed in the b2 frame
  Matrix v1 = s.v.columns(0, k);
  return {mul(b2.q, v1), b1.space, cos_tol};
}

LinearMap block_inverse_antitriangular(const LinearMap& a, const LinearMap& b,
                                       const LinearMap& c,
                                       const RankPolicy& policy) {
  policy.validate();
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n ||
      c.cols() != n)
    throw SpaceMismatch("block_inverse_antitriangular: nonconformal blocks");
  auto check_invertible = [&](const LinearMap& x, const char* name) {
    const double s = min_singular_value(x);
    if (s < policy.absolute_floor)
      throw SingularBlock(std::string(name) + " has sigma_min " +
                          std::to_string(s));
  };
  check_invertible(b, "B");
  check_invertible(c, "C");
  auto fb = lu_factor(b.m);
  auto fc = lu_factor(c.m);
  Matrix binv = lu_inverse(fb);
  Matrix cinv = lu_inverse(fc);
  Matrix lower = mul(binv, mul(a.m, cinv));
  Matrix out(2 * n, 2 * n);
  out.set_block(0, n, cinv);
  out.set_block(n, 0, binv);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out(n + i, n + j) = -lower(i, j);
  const std::string label = a.domain + "+" + c.codomain;
  return {std::move(out), label, label};
}

}  // namespace damplab
