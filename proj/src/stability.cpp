#include "damplab/stability.hpp"

#include <algorithm>
#include <cmath>

namespace damplab {

namespace {

constexpr double INTERSECT_COS_TOL = 1e-8;

std::vector<std::size_t> mask_rows(const RegionMask& m, bool value) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.edges.size(); ++i)
    if (m.edges[i] == value) rows.push_back(i);
  return rows;
}

RMatrix take_rows(const RMatrix& m, const std::vector<std::size_t>& rows) {
  RMatrix out(rows.size(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) out(i, j) = m(rows[i], j);
  return out;
}

RMatrix take_cols(const RMatrix& m, const std::vector<std::size_t>& cols) {
  RMatrix out(m.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    std::copy(m.col(cols[j]), m.col(cols[j]) + m.rows(), out.col(j));
  return out;
}

Matrix scatter_rows(const RMatrix& local,
                    const std::vector<std::size_t>& rows,
                    std::size_t ambient) {
  Matrix out(ambient, local.cols());
  for (std::size_t j = 0; j < local.cols(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i)
      out(rows[i], j) = local(i, j);
  return out;
}

RMatrix vstack(const RMatrix& a, const RMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  RMatrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

// orthonormal range basis with the rank policy applied
RMatrix rrange(const RMatrix& m, const RankPolicy& pol, RankReport* rep = nullptr) {
  auto s = svd_compute(m, SvdMode::LeftOnly);
  RankReport r = decide_rank(s.sigma, pol);
  if (rep) *rep = r;
  return s.u.columns(0, r.rank);
}

// coefficients of the numerical kernel
RMatrix rkernel(const RMatrix& m, const RankPolicy& pol) {
  auto s = svd_compute(m, SvdMode::RightOnly);
  RankReport r = decide_rank(s.sigma, pol);
  return s.v.columns(r.rank, m.cols() - r.rank);
}

double rsigma_min(const RMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  auto s = svd_compute(m, SvdMode::ValuesOnly);
  return s.sigma.back();
}

// principal-angle intersection of span(a) and span(b), expressed through a
RMatrix rintersect(const RMatrix& a, const RMatrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return RMatrix(a.rows(), 0);
  RMatrix overlap = mulH(a, b);
  auto s = svd_compute(overlap, SvdMode::LeftOnly);
  std::size_t k = 0;
  while (k < s.sigma.size() && s.sigma[k] >= 1.0 - INTERSECT_COS_TOL) ++k;
  return mul(a, s.u.columns(0, k));
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid{0.0};
  for (int e = -6; e <= 3; ++e) {
    const double v = std::ldexp(1.0, e);
    grid.push_back(v);
    grid.push_back(-v);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

ResolventScan resolvent_scan(const LinearMap& a,
                             const std::vector<double>& lambdas,
                             const RankPolicy& policy) {
  if (a.rows() != a.cols()) throw SpaceMismatch("resolvent_scan: A not square");
  ResolventScan out;
  for (double lambda : lambdas) {
    Matrix m = a.m;
    m *= cplx(-1.0);
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += cplx(0.0, lambda);
    auto s = svd_auto(m, SvdMode::ValuesOnly);
    RankReport rep = decide_rank(s.sigma, policy);
    out.lambdas.push_back(lambda);
    out.margins.push_back(s.sigma.empty() ? 0.0 : s.sigma.back());
    out.kernel_dims.push_back(m.cols() - rep.rank);
  }
  return out;
}

GammaValidation validate_gamma(const LinearMap& gamma,
                               const SubspaceBasis& u_basis) {
  if (gamma.rows() != gamma.cols() ||
      gamma.rows() != u_basis.ambient_dim())
    throw SpaceMismatch("validate_gamma: dimensions");
  GammaValidation v;
  SubspaceBasis perp = orthonormal_complement(u_basis);
  Matrix gu = mulH(u_basis.q, mul(gamma.m, u_basis.q));
  Matrix gp = mulH(perp.q, mul(gamma.m, perp.q));
  Matrix coupling_up = mulH(u_basis.q, mul(gamma.m, perp.q));
  Matrix coupling_pu = mulH(perp.q, mul(gamma.m, u_basis.q));
  v.off_diagonal = std::max(coupling_up.norm_fro(), coupling_pu.norm_fro());
  if (u_basis.dim() > 0) {
    Matrix re = gu + gu.adjoint();
    re *= cplx(0.5);
    auto h = heig_auto(re, false);
    v.accretivity_c = h.w.front();
  } else {
    v.accretivity_c = std::numeric_limits<double>::infinity();
  }
  if (perp.dim() > 0) {
    Matrix defect = gp - gp.adjoint();
    v.perp_defect = defect.norm_fro();
    auto h = heig_auto(gp, false);
    v.perp_lower = h.w.front();
  }
  if (v.off_diagonal > 1e-10) {
    v.violated = "off-diagonal coupling between U and its complement";
  } else if (!(v.accretivity_c > 0.0)) {
    v.violated = "Re gamma_U not strictly accretive";
  } else if (v.perp_defect > 1e-10) {
    v.violated = "gamma on the complement is not Hermitian";
  } else if (v.perp_lower < -1e-10) {
    v.violated = "gamma on the complement is not nonnegative";
  } else {
    v.ok = true;
  }
  return v;
}

KernelIdentityReport kernel_identity_check(const LinearMap& gamma,
                                           const LinearMap& askew,
                                           const SubspaceBasis& u_basis,
                                           const RankPolicy& policy) {
  if (gamma.rows() != askew.rows() || gamma.cols() != askew.cols())
    throw SpaceMismatch("kernel_identity_check: gamma vs A dimensions");
  Matrix skew_defect = askew.m + askew.m.adjoint();
  if (skew_defect.norm_fro() > 1e-10 * std::max(1.0, askew.m.norm_fro()))
    throw HypothesisViolated("A is not skew-adjoint");
  GammaValidation gv = validate_gamma(gamma, u_basis);
  if (!gv.ok) throw HypothesisViolated(gv.violated);

  LinearMap plus = add(gamma, askew);
  LinearMap minus{gamma.m - askew.m, gamma.domain, gamma.codomain};
  SubspaceBasis kp = kernel_basis(plus, policy);
  SubspaceBasis km = kernel_basis(minus, policy);
  SubspaceBasis kg = kernel_basis(gamma, policy);
  SubspaceBasis ka = kernel_basis(askew, policy);
  SubspaceBasis ki = subspace_intersection(kg, ka);

  KernelIdentityReport rep;
  rep.dim_plus = kp.dim();
  rep.dim_minus = km.dim();
  rep.dim_intersection = ki.dim();
  double worst = 0.0;
  auto both_ways = [&](const SubspaceBasis& x, const SubspaceBasis& y) {
    worst = std::max(worst, containment_residual(x, y));
    worst = std::max(worst, containment_residual(y, x));
  };
  both_ways(kp, km);
  both_ways(kp, ki);
  both_ways(km, ki);
  rep.residual = worst;
  return rep;
}

RotatedAccretivity rotated_accretivity(const LinearMap& gamma, double lambda,
                                       const SubspaceBasis& v_basis,
                                       const SubspaceBasis& u_basis) {
  if (lambda == 0.0)
    throw Error("rotated_accretivity needs a nonzero shift");
  GammaValidation gv = validate_gamma(gamma, u_basis);
  if (!gv.ok) throw HypothesisViolated(gv.violated);
  const double c = std::isfinite(gv.accretivity_c) ? gv.accretivity_c : 1.0;

  Matrix gu = mulH(u_basis.q, mul(gamma.m, u_basis.q));
  double im_norm = 0.0;
  if (u_basis.dim() > 0) {
    Matrix im = gu - gu.adjoint();
    im *= cplx(0.0, -0.5);
    auto h = heig_auto(im, false);
    im_norm = std::max(std::abs(h.w.front()), std::abs(h.w.back()));
  }

  // shrink the angle until both displayed bounds are positive, keep the best
  const double sign = lambda > 0.0 ? -1.0 : 1.0;
  double best_alpha = 0.0, best = -1.0;
  for (int j = 1; j <= 60; ++j) {
    const double a = sign * std::ldexp(M_PI / 2.0, -j);
    const double b1 =
        std::cos(a) * c - std::abs(std::sin(a)) * (std::abs(lambda) + im_norm);
    const double b2 = std::abs(std::sin(a)) * std::abs(lambda);
    const double score = std::min(b1, b2);
    if (score > best) {
      best = score;
      best_alpha = a;
    }
  }
  if (!(best > 0.0))
    throw NoAngleFound("c = " + std::to_string(c) +
                       ", |Im gamma_U| = " + std::to_string(im_norm) +
                       ", lambda = " + std::to_string(lambda));

  RotatedAccretivity out;
  out.alpha = best_alpha;
  out.c_tilde = best;

  Matrix comp = mulH(v_basis.q, mul(gamma.m, v_basis.q));
  for (std::size_t i = 0; i < comp.rows(); ++i)
    comp(i, i) += cplx(0.0, lambda);
  const cplx rot = std::polar(1.0, best_alpha);
  Matrix rotated = comp;
  rotated *= rot;
  Matrix re = rotated + rotated.adjoint();
  re *= cplx(0.5);
  auto h = heig_auto(re, false);
  out.measured_min_eig = h.w.empty() ? 0.0 : h.w.front();
  auto s = svd_auto(comp, SvdMode::ValuesOnly);
  out.measured_sigma_min = s.sigma.empty() ? 0.0 : s.sigma.back();
  return out;
}

namespace {

struct RegionSpaces {
  std::vector<std::size_t> rows;  // edge indices of the region
  RMatrix w;        // local basis of ker(div_omega) = grad_{omega,0} complement
  RMatrix h;        // local basis of the harmonic-gradient space H(omega)
  RMatrix k;        // local basis of w minus h
};

RegionSpaces build_region_spaces(const GridSpec& grid, const RegionMask& mask,
                                 const RMatrix& grad, const RMatrix& qg,
                                 const std::vector<std::size_t>& rows,
                                 const RankPolicy& policy) {
  RegionSpaces r;
  r.rows = rows;
  const std::size_t local = rows.size();
  if (local == 0) {
    r.w = RMatrix(0, 0);
    r.h = RMatrix(0, 0);
    r.k = RMatrix(0, 0);
    return r;
  }
  std::vector<bool> inner = mask.interior_vertices(grid);
  std::vector<std::size_t> cols;
  for (std::size_t v = 0; v < inner.size(); ++v)
    if (inner[v]) cols.push_back(v);
  if (cols.empty()) {
    r.w = RMatrix::identity(local);
  } else {
    RMatrix g_loc = take_rows(take_cols(grad, cols), rows);
    auto f = qr_factor(std::move(g_loc));
    r.w = f.q_columns(cols.size(), local - cols.size());
  }
  // harmonic part: directions of w that also lie in ran(grad0)
  RMatrix qg_loc = take_rows(qg, rows);
  RMatrix overlap = mulH(qg_loc, r.w);
  auto s = svd_compute(overlap, SvdMode::RightOnly);
  std::size_t hdim = 0;
  while (hdim < s.sigma.size() && s.sigma[hdim] >= 1.0 - INTERSECT_COS_TOL)
    ++hdim;
  r.h = mul(r.w, s.v.columns(0, hdim));
  // k = w with the harmonic directions removed
  if (hdim == 0) {
    r.k = r.w;
  } else {
    RMatrix coords = mulH(r.w, r.h);  // wdim x hdim
    auto f = qr_factor(std::move(coords));
    RMatrix trail = f.q_columns(hdim, r.w.cols() - hdim);
    r.k = mul(r.w, trail);
  }
  (void)policy;
  return r;
}

// constraint rows forcing a ran(grad0) coefficient vector to lie in
// k_local + (everything off the region): (I - k k^T) restricted rows
RMatrix region_constraint(const RMatrix& qg, const RegionSpaces& r) {
  if (r.rows.empty()) return RMatrix(0, qg.cols());
  RMatrix qg_loc = take_rows(qg, r.rows);
  if (r.k.cols() == 0) return qg_loc;
  RMatrix coef = mulH(r.k, qg_loc);
  RMatrix proj = mul(r.k, coef);
  qg_loc -= proj;
  return qg_loc;
}

}  // namespace

DampingGeometry damping_constant(const GridSpec& grid, const RegionMask& mask,
                                 const RankPolicy& policy) {
  grid.validate();
  if (mask.edges.size() != grid.n_edges())
    throw SpaceMismatch("damping_constant: mask does not match the grid");
  if (mask.empty()) throw EmptyRegion("damping region is empty");

  const std::size_t ne = grid.n_edges(), np = grid.n_vertices();
  const std::vector<std::size_t> d_rows = mask_rows(mask, true);
  const std::vector<std::size_t> dc_rows = mask_rows(mask, false);
  RegionMask cmask = mask.complement();

  RMatrix grad = real_part(build_grad0(grid).m);
  auto qf = qr_factor(grad);
  RMatrix qg = qf.q(np);

  DampingGeometry out;
  out.mask = mask;

  // Hypothesis-(ep) margin: singular structure of 1_D on ran(grad0)
  RMatrix qg_d = take_rows(qg, d_rows);
  RankReport ep_rep;
  RMatrix masked_range = rrange(qg_d, policy, &ep_rep);
  out.ep_margin = ep_rep.smallest_kept;

  RegionSpaces reg_d =
      build_region_spaces(grid, mask, grad, qg, d_rows, policy);
  RegionSpaces reg_dc =
      build_region_spaces(grid, cmask, grad, qg, dc_rows, policy);

  // H0 = (ker(div_Dc) int H(Dc)-perp + L2(D)) int ran(grad0)
  RMatrix con0 = region_constraint(qg, reg_dc);
  RMatrix coeffs0 = con0.rows() == 0 ? RMatrix::identity(np)
                                     : rkernel(con0, policy);
  RMatrix h0 = mul(qg, coeffs0);

  // H2 = ran(grad0) seen as divergence-free and harmonic-free on both sides
  RMatrix con2 = vstack(region_constraint(qg, reg_d), con0);
  RMatrix coeffs2 = con2.rows() == 0 ? RMatrix::identity(np)
                                     : rkernel(con2, policy);
  RMatrix h2 = mul(qg, coeffs2);

  // c0 from the masked h0 basis
  RMatrix h0_d = take_rows(h0, d_rows);
  const double smin_h0 = h0.cols() == 0 ? 1.0 : rsigma_min(h0_d);
  out.c0 = smin_h0 > 0.0 ? 1.0 / smin_h0
                         : std::numeric_limits<double>::infinity();

  // H3: gradients over D of potentials with vanishing divergence on D that
  // stay orthogonal to the harmonic part
  std::vector<bool> touched = mask.touched_vertices(grid);
  std::vector<std::size_t> vt;
  for (std::size_t v = 0; v < touched.size(); ++v)
    if (touched[v]) vt.push_back(v);
  RMatrix h3_local(d_rows.size(), 0);
  if (!vt.empty()) {
    RMatrix g_max = take_rows(take_cols(grad, vt), d_rows);
    std::vector<bool> inner = mask.interior_vertices(grid);
    std::vector<std::size_t> din;
    for (std::size_t v = 0; v < inner.size(); ++v)
      if (inner[v]) din.push_back(v);
    RMatrix g_d0 = take_rows(take_cols(grad, din), d_rows);
    RMatrix con3 = matmul(kern::Op::ConjT, g_d0, kern::Op::None, g_max);
    if (reg_d.h.cols() > 0)
      con3 = vstack(con3,
                    matmul(kern::Op::ConjT, reg_d.h, kern::Op::None, g_max));
    RMatrix coeffs3 = rkernel(con3, policy);
    h3_local = rrange(mul(g_max, coeffs3), policy);
  }

  // H~3 = H3 restricted to 1_D[ran(grad0)]
  RMatrix h3t_local = rintersect(h3_local, masked_range);

  // T: masked h2 expressed in h3t coordinates
  RMatrix h2_d = take_rows(h2, d_rows);
  RMatrix t = mulH(h3t_local, h2_d);
  out.sigma_min_t = rsigma_min(t);

  // surjectivity: how much of h3t the masked h2 span covers
  double surj = 0.0;
  if (h3t_local.cols() > 0) {
    RMatrix um = rrange(h2_d, policy);
    RMatrix proj = mul(um, mulH(um, h3t_local));
    proj -= h3t_local;
    for (std::size_t j = 0; j < proj.cols(); ++j)
      surj = std::max(surj,
                      std::sqrt(kern::nrm2sq(proj.rows(), proj.col(j))));
  }
  out.surjectivity_residual = surj;

  const std::string elabel = grid.e_label();
  out.h0_basis = {to_complex(h0), elabel, policy.relative_threshold};
  out.h2_basis = {to_complex(h2), elabel, policy.relative_threshold};
  out.h3_basis = {scatter_rows(h3_local, d_rows, ne), elabel,
                  policy.relative_threshold};
  out.h3t_basis = {scatter_rows(h3t_local, d_rows, ne), elabel,
                   policy.relative_threshold};
  out.t_matrix = LinearMap(to_complex(t), "H2", "H3t");
  return out;
}

BlockSystem counterexample_system(std::size_t n) {
  if (n < 2) throw ConfigError("counterexample needs N >= 2");
  const std::string h0 = "ceH0#" + std::to_string(n);
  const std::string h1 = "ceH1#" + std::to_string(n);
  Matrix c(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) c(i, i) = double(i + 1);
  Matrix gamma(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    gamma(i, i) = 1.0;
    gamma(n + i, n + i) = 1.0 / double(i + 1);
  }
  return make_normalized_system(LinearMap(std::move(c), h0, h1),
                                LinearMap(std::move(gamma), h0, h0));
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::ExponentialTrend:
      return "exponential-trend";
    case StabilityClass::SemiUniformTrend:
      return "semi-uniform-trend";
    case StabilityClass::StrongOnlyTrend:
      return "strong-only-trend";
    default:
      return "inconclusive";
  }
}

namespace {

double loglog_slope(const std::vector<ClassifySample>& series,
                    double (*pick)(const ClassifySample&)) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& s : series) {
    const double y = pick(s);
    if (!(y > 0.0) || !(s.refinement > 0.0)) continue;
    const double lx = std::log(s.refinement), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return -std::numeric_limits<double>::infinity();
  const double denom = double(n) * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (double(n) * sxy - sx * sy) / denom;
}

}  // namespace

Classification classify(const std::vector<ClassifySample>& series,
                        const ClassifyThresholds& thresholds) {
  if (series.size() < 3)
    throw InsufficientSeries("classify needs at least 3 refinement levels");
  Classification out;
  const ClassifySample& first = series.front();
  const ClassifySample& last = series.back();
  out.margin_ratio =
      first.margin_at_0 > 0.0 ? last.margin_at_0 / first.margin_at_0 : 0.0;
  out.gap_ratio =
      first.spectral_gap > 0.0 ? last.spectral_gap / first.spectral_gap : 0.0;
  out.margin_exponent =
      loglog_slope(series, [](const ClassifySample& s) { return s.margin_at_0; });
  out.gap_exponent =
      loglog_slope(series, [](const ClassifySample& s) { return s.spectral_gap; });

  bool kernels_trivial = true, interior_positive = true;
  for (const auto& s : series) {
    kernels_trivial = kernels_trivial && s.kernels_trivial;
    interior_positive = interior_positive && s.min_interior_margin > 0.0;
  }

  const bool margin_bounded =
      first.margin_at_0 > 0.0 && out.margin_ratio >= thresholds.bounded_ratio;
  const bool gap_bounded =
      first.spectral_gap > 0.0 && out.gap_ratio >= thresholds.bounded_ratio;
  if (margin_bounded && gap_bounded) {
    out.label = StabilityClass::ExponentialTrend;
  } else if (margin_bounded && interior_positive && kernels_trivial) {
    out.label = StabilityClass::SemiUniformTrend;
  } else if (out.margin_exponent < thresholds.decay_exponent &&
             kernels_trivial) {
    out.label = StabilityClass::StrongOnlyTrend;
  } else {
    out.label = StabilityClass::Inconclusive;
  }
  return out;
}

double spectral_abscissa(const LinearMap& a) {
  if (a.rows() != a.cols())
    throw SpaceMismatch("spectral_abscissa: A not square");
  auto s = schur_compute(a.m);
  double worst = -std::numeric_limits<double>::infinity();
  for (const cplx& v : s.values) worst = std::max(worst, v.real());
  return worst;
}

LinearMap restrict_to_complement(const LinearMap& a,
                                 const SubspaceBasis& subspace) {
  if (a.rows() != subspace.ambient_dim())
    throw SpaceMismatch("restrict_to_complement: dimensions");
  SubspaceBasis comp = orthonormal_complement(subspace);
  Matrix red = mulH(comp.q, mul(a.m, comp.q));
  return {std::move(red), "sub:" + a.domain, "sub:" + a.codomain};
}

}  // namespace damplab
