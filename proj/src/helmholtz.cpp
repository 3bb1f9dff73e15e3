#include "damplab/helmholtz.hpp"

namespace damplab {

HelmholtzFrame build_frame(const LinearMap& c, const RankPolicy& policy) {
  auto s = svd_auto(c.m, SvdMode::FullU);
  RankReport rep = decide_rank(s.sigma, policy);
  if (rep.ambiguous)
    throw AmbiguousRank("frame of C: singular value near the rank cutoff " +
                        std::to_string(rep.cutoff));
  const std::size_t m = c.rows(), n = c.cols(), r = rep.rank;
  HelmholtzFrame f;
  f.ran_cstar = {s.v.columns(0, r), c.domain, rep.cutoff};
  f.ker_c = {s.v.columns(r, n - r), c.domain, rep.cutoff};
  f.ran_c = {s.u.columns(0, r), c.codomain, rep.cutoff};
  f.ker_cstar = {s.u.columns(r, m - r), c.codomain, rep.cutoff};
  f.margin = rep.smallest_kept;
  f.rank_report = rep;
  return f;
}

LinearMap compress(const LinearMap& m, const SubspaceBasis& left,
                   const SubspaceBasis& right) {
  if (left.space != m.codomain || right.space != m.domain)
    throw SpaceMismatch("compress: " + left.space + "^H . " + m.domain + "->" +
                        m.codomain + " . " + right.space);
  if (left.ambient_dim() != m.rows() || right.ambient_dim() != m.cols())
    throw SpaceMismatch("compress: ambient dimensions do not match the map");
  Matrix lm = mulH(left.q, m.m);
  return {mul(lm, right.q), "sub:" + right.space, "sub:" + left.space};
}

MarginReport closed_range_margin(const LinearMap& gamma,
                                 const HelmholtzFrame& frame,
                                 const RankPolicy& policy) {
  if (!gamma.square_on(frame.ker_c.space) ||
      gamma.rows() != frame.ker_c.ambient_dim())
    throw SpaceMismatch("closed_range_margin: gamma must be square on H0");
  MarginReport out;
  if (frame.ker_c.dim() == 0) {
    out.zero_operator = true;
    return out;
  }
  LinearMap compressed = compress(gamma, frame.ker_c, frame.ker_c);
  auto s = svd_auto(compressed.m, SvdMode::ValuesOnly);
  RankReport rep = decide_rank(s.sigma, policy);
  out.dropped = s.sigma.size() - rep.rank;
  if (rep.rank == 0) {
    out.zero_operator = true;
    out.margin = 0.0;
  } else {
    out.margin = rep.smallest_kept;
  }
  return out;
}

}  // namespace damplab
