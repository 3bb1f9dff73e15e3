#ifndef DAMPLAB_HELMHOLTZ_HPP
#define DAMPLAB_HELMHOLTZ_HPP

// Discrete Helmholtz frame of a closed-range map C: orthonormal bases for
// ran(C*), ker(C), ran(C), ker(C*) with the embeddings kept as explicit
// matrices, plus compressions of operators onto frame components.

#include "damplab/linalg.hpp"

namespace damplab {

struct HelmholtzFrame {
  SubspaceBasis ran_cstar;  // over H0
  SubspaceBasis ker_c;      // over H0
  SubspaceBasis ran_c;      // over H1
  SubspaceBasis ker_cstar;  // over H1
  double margin = 0.0;      // smallest retained singular value of C
  RankReport rank_report;

  std::size_t rank() const { return ran_c.dim(); }
};

HelmholtzFrame build_frame(const LinearMap& c, const RankPolicy& policy = {});

// left^H * m * right
LinearMap compress(const LinearMap& m, const SubspaceBasis& left,
                   const SubspaceBasis& right);

struct MarginReport {
  double margin = 0.0;
  bool zero_operator = false;  // compressed operator vanished entirely
  std::size_t dropped = 0;     // singular values treated as zero
};

// Smallest nonzero singular value of kappa0^H gamma kappa0. The refinement
// behaviour of this number is the discrete stand-in for the closed-range
// property of the damping on ker(C).
MarginReport closed_range_margin(const LinearMap& gamma,
                                 const HelmholtzFrame& frame,
                                 const RankPolicy& policy = {});

}  // namespace damplab

#endif
