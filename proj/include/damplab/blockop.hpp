#ifndef DAMPLAB_BLOCKOP_HPP
#define DAMPLAB_BLOCKOP_HPP

// The damped block system, its normalized form, the generator A, the
// frame-coordinate shifted operator B(lambda), and the Schur transforms
// that decouple it.

#include "damplab/helmholtz.hpp"

namespace damplab {

struct BlockSystem {
  LinearMap c;      // H0 -> H1
  LinearMap gamma;  // on H0, Re gamma >= 0
  LinearMap alpha;  // on H0, Hermitian positive definite
  LinearMap beta;   // on H1, Hermitian positive definite
  bool normalized = false;

  const std::string& h0() const { return c.domain; }
  const std::string& h1() const { return c.codomain; }
};

// Validates labels and dissipativity (Re gamma >= -1e-10 as a matrix).
BlockSystem make_block_system(LinearMap c, LinearMap gamma, LinearMap alpha,
                              LinearMap beta);

// Convenience constructor with alpha = beta = 1 (already normalized).
BlockSystem make_normalized_system(LinearMap c, LinearMap gamma);

// Change of variables absorbing alpha and beta:
// C <- beta^{-1/2} C alpha^{-1/2}, gamma <- alpha^{-1/2} gamma alpha^{-1/2}.
BlockSystem normalize(const BlockSystem& sys);

// A = -[[gamma, 0], [0, 0]] - [[0, -C^H], [C, 0]] on H0 + H1.
LinearMap assemble_A(const BlockSystem& sys);

// A restricted to the state space H0 + ran(C), second component written in
// ran(C) coordinates.
LinearMap assemble_A_reduced(const BlockSystem& sys,
                             const HelmholtzFrame& frame);

struct ShiftedSystem {
  double lambda = 0.0;
  std::size_t r = 0;  // dim ran(C*) = dim ran(C)
  std::size_t k = 0;  // dim ker(C)
  Matrix b;           // (2r+k) x (2r+k), blocks ordered ran(C*), ran(C), ker(C)
  Matrix t1, t2;      // unit antitriangular Schur transforms (lambda != 0)
  // frame-coordinate pieces the transforms are built from
  Matrix g00, g0k, gk0, gkk, x;
  bool has_transforms = false;
};

ShiftedSystem assemble_B(const BlockSystem& sys, const HelmholtzFrame& frame,
                         double lambda, const RankPolicy& policy = {});

struct SchurIdentityReport {
  double residual = 0.0;   // || T1 B T2 - decoupled form ||_F
  Matrix decoupled_block;  // the (3,3) block i*lambda + kappa0^H gamma kappa0
};

SchurIdentityReport schur_identity_check(const ShiftedSystem& shift);

struct SchurZeroReport {
  LinearMap compressed_gamma;  // kappa0^H gamma kappa0
  double a11_residual = 0.0;   // ||(a^{-1})_11||_F from the numeric inverse
  double schur_deviation = 0.0;  // ||(d - c a^{-1} b) - d||_F
  double formula_deviation = 0.0;  // numeric inverse vs block formula
};

// lambda = 0 reduction: eliminates the invertible antitriangular corner and
// confirms the Schur complement collapses onto kappa0^H gamma kappa0.
SchurZeroReport schur_reduce_B0(const BlockSystem& sys,
                                const HelmholtzFrame& frame,
                                const RankPolicy& policy = {});

}  // namespace damplab

#endif
