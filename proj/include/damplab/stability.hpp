#ifndef DAMPLAB_STABILITY_HPP
#define DAMPLAB_STABILITY_HPP

// Stability diagnostics: resolvent margins along the imaginary axis, the
// damping-structure hypothesis and its rotated accretivity bound, kernel
// identities, the geometric damping constant of the masked gradient space,
// the strongly-but-not-semi-uniformly-stable family, and the trend
// classifier. "Closed range" is never a boolean here: it is a margin plus
// its behaviour across refinements.

#include <limits>

#include "damplab/blockop.hpp"
#include "damplab/grid.hpp"

namespace damplab {

struct ResolventScan {
  std::vector<double> lambdas;
  std::vector<double> margins;  // sigma_min(i lambda - A)
  std::vector<std::size_t> kernel_dims;
};

ResolventScan resolvent_scan(const LinearMap& a,
                             const std::vector<double>& lambdas,
                             const RankPolicy& policy = {});

// default logarithmic grid {0} + {+-2^-6 .. +-2^3}
std::vector<double> default_lambda_grid();

struct GammaValidation {
  bool ok = false;
  std::string violated;          // name of the failed clause, empty when ok
  double off_diagonal = 0.0;     // ||U^H gamma Uperp|| and its mirror
  double accretivity_c = 0.0;    // smallest eigenvalue of Re gamma_U
  double perp_defect = 0.0;      // ||gamma_perp - gamma_perp^H||
  double perp_lower = 0.0;       // smallest eigenvalue of gamma_perp
};

GammaValidation validate_gamma(const LinearMap& gamma,
                               const SubspaceBasis& u_basis);

struct KernelIdentityReport {
  std::size_t dim_plus = 0;          // dim ker(gamma + A)
  std::size_t dim_minus = 0;         // dim ker(gamma - A)
  std::size_t dim_intersection = 0;  // dim (ker gamma  ker A)
  double residual = 0.0;             // worst mutual containment residual
};

KernelIdentityReport kernel_identity_check(const LinearMap& gamma,
                                           const LinearMap& askew,
                                           const SubspaceBasis& u_basis,
                                           const RankPolicy& policy = {});

struct RotatedAccretivity {
  double alpha = 0.0;    // rotation angle, sign opposite to lambda
  double c_tilde = 0.0;  // certified lower bound
  double measured_min_eig = 0.0;   // min eig Re(e^{i alpha}(i lambda + V^H gamma V))
  double measured_sigma_min = 0.0;  // sigma_min(i lambda + V^H gamma V)
};

RotatedAccretivity rotated_accretivity(const LinearMap& gamma, double lambda,
                                       const SubspaceBasis& v_basis,
                                       const SubspaceBasis& u_basis);

struct DampingGeometry {
  RegionMask mask;
  SubspaceBasis h0_basis;   // the inequality space, ambient E coordinates
  SubspaceBasis h2_basis;   // gradient part seen through both regions
  SubspaceBasis h3_basis;   // harmonic-gradient space over D
  SubspaceBasis h3t_basis;  // h3 restricted to 1_D[ran(grad0)]
  LinearMap t_matrix;       // h2 coordinates -> h3t coordinates
  double c0 = 0.0;          // ||U|| <= c0 ||1_D U|| on h0
  double sigma_min_t = 0.0;
  double surjectivity_residual = 0.0;
  double ep_margin = 0.0;  // smallest retained sigma of 1_D on ran(grad0)
};

DampingGeometry damping_constant(const GridSpec& grid, const RegionMask& mask,
                                 const RankPolicy& policy = {});

// The decaying-kernel-damping family: C kills ker(C) and acts as diag(1..N)
// on its complement; gamma is the identity there and diag(1/k) on ker(C).
BlockSystem counterexample_system(std::size_t n);

enum class StabilityClass {
  ExponentialTrend,
  SemiUniformTrend,
  StrongOnlyTrend,
  Inconclusive,
};

const char* to_string(StabilityClass c);

struct ClassifySample {
  double refinement = 0.0;
  double margin_at_0 = 0.0;   // closed-range margin of the kernel block
  double spectral_gap = 0.0;  // |max Re eig| of the reduced generator
  double min_interior_margin = std::numeric_limits<double>::infinity();
  bool kernels_trivial = true;
};

struct Classification {
  StabilityClass label = StabilityClass::Inconclusive;
  double margin_ratio = 0.0;     // last / first
  double gap_ratio = 0.0;
  double margin_exponent = 0.0;  // log-log slope vs refinement
  double gap_exponent = 0.0;
};

struct ClassifyThresholds {
  double bounded_ratio = 0.5;      // "bounded below" means last/first >= this
  double decay_exponent = -0.5;    // "decays" means fitted exponent < this
};

Classification classify(const std::vector<ClassifySample>& series,
                        const ClassifyThresholds& thresholds = {});

// ---- helpers shared by scans and the classifier ---------------------------

// max Re eigenvalue
double spectral_abscissa(const LinearMap& a);

// compression of a onto the orthogonal complement of the given subspace
LinearMap restrict_to_complement(const LinearMap& a,
                                 const SubspaceBasis& subspace);

}  // namespace damplab

#endif
