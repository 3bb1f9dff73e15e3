#ifndef DAMPLAB_SEMIGROUP_HPP
#define DAMPLAB_SEMIGROUP_HPP

// Time evolution of U' = A U: a norm-contractive Cayley stepper checked
// against a dense-exponential oracle, energy tracking, and decay-model
// fitting.

#include "damplab/linalg.hpp"

namespace damplab {

// Orthogonal projection onto the complement of the numerical kernel of A.
std::vector<cplx> project_initial(const std::vector<cplx>& u0,
                                  const SubspaceBasis& kernel);
std::vector<cplx> project_initial(const std::vector<cplx>& u0,
                                  const LinearMap& a,
                                  const RankPolicy& policy = {});

// (I - dt/2 A)^{-1} (I + dt/2 A), factored once; every solve is refined once
// and its residual checked.
class CayleyStepper {
 public:
  CayleyStepper(const LinearMap& a, double dt);

  std::vector<cplx> step(const std::vector<cplx>& u) const;
  double dt() const { return dt_; }
  std::size_t dim() const { return a_.rows(); }

 private:
  Matrix a_;
  LuFac<cplx> lu_;
  double dt_ = 0.0;
  double scale_ = 0.0;  // magnitude reference for the residual test
};

std::vector<cplx> step_cayley(const LinearMap& a, const std::vector<cplx>& u,
                              double dt);

// Dense-exponential reference trajectory: eigendecomposition when the
// eigenvector basis is trustworthy, scaling-and-squaring propagation
// otherwise.
std::vector<std::vector<cplx>> evolve_oracle(const LinearMap& a,
                                             const std::vector<cplx>& u0,
                                             const std::vector<double>& times);

enum class DecayModel { Exponential, Algebraic, Conservative };

const char* to_string(DecayModel m);

struct DecayFit {
  double rate_exponential = 0.0;  // E ~ exp(-rate t), rate >= 0
  double r2_exponential = 0.0;
  double exponent_algebraic = 0.0;  // E ~ t^exponent
  double r2_algebraic = 0.0;
  DecayModel selected = DecayModel::Conservative;
  std::size_t window_begin = 0;  // first sample index used by the fits
};

// Least-squares fits of log E against t and against log t over the trailing
// window (default: last half).
DecayFit fit_decay(const std::vector<double>& times,
                   const std::vector<double>& energies,
                   double window_fraction = 0.5);

}  // namespace damplab

#endif
