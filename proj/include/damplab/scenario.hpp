#ifndef DAMPLAB_SCENARIO_HPP
#define DAMPLAB_SCENARIO_HPP

// Instantiation of a configured experiment at one refinement level: the
// normalized system, its frame, the reduced generator and its kernel, and
// the pieces the diagnostics need (damping block structure, state-space
// splitting of the generator).

#include "damplab/config.hpp"
#include "damplab/semigroup.hpp"

namespace damplab {

struct Scenario {
  std::string name;
  std::size_t refinement = 0;

  // maxwell2d only; otherwise defaulted/empty
  GridSpec grid;
  RegionMask region;
  MaterialField materials;
  bool has_grid = false;

  BlockSystem sys;  // normalized
  HelmholtzFrame frame;
  LinearMap a_reduced;       // on H0 + ran(C) coordinates
  SubspaceBasis kernel;      // ker(a_reduced)
  LinearMap a0;              // restriction to the kernel complement

  // damping structure on the state space: gamma_state + askew = -a_reduced
  LinearMap gamma_state;
  LinearMap askew;
  SubspaceBasis damped_state;  // U basis for the damping hypothesis

  std::size_t state_dim() const { return a_reduced.rows(); }
};

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t refinement,
                        const RankPolicy& policy = {});

// refinement levels to sweep for the configured scenario
std::vector<std::size_t> scenario_refinements(const ExperimentConfig& cfg);

// deterministic random state from the configured seed, projected onto the
// complement of ker(A)
std::vector<cplx> initial_state(const Scenario& sc, std::uint64_t seed);

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<double> energies;           // squared state norm
  std::vector<double> energies_physical;  // <eps E, E> + <mu H, H>
  DecayFit fit;
  double graph_norm_initial = 0.0;
};

TrajectoryResult run_trajectory(const Scenario& sc,
                                const ExperimentConfig& cfg,
                                const std::vector<cplx>& u0);

}  // namespace damplab

#endif
