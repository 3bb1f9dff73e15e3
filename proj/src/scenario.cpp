#include "damplab/scenario.hpp"

#include <random>

namespace damplab {

namespace {

// state-space damping block, skew part, and the accretive coordinate basis
void split_state_parts(Scenario& sc) {
  const std::size_t n0 = sc.sys.c.cols(), r = sc.frame.rank();
  const std::string label = sc.a_reduced.domain;
  Matrix gs(n0 + r, n0 + r);
  gs.set_block(0, 0, sc.sys.gamma.m);
  Matrix sk = sc.a_reduced.m;
  sk *= cplx(-1.0);
  sk -= gs;  // askew = -A - gamma_state
  sc.gamma_state = LinearMap(std::move(gs), label, label);
  sc.askew = LinearMap(std::move(sk), label, label);

  // U = coordinates where Re gamma is strictly accretive. For Maxwell this
  // is the damped edge set; for the families it is the first block.
  std::vector<std::size_t> idx;
  if (sc.has_grid) {
    for (std::size_t e = 0; e < sc.region.edges.size(); ++e)
      if (sc.region.edges[e]) idx.push_back(e);
  } else {
    for (std::size_t i = 0; i < n0 / 2; ++i) idx.push_back(i);
  }
  Matrix u(n0 + r, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) u(idx[k], k) = 1.0;
  sc.damped_state = SubspaceBasis{std::move(u), label, 0.0};
}

Matrix abstract_gamma(std::size_t n, double coupling) {
  Matrix gamma(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    gamma(i, i) = 1.0;
    gamma(n + i, n + i) = 1.0 / double(i + 1);
    if (coupling != 0.0) {
      gamma(i, n + i) = coupling;
      gamma(n + i, i) = coupling;
    }
  }
  return gamma;
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t refinement,
                        const RankPolicy& policy) {
  Scenario sc;
  sc.name = cfg.scenario;
  sc.refinement = refinement;
  if (cfg.scenario == "maxwell2d") {
    sc.grid = cfg.grid;
    sc.grid.nx = refinement;
    sc.grid.ny = refinement;
    sc.grid.validate();
    sc.has_grid = true;
    sc.region = cfg.region_rects.empty()
                    ? RegionMask::full(sc.grid)
                    : RegionMask::from_rects(sc.grid, cfg.region_rects);
    if (sc.region.empty())
      throw ConfigError("damping region contains no edges at nx = " +
                        std::to_string(refinement));
    sc.materials = sample_materials(sc.grid, sc.region, cfg.materials);
    auto [curl0, curl0_star] = build_curl_pair(sc.grid);
    sc.sys = normalize(make_block_system(curl0, sc.materials.sigma,
                                         sc.materials.eps, sc.materials.mu));
  } else if (cfg.scenario == "counterexample") {
    sc.sys = counterexample_system(refinement);
  } else {  // abstract
    const std::size_t n = refinement;
    if (n < 2) throw ConfigError("abstract scenario needs n >= 2");
    const std::string h0 = "abH0#" + std::to_string(n);
    const std::string h1 = "abH1#" + std::to_string(n);
    Matrix c(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) c(i, i) = double(i + 1);
    sc.sys = make_normalized_system(
        LinearMap(std::move(c), h0, h1),
        LinearMap(abstract_gamma(n, cfg.abstract_coupling), h0, h0));
  }
  sc.frame = build_frame(sc.sys.c, policy);
  sc.a_reduced = assemble_A_reduced(sc.sys, sc.frame);
  sc.kernel = kernel_basis(sc.a_reduced, policy);
  sc.a0 = restrict_to_complement(sc.a_reduced, sc.kernel);
  split_state_parts(sc);
  return sc;
}

std::vector<std::size_t> scenario_refinements(const ExperimentConfig& cfg) {
  if (!cfg.refinements.empty()) return cfg.refinements;
  if (cfg.scenario == "maxwell2d") return {8, 12, 16};
  if (cfg.scenario == "counterexample") return {8, 16, 32, 64};
  return {cfg.abstract_n};
}

std::vector<cplx> initial_state(const Scenario& sc, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> u0(sc.state_dim());
  for (auto& x : u0) x = cplx(u(rng), u(rng));
  auto projected = project_initial(u0, sc.kernel);
  const double nrm = std::sqrt(kern::nrm2sq(projected.size(), projected.data()));
  if (nrm > 0.0)
    kern::scal(projected.size(), cplx(1.0 / nrm), projected.data());
  return projected;
}

TrajectoryResult run_trajectory(const Scenario& sc,
                                const ExperimentConfig& cfg,
                                const std::vector<cplx>& u0) {
  TrajectoryResult out;
  const double dt = cfg.effective_dt(sc.has_grid ? sc.grid : GridSpec{8, 8});
  const std::size_t steps =
      std::size_t(std::ceil(cfg.time_horizon / dt - 1e-12));

  // physical-unit back-substitution for the Maxwell scenario
  Matrix eps_phys, mu_phys, inv_sqrt_eps, inv_sqrt_mu;
  if (sc.has_grid) {
    eps_phys = sc.materials.eps.m;
    mu_phys = sc.materials.mu.m;
    inv_sqrt_eps = hermitian_sqrt(sc.materials.eps).inv_sqrt.m;
    inv_sqrt_mu = hermitian_sqrt(sc.materials.mu).inv_sqrt.m;
  }
  const std::size_t n0 = sc.sys.c.cols();

  auto physical_energy = [&](const std::vector<cplx>& u) {
    if (!sc.has_grid) return kern::nrm2sq(u.size(), u.data());
    // E = sqrt(eps)^-1 E~, H = sqrt(mu)^-1 iota1 h~
    std::vector<cplx> et(u.begin(), u.begin() + n0);
    std::vector<cplx> ht(sc.sys.c.rows(), 0.0);
    matvec(sc.frame.ran_c.q, u.data() + n0, ht.data());
    std::vector<cplx> e(n0), h(ht.size());
    matvec(inv_sqrt_eps, et.data(), e.data());
    matvec(inv_sqrt_mu, ht.data(), h.data());
    std::vector<cplx> tmp(n0);
    matvec(eps_phys, e.data(), tmp.data());
    double total = kern::dotc(n0, tmp.data(), e.data()).real();
    std::vector<cplx> tmph(h.size());
    matvec(mu_phys, h.data(), tmph.data());
    total += kern::dotc(h.size(), tmph.data(), h.data()).real();
    return total;
  };

  std::vector<cplx> au(sc.state_dim());
  matvec(sc.a_reduced.m, u0.data(), au.data());
  out.graph_norm_initial = std::sqrt(kern::nrm2sq(u0.size(), u0.data())) +
                           std::sqrt(kern::nrm2sq(au.size(), au.data()));

  CayleyStepper stepper(sc.a_reduced, dt);
  std::vector<cplx> u = u0;
  out.times.reserve(steps + 1);
  out.energies.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    out.times.push_back(double(k) * dt);
    out.energies.push_back(kern::nrm2sq(u.size(), u.data()));
    out.energies_physical.push_back(physical_energy(u));
    if (k < steps) u = stepper.step(u);
  }
  out.fit = fit_decay(out.times, out.energies);
  return out;
}

}  // namespace damplab
