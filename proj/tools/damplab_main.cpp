// Experiment runner: simulate | scan | constant | counterexample | verify.
// Exit codes: 0 ok, 1 invariant violation, 2 config error, 3 numerical
// failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <random>

#include "damplab/csv.hpp"
#include "damplab/scenario.hpp"

using namespace damplab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  long refine = -1;
  long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config file");
  cmd->add_option("--out", o.out_dir, "output directory override");
  cmd->add_option("--refine", o.refine, "single refinement level override");
  cmd->add_option("--seed", o.seed, "seed override");
}

ExperimentConfig load_config(const CommonOpts& o) {
  ExperimentConfig cfg = o.config_path.empty()
                             ? ExperimentConfig{}
                             : ExperimentConfig::from_file(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.refine > 0) cfg.refinements = {std::size_t(o.refine)};
  if (o.seed >= 0) cfg.seed = std::uint64_t(o.seed);
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

std::size_t simulate_refinement(const ExperimentConfig& cfg) {
  if (!cfg.refinements.empty()) return cfg.refinements.front();
  if (cfg.scenario == "maxwell2d") return cfg.grid.nx;
  if (cfg.scenario == "counterexample") return 16;
  return cfg.abstract_n;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  Scenario sc = build_scenario(cfg, simulate_refinement(cfg));
  auto u0 = initial_state(sc, cfg.seed);
  TrajectoryResult tr = run_trajectory(sc, cfg, u0);

  CsvWriter traj(out_path(cfg, "trajectory.csv"),
                 {"t", "energy", "energy_physical"});
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    traj.row({csv_number(tr.times[k]), csv_number(tr.energies[k]),
              csv_number(tr.energies_physical[k])});

  CsvWriter rep(out_path(cfg, "decay_report.csv"),
                {"scenario", "refinement", "dt", "rate_exponential",
                 "r2_exponential", "exponent_algebraic", "r2_algebraic",
                 "selected_model", "graph_norm_initial", "energy_initial",
                 "energy_final"});
  rep.row({sc.name, std::to_string(sc.refinement),
           csv_number(cfg.effective_dt(sc.has_grid ? sc.grid : GridSpec{8, 8})),
           csv_number(tr.fit.rate_exponential),
           csv_number(tr.fit.r2_exponential),
           csv_number(tr.fit.exponent_algebraic),
           csv_number(tr.fit.r2_algebraic), to_string(tr.fit.selected),
           csv_number(tr.graph_norm_initial), csv_number(tr.energies.front()),
           csv_number(tr.energies.back())});
  std::cout << "simulate: " << sc.name << " refinement " << sc.refinement
            << " model " << to_string(tr.fit.selected) << " rate "
            << tr.fit.rate_exponential << "\n";
  return 0;
}

int cmd_scan(const ExperimentConfig& cfg) {
  const auto lambdas = cfg.lambdas();
  if (lambdas.empty()) throw ConfigError("empty lambda grid");
  CsvWriter out(out_path(cfg, "scan.csv"),
                {"lambda", "margin", "kernel_dim", "refinement"});
  std::vector<ClassifySample> series;
  for (std::size_t r : scenario_refinements(cfg)) {
    Scenario sc = build_scenario(cfg, r);
    ResolventScan scan = resolvent_scan(sc.a0, lambdas);
    ClassifySample s;
    s.refinement = double(r);
    s.margin_at_0 = closed_range_margin(sc.sys.gamma, sc.frame).margin;
    s.spectral_gap = std::abs(spectral_abscissa(sc.a0));
    s.kernels_trivial = true;
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
      out.row({csv_number(scan.lambdas[i]), csv_number(scan.margins[i]),
               std::to_string(scan.kernel_dims[i]), std::to_string(r)});
      if (scan.lambdas[i] != 0.0) {
        s.min_interior_margin =
            std::min(s.min_interior_margin, scan.margins[i]);
        s.kernels_trivial = s.kernels_trivial && scan.kernel_dims[i] == 0;
      }
    }
    series.push_back(s);
    std::cout << "scan: refinement " << r << " done (" << lambdas.size()
              << " shifts, state dim " << sc.state_dim() << ")\n";
  }
  if (series.size() >= 3) {
    Classification cls = classify(series, cfg.classify_thresholds);
    CsvWriter cl(out_path(cfg, "classification.csv"),
                 {"label", "margin_ratio", "gap_ratio", "margin_exponent",
                  "gap_exponent"});
    cl.row({to_string(cls.label), csv_number(cls.margin_ratio),
            csv_number(cls.gap_ratio), csv_number(cls.margin_exponent),
            csv_number(cls.gap_exponent)});
    std::cout << "scan: classification " << to_string(cls.label) << "\n";
  }
  return 0;
}

int cmd_constant(const ExperimentConfig& cfg) {
  if (cfg.scenario != "maxwell2d")
    throw ConfigError("constant requires the maxwell2d scenario");
  std::vector<std::size_t> refinements =
      cfg.refinements.empty() ? std::vector<std::size_t>{12, 24, 48}
                              : cfg.refinements;
  CsvWriter out(out_path(cfg, "constant.csv"),
                {"refinement", "c0", "sigma_min_T", "surjectivity_residual",
                 "ep_margin"});
  for (std::size_t r : refinements) {
    GridSpec g = cfg.grid;
    g.nx = r;
    g.ny = r;
    g.validate();
    RegionMask mask = cfg.region_rects.empty()
                          ? RegionMask::full(g)
                          : RegionMask::from_rects(g, cfg.region_rects);
    if (mask.empty())
      throw ConfigError("damping region contains no edges at nx = " +
                        std::to_string(r));
    DampingGeometry geo = damping_constant(g, mask);
    out.row({std::to_string(r), csv_number(geo.c0),
             csv_number(geo.sigma_min_t),
             csv_number(geo.surjectivity_residual),
             csv_number(geo.ep_margin)});
    std::cout << "constant: refinement " << r << " c0 " << geo.c0
              << " sigma_min(T) " << geo.sigma_min_t << " dims H0/H2/H3t "
              << geo.h0_basis.dim() << "/" << geo.h2_basis.dim() << "/"
              << geo.h3t_basis.dim() << "\n";
  }
  return 0;
}

int cmd_counterexample(ExperimentConfig cfg) {
  // refinement lists configured for other scenarios do not carry over
  if (cfg.scenario != "counterexample") cfg.refinements.clear();
  cfg.scenario = "counterexample";
  const auto lambdas = cfg.lambdas();
  std::vector<ClassifySample> series;
  CsvWriter out(out_path(cfg, "counterexample.csv"),
                {"N", "margin_at_0", "spectral_gap", "min_interior_margin",
                 "kernels_trivial"});
  for (std::size_t n : scenario_refinements(cfg)) {
    Scenario sc = build_scenario(cfg, n);
    auto margin = closed_range_margin(sc.sys.gamma, sc.frame);
    ClassifySample s;
    s.refinement = double(n);
    s.margin_at_0 = margin.margin;
    s.spectral_gap = std::abs(spectral_abscissa(sc.a0));
    ResolventScan scan = resolvent_scan(sc.a0, lambdas);
    bool trivial = sc.kernel.dim() == 0;
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
      if (scan.lambdas[i] == 0.0) continue;
      s.min_interior_margin =
          std::min(s.min_interior_margin, scan.margins[i]);
      trivial = trivial && scan.kernel_dims[i] == 0;
    }
    s.kernels_trivial = trivial;
    series.push_back(s);
    out.row({std::to_string(n), csv_number(s.margin_at_0),
             csv_number(s.spectral_gap), csv_number(s.min_interior_margin),
             s.kernels_trivial ? "1" : "0"});
  }
  Classification cls = classify(series, cfg.classify_thresholds);
  CsvWriter cl(out_path(cfg, "classification.csv"),
               {"label", "margin_ratio", "gap_ratio", "margin_exponent",
                "gap_exponent"});
  cl.row({to_string(cls.label), csv_number(cls.margin_ratio),
          csv_number(cls.gap_ratio), csv_number(cls.margin_exponent),
          csv_number(cls.gap_exponent)});
  std::cout << "counterexample: " << to_string(cls.label)
            << " margin exponent " << cls.margin_exponent << "\n";
  return 0;
}

struct VerifyFailure {
  std::string name;
  std::string detail;
};

int cmd_verify(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::function<void()>>> checks;
  Scenario sc;
  try {
    sc = build_scenario(cfg, simulate_refinement(cfg));
  } catch (const Error& e) {
    std::cout << "[FAIL] scenario construction: " << e.what() << "\n";
    return 1;
  }

  auto fail = [](const std::string& name, const std::string& detail) {
    throw VerifyFailure{name, detail};
  };

  checks.emplace_back("grid_exactness", [&] {
    if (!sc.has_grid) return;
    auto [c, cstar] = build_curl_pair(sc.grid);
    LinearMap gr = build_grad0(sc.grid);
    Matrix prod = mul(c.m, gr.m);
    if (prod.norm_max() != 0.0)
      fail("grid_exactness", "curl.grad = " + csv_number(prod.norm_max()));
    Matrix adj = c.m.adjoint() - cstar.m;
    if (adj.norm_max() != 0.0)
      fail("grid_exactness", "adjoint mismatch");
  });

  checks.emplace_back("dissipativity", [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = sc.state_dim();
    std::vector<cplx> x(n), y(n);
    for (int probe = 0; probe < 1000; ++probe) {
      for (auto& v : x) v = cplx(u(rng), u(rng));
      matvec(sc.a_reduced.m, x.data(), y.data());
      const double re = kern::dotc(n, x.data(), y.data()).real();
      if (re > 1e-10 * kern::nrm2sq(n, x.data()))
        fail("dissipativity", "Re<Ax,x> = " + csv_number(re));
    }
  });

  checks.emplace_back("frame_completeness", [&] {
    Matrix p0 = matmul(kern::Op::None, sc.frame.ran_cstar.q, kern::Op::ConjT,
                       sc.frame.ran_cstar.q);
    p0 += matmul(kern::Op::None, sc.frame.ker_c.q, kern::Op::ConjT,
                 sc.frame.ker_c.q);
    p0 -= Matrix::identity(sc.sys.c.cols());
    if (p0.norm_fro() > 1e-9)
      fail("frame_completeness", "H0 defect " + csv_number(p0.norm_fro()));
    LinearMap red = compress(sc.sys.c, sc.frame.ran_c, sc.frame.ran_cstar);
    const double smin = min_singular_value(red);
    if (std::abs(smin - sc.frame.margin) > 1e-10 * (1.0 + sc.frame.margin))
      fail("frame_completeness", "reduced sigma_min vs margin");
  });

  checks.emplace_back("validate_gamma", [&] {
    GammaValidation v = validate_gamma(sc.gamma_state, sc.damped_state);
    if (!v.ok) fail("validate_gamma", v.violated);
  });

  checks.emplace_back("schur_identity", [&] {
    auto sh = assemble_B(sc.sys, sc.frame, 1.0);
    auto rep = schur_identity_check(sh);
    if (rep.residual > 1e-9)
      fail("schur_identity", "residual " + csv_number(rep.residual));
    auto zero = schur_reduce_B0(sc.sys, sc.frame);
    if (zero.a11_residual > 1e-12 || zero.schur_deviation > 1e-10)
      fail("schur_identity", "lambda=0 reduction deviates");
  });

  checks.emplace_back("kernel_identity", [&] {
    auto rep = kernel_identity_check(sc.gamma_state, sc.askew,
                                     sc.damped_state);
    if (rep.dim_plus != rep.dim_minus ||
        rep.dim_plus != rep.dim_intersection || rep.residual > 1e-8)
      fail("kernel_identity", "dims " + std::to_string(rep.dim_plus) + "/" +
                                  std::to_string(rep.dim_minus) + "/" +
                                  std::to_string(rep.dim_intersection) +
                                  " residual " + csv_number(rep.residual));
  });

  checks.emplace_back("cayley_contraction", [&] {
    auto u0 = initial_state(sc, cfg.seed);
    CayleyStepper st(sc.a_reduced,
                     cfg.effective_dt(sc.has_grid ? sc.grid : GridSpec{8, 8}));
    double prev = std::sqrt(kern::nrm2sq(u0.size(), u0.data()));
    auto u = u0;
    for (int k = 0; k < 100; ++k) {
      u = st.step(u);
      const double cur = std::sqrt(kern::nrm2sq(u.size(), u.data()));
      if (cur > prev * (1.0 + 1e-12))
        fail("cayley_contraction", "norm grew at step " + std::to_string(k));
      prev = cur;
    }
  });

  for (auto& [name, run] : checks) {
    try {
      run();
      std::cout << "[ok] " << name << "\n";
    } catch (const VerifyFailure& f) {
      std::cout << "[FAIL] " << f.name << ": " << f.detail << "\n";
      return 1;
    } catch (const Error& e) {
      std::cout << "[FAIL] " << name << ": " << e.what() << "\n";
      return 1;
    }
  }
  std::cout << "verify: all invariants hold\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-operator damping laboratory"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* simulate = app.add_subcommand("simulate", "time evolution and decay fit");
  auto* scan = app.add_subcommand("scan", "resolvent margins on the imaginary axis");
  auto* constant = app.add_subcommand("constant", "geometric damping constant");
  auto* counter = app.add_subcommand("counterexample",
                                     "decaying-margin family and classification");
  auto* verify = app.add_subcommand("verify", "cross-module invariant suite");
  for (auto* cmd : {simulate, scan, constant, counter, verify})
    add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = load_config(opts);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (constant->parsed()) return cmd_constant(cfg);
    if (counter->parsed()) return cmd_counterexample(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DecompositionFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
