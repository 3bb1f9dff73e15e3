#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "damplab/stability.hpp"
#include "fixtures.hpp"

using namespace damplab;

namespace {

std::mt19937_64 rng(1234);

// gamma and skew part of the reduced Maxwell generator, plus the basis of
// the damped coordinate block
struct StateParts {
  LinearMap gamma_state;
  LinearMap askew;
  SubspaceBasis damped;
  LinearMap a_reduced;
};

StateParts state_parts(const fixtures::MaxwellFixture& fx) {
  const std::size_t n0 = fx.sys.c.cols(), r = fx.frame.rank();
  const std::string label = fx.sys.h0() + "+ranC";
  Matrix gs(n0 + r, n0 + r);
  gs.set_block(0, 0, fx.sys.gamma.m);
  Matrix chx = mulH(fx.sys.c.m, fx.frame.ran_c.q);
  Matrix sk(n0 + r, n0 + r);
  sk.set_block(0, n0, chx);
  for (std::size_t j = 0; j < n0; ++j)
    for (std::size_t i = 0; i < r; ++i) sk(n0 + i, j) = -std::conj(chx(j, i));
  std::size_t nd = 0;
  for (bool b : fx.region.edges) nd += b;
  Matrix u(n0 + r, nd);
  std::size_t k = 0;
  for (std::size_t e = 0; e < fx.region.edges.size(); ++e)
    if (fx.region.edges[e]) u(e, k++) = 1.0;
  StateParts out{LinearMap(std::move(gs), label, label),
                 LinearMap(std::move(sk), label, label),
                 SubspaceBasis{std::move(u), label, 0.0},
                 assemble_A_reduced(fx.sys, fx.frame)};
  return out;
}

}  // namespace

TEST_CASE("resolvent scan forced cases") {
  LinearMap zero(Matrix(3, 3), "X", "X");
  auto scan = resolvent_scan(zero, {1.0});
  CHECK(scan.margins[0] == doctest::Approx(1.0));
  CHECK(scan.kernel_dims[0] == 0);

  Matrix sk(2, 2);
  sk(0, 1) = -2.0;
  sk(1, 0) = 2.0;  // eigenvalues +-2i
  auto hit = resolvent_scan(LinearMap(sk, "X", "X"), {2.0, 0.7});
  CHECK(hit.margins[0] <= 1e-12);
  CHECK(hit.kernel_dims[0] >= 1);
  CHECK(hit.margins[1] > 0.1);
  CHECK(hit.kernel_dims[1] == 0);
}

TEST_CASE("resolvent margins are even in lambda for real systems") {
  auto fx = fixtures::make_maxwell(8, "left");
  auto ar = assemble_A_reduced(fx.sys, fx.frame);
  auto scan = resolvent_scan(ar, {0.5, -0.5, 2.0, -2.0});
  CHECK(scan.margins[0] == doctest::Approx(scan.margins[1]).epsilon(1e-11));
  CHECK(scan.margins[2] == doctest::Approx(scan.margins[3]).epsilon(1e-11));
}

TEST_CASE("Maxwell scan: trivial kernels away from zero on ker(A)-perp") {
  auto fx = fixtures::make_maxwell(8, "left");
  auto parts = state_parts(fx);
  RankPolicy pol;
  auto ker = kernel_basis(parts.a_reduced, pol);
  auto a0 = restrict_to_complement(parts.a_reduced, ker);
  std::vector<double> grid;
  for (double l : default_lambda_grid())
    if (l != 0.0) grid.push_back(l);
  auto scan = resolvent_scan(a0, grid);
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
    CHECK(scan.kernel_dims[i] == 0);
    CHECK(scan.margins[i] > 0.0);
  }
  // ker(A) = ker(A^H) as subspaces
  auto kerh = kernel_basis(adjoint_map(parts.a_reduced), pol);
  CHECK(ker.dim() == kerh.dim());
  CHECK(containment_residual(ker, kerh) <= 1e-8);
  CHECK(containment_residual(kerh, ker) <= 1e-8);
}

TEST_CASE("validate_gamma clauses") {
  Matrix eye = Matrix::identity(4);
  SubspaceBasis full{Matrix::identity(4), "X", 0.0};
  auto v1 = validate_gamma(LinearMap(eye, "X", "X"), full);
  CHECK(v1.ok);
  CHECK(v1.accretivity_c == doctest::Approx(1.0));

  Matrix d(2, 2);
  d(0, 0) = 1.0;
  Matrix e1(2, 1);
  e1(0, 0) = 1.0;
  auto v2 = validate_gamma(LinearMap(d, "X", "X"), SubspaceBasis{e1, "X", 0.0});
  CHECK(v2.ok);
  CHECK(v2.accretivity_c == doctest::Approx(1.0));
  CHECK(v2.perp_lower == doctest::Approx(0.0));

  Matrix coupled(2, 2);
  coupled(0, 0) = 1.0;
  coupled(0, 1) = 0.5;
  coupled(1, 0) = 0.5;
  auto v3 = validate_gamma(LinearMap(coupled, "X", "X"),
                           SubspaceBasis{e1, "X", 0.0});
  CHECK(!v3.ok);
  CHECK(v3.violated.find("off-diagonal") != std::string::npos);
}

TEST_CASE("kernel identity on forced cases") {
  // gamma = 0 with U = {0}: all three kernels equal ker(A)
  Matrix sk(4, 4);
  sk(0, 1) = -1.0;
  sk(1, 0) = 1.0;  // ker = span(e3, e4)
  LinearMap a(sk, "X", "X");
  LinearMap gz(Matrix(4, 4), "X", "X");
  SubspaceBasis empty{Matrix(4, 0), "X", 0.0};
  auto rep = kernel_identity_check(gz, a, empty);
  CHECK(rep.dim_plus == 2);
  CHECK(rep.dim_minus == 2);
  CHECK(rep.dim_intersection == 2);
  CHECK(rep.residual <= 1e-8);

  // gamma = I: everything trivial
  LinearMap gi(Matrix::identity(4), "X", "X");
  SubspaceBasis full{Matrix::identity(4), "X", 0.0};
  auto rep2 = kernel_identity_check(gi, a, full);
  CHECK(rep2.dim_plus == 0);
  CHECK(rep2.dim_minus == 0);
  CHECK(rep2.dim_intersection == 0);
}

TEST_CASE("kernel identity on the damped Maxwell state operator") {
  auto fx = fixtures::make_maxwell(8, "left");
  auto parts = state_parts(fx);
  auto rep = kernel_identity_check(parts.gamma_state, parts.askew,
                                   parts.damped);
  CHECK(rep.dim_plus == rep.dim_minus);
  CHECK(rep.dim_plus == rep.dim_intersection);
  CHECK(rep.residual <= 1e-8);
  // cross-check the dimension with the brute-force intersection oracle
  RankPolicy pol;
  auto kg = kernel_basis(parts.gamma_state, pol);
  auto ka = kernel_basis(parts.askew, pol);
  Matrix oracle = oracles::intersection_oracle(kg.q, ka.q);
  CHECK(rep.dim_intersection == oracle.cols());
}

TEST_CASE("kernel identity rejects a hypothesis violation") {
  Matrix sk(3, 3);
  sk(0, 1) = -1.0;
  sk(1, 0) = 1.0;
  Matrix coupled(3, 3);
  coupled(0, 0) = 1.0;
  coupled(0, 2) = 0.4;
  coupled(2, 0) = 0.4;
  Matrix e1(3, 1);
  e1(0, 0) = 1.0;
  CHECK_THROWS_AS(
      kernel_identity_check(LinearMap(coupled, "X", "X"),
                            LinearMap(sk, "X", "X"),
                            SubspaceBasis{e1, "X", 0.0}),
      HypothesisViolated);
}

TEST_CASE("rotated accretivity certifies the shift bound") {
  // gamma = 0: pure shift, U empty
  LinearMap gz(Matrix(5, 5), "X", "X");
  SubspaceBasis empty{Matrix(5, 0), "X", 0.0};
  SubspaceBasis full{Matrix::identity(5), "X", 0.0};
  auto r0 = rotated_accretivity(gz, 1.0, full, empty);
  CHECK(r0.c_tilde > 0.0);
  CHECK(r0.c_tilde ==
        doctest::Approx(std::abs(std::sin(r0.alpha))).epsilon(1e-12));
  CHECK(r0.measured_sigma_min == doctest::Approx(1.0));
  CHECK(r0.measured_min_eig >= r0.c_tilde - 1e-12);

  // gamma = I: normal operator, sigma_min = |1 + i|
  LinearMap gi(Matrix::identity(5), "X", "X");
  auto r1 = rotated_accretivity(gi, 1.0, full, full);
  CHECK(r1.measured_sigma_min == doctest::Approx(std::sqrt(2.0)));
  CHECK(r1.measured_sigma_min >= r1.c_tilde);
  CHECK(r1.measured_min_eig >= r1.c_tilde - 1e-12);
  CHECK(r1.alpha < 0.0);  // sign opposite to lambda

  // random hypothesis gamma on a random 5-dim subspace
  for (int t = 0; t < 4; ++t) {
    auto gf = fixtures::random_hypothesis_gamma(rng, 9, 4);
    Matrix vq = qr_factor(oracles::random_matrix(rng, 9, 5)).q(5);
    SubspaceBasis v{vq, "X", 0.0};
    SubspaceBasis u{gf.u, "X", 0.0};
    auto r = rotated_accretivity(LinearMap(gf.gamma, "X", "X"), 0.3, v, u);
    CHECK(r.c_tilde > 0.0);
    CHECK(r.c_tilde <= r.measured_sigma_min + 1e-12);
    CHECK(r.measured_min_eig >= r.c_tilde - 1e-10);
    CHECK(r.alpha < 0.0);  // lambda = 0.3 > 0
  }
}

TEST_CASE("shift bound holds along the whole scan grid (Maxwell)") {
  auto fx = fixtures::make_maxwell(8, "left");
  std::size_t nd = 0;
  for (bool b : fx.region.edges) nd += b;
  Matrix u(fx.sys.c.cols(), nd);
  std::size_t k = 0;
  for (std::size_t e = 0; e < fx.region.edges.size(); ++e)
    if (fx.region.edges[e]) u(e, k++) = 1.0;
  SubspaceBasis ub{std::move(u), fx.sys.h0(), 0.0};
  for (double lambda : default_lambda_grid()) {
    if (lambda == 0.0) continue;
    auto r = rotated_accretivity(fx.sys.gamma, lambda, fx.frame.ker_c, ub);
    CHECK(r.measured_sigma_min >= r.c_tilde - 1e-12);
    CHECK(r.measured_min_eig >= r.c_tilde - 1e-10);
  }
}

TEST_CASE("damping geometry: full mask has c0 = 1 and trivial H2") {
  GridSpec g{8, 8};
  auto geo = damping_constant(g, RegionMask::full(g));
  CHECK(geo.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(geo.h2_basis.dim() == 0);
  CHECK(geo.ep_margin == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(damping_constant(g, RegionMask{{}, ""}), SpaceMismatch);
  RegionMask none;
  none.edges.assign(g.n_edges(), false);
  CHECK_THROWS_AS(damping_constant(g, none), EmptyRegion);
}

TEST_CASE("damping geometry: left half") {
  GridSpec g{12, 12};
  RegionMask left = RegionMask::from_rects(g, {{0.0, 0.0, 0.5, 1.0}});
  auto geo = damping_constant(g, left);
  CHECK(std::isfinite(geo.c0));
  CHECK(geo.c0 >= 1.0);  // masking never grows a vector
  // the decisive inequality, vector by vector
  for (std::size_t j = 0; j < geo.h0_basis.dim(); ++j) {
    double masked = 0.0, total = 0.0;
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
      const double v = std::abs(geo.h0_basis.q(e, j));
      total += v * v;
      if (left.edges[e]) masked += v * v;
    }
    CHECK(std::sqrt(total) <= geo.c0 * std::sqrt(masked) + 1e-9);
  }
  // H2 sits inside ran(grad0)
  auto rg = range_basis(build_grad0(g), RankPolicy{});
  CHECK(containment_residual(geo.h2_basis, rg) <= 1e-9);
}

TEST_CASE("damping geometry: concentric square") {
  GridSpec g{12, 12};
  RegionMask mid = RegionMask::from_rects(g, {{0.25, 0.25, 0.75, 0.75}});
  auto geo = damping_constant(g, mid);
  CHECK(std::isfinite(geo.c0));
  CHECK(geo.h3t_basis.dim() > 0);
  CHECK(geo.sigma_min_t > 0.0);
  CHECK(geo.surjectivity_residual <= 1e-8);
  CHECK(geo.t_matrix.rows() == geo.h3t_basis.dim());
  CHECK(geo.t_matrix.cols() == geo.h2_basis.dim());
  CHECK(geo.ep_margin > 0.0);
}

TEST_CASE("left-half damping constant is stable under refinement") {
  double c0[2];
  int i = 0;
  for (std::size_t n : {12, 24}) {
    GridSpec g{n, n};
    RegionMask left = RegionMask::from_rects(g, {{0.0, 0.0, 0.5, 1.0}});
    auto geo = damping_constant(g, left);
    CHECK(std::isfinite(geo.c0));
    c0[i++] = geo.c0;
  }
  const double band = std::abs(c0[1] - c0[0]) / std::min(c0[0], c0[1]);
  CHECK(band < 0.2);
}

TEST_CASE("full damping: scan margins stay bounded under refinement") {
  double min_margin[2];
  int i = 0;
  for (std::size_t n : {8, 12}) {
    auto fx = fixtures::make_maxwell(n, "full");
    auto ar = assemble_A_reduced(fx.sys, fx.frame);
    auto scan = resolvent_scan(ar, default_lambda_grid());
    double lo = 1e300;
    for (std::size_t k = 0; k < scan.margins.size(); ++k) {
      CHECK(scan.kernel_dims[k] == 0);
      lo = std::min(lo, scan.margins[k]);
    }
    min_margin[i++] = lo;
  }
  CHECK(min_margin[1] / min_margin[0] >= 0.5);
  CHECK(min_margin[0] > 0.0);
}

TEST_CASE("counterexample family margins and kernels") {
  auto sys2 = counterexample_system(2);
  auto f2 = build_frame(sys2.c);
  REQUIRE(f2.ker_c.dim() == 2);
  LinearMap comp = compress(sys2.gamma, f2.ker_c, f2.ker_c);
  auto vals = svd_auto(comp.m, SvdMode::ValuesOnly);
  CHECK(vals.sigma[0] == doctest::Approx(1.0));
  CHECK(vals.sigma[1] == doctest::Approx(0.5));

  auto sys16 = counterexample_system(16);
  auto f16 = build_frame(sys16.c);
  auto m16 = closed_range_margin(sys16.gamma, f16);
  CHECK(std::abs(m16.margin - 1.0 / 16.0) <= 1e-12);

  for (std::size_t n : {8, 64}) {
    auto sys = counterexample_system(n);
    auto f = build_frame(sys.c);
    auto ar = assemble_A_reduced(sys, f);
    auto ker = kernel_basis(ar, RankPolicy{});
    CHECK(ker.dim() == 0);
    auto scan = resolvent_scan(ar, {0.0});
    CHECK(std::abs(scan.margins[0] - 1.0 / double(n)) <= 1e-12);
  }
  CHECK_THROWS_AS(counterexample_system(1), ConfigError);
}

TEST_CASE("classify the counterexample series as strong-only") {
  std::vector<ClassifySample> series;
  for (std::size_t n : {8, 16, 32, 64}) {
    auto sys = counterexample_system(n);
    auto f = build_frame(sys.c);
    auto margin = closed_range_margin(sys.gamma, f);
    auto ar = assemble_A_reduced(sys, f);
    ClassifySample s;
    s.refinement = double(n);
    s.margin_at_0 = margin.margin;
    s.spectral_gap = std::abs(spectral_abscissa(ar));
    s.kernels_trivial = kernel_basis(ar, RankPolicy{}).dim() == 0;
    series.push_back(s);
  }
  auto cls = classify(series);
  CHECK(cls.label == StabilityClass::StrongOnlyTrend);
  CHECK(std::abs(cls.margin_exponent + 1.0) <= 0.1);
  CHECK(std::string(to_string(cls.label)) == "strong-only-trend");
  // margins decrease monotonically in N
  for (std::size_t i = 1; i < series.size(); ++i)
    CHECK(series[i].margin_at_0 < series[i - 1].margin_at_0);
}

TEST_CASE("classify synthetic series") {
  std::vector<ClassifySample> exp_series;
  for (double n : {8.0, 16.0, 32.0}) {
    ClassifySample s;
    s.refinement = n;
    s.margin_at_0 = 1.0;
    s.spectral_gap = 0.5;
    exp_series.push_back(s);
  }
  CHECK(classify(exp_series).label == StabilityClass::ExponentialTrend);

  std::vector<ClassifySample> semi;
  double gaps[] = {0.4, 0.2, 0.08};
  int i = 0;
  for (double n : {8.0, 16.0, 32.0}) {
    ClassifySample s;
    s.refinement = n;
    s.margin_at_0 = 0.9 + 0.05 * i;
    s.spectral_gap = gaps[i++];
    s.min_interior_margin = 0.1;
    semi.push_back(s);
  }
  CHECK(classify(semi).label == StabilityClass::SemiUniformTrend);

  CHECK_THROWS_AS(classify({semi[0], semi[1]}), InsufficientSeries);
}

TEST_CASE("partial damping classifies as semi-uniform across refinements") {
  std::vector<ClassifySample> series;
  for (std::size_t n : {8, 12, 16}) {
    auto fx = fixtures::make_maxwell(n, "left");
    ClassifySample s;
    s.refinement = double(n);
    s.margin_at_0 = closed_range_margin(fx.sys.gamma, fx.frame).margin;
    auto ar = assemble_A_reduced(fx.sys, fx.frame);
    auto ker = kernel_basis(ar, RankPolicy{});
    auto a0 = restrict_to_complement(ar, ker);
    s.spectral_gap = std::abs(spectral_abscissa(a0));
    auto scan = resolvent_scan(a0, {0.015625, 0.5, 4.0});
    for (double m : scan.margins)
      s.min_interior_margin = std::min(s.min_interior_margin, m);
    for (std::size_t kd : scan.kernel_dims)
      s.kernels_trivial = s.kernels_trivial && kd == 0;
    series.push_back(s);
  }
  auto cls = classify(series);
  CHECK(cls.label == StabilityClass::SemiUniformTrend);
  CHECK(cls.margin_ratio >= 0.5);   // margin at 0 stays bounded below
  CHECK(cls.gap_ratio < 0.5);       // while the uniform gap erodes
}

TEST_CASE("spectral abscissa of the fully damped Maxwell generator") {
  auto fx = fixtures::make_maxwell(8, "full");
  auto ar = assemble_A_reduced(fx.sys, fx.frame);
  // gamma = 1 and all retained curl singular values exceed 1/2, so every
  // oscillatory pair sits at Re = -1/2
  CHECK(fx.frame.margin > 0.5);
  const double absc = spectral_abscissa(ar);
  CHECK(absc == doctest::Approx(-0.5).epsilon(1e-9));
}
