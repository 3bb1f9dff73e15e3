#ifndef DAMPLAB_TESTS_FIXTURES_HPP
#define DAMPLAB_TESTS_FIXTURES_HPP

// Shared test scenarios: normalized Maxwell systems on small grids and
// random damping operators with the U + U_perp block structure.

#include <random>
#include <string>

#include "damplab/blockop.hpp"
#include "damplab/grid.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace damplab;

struct MaxwellFixture {
  GridSpec grid;
  RegionMask region;
  MaterialField materials;
  BlockSystem sys;  // normalized
  HelmholtzFrame frame;
};

inline RegionMask named_region(const GridSpec& g, const std::string& kind) {
  if (kind == "full") return RegionMask::full(g);
  if (kind == "left")
    return RegionMask::from_rects(g, {{0.0, 0.0, 0.5, 1.0}});
  if (kind == "center")
    return RegionMask::from_rects(g, {{0.25, 0.25, 0.75, 0.75}});
  throw ConfigError("unknown region kind " + kind);
}

inline MaxwellFixture make_maxwell(std::size_t n, const std::string& region,
                                   MaterialSpec mat = {}) {
  MaxwellFixture f;
  f.grid = GridSpec{n, n};
  f.region = named_region(f.grid, region);
  f.region.description = region;
  f.materials = sample_materials(f.grid, f.region, mat);
  auto [curl0, curl0_star] = build_curl_pair(f.grid);
  BlockSystem raw = make_block_system(curl0, f.materials.sigma,
                                      f.materials.eps, f.materials.mu);
  f.sys = normalize(raw);
  f.frame = build_frame(f.sys.c);
  return f;
}

struct GammaFixture {
  Matrix gamma;
  Matrix u;  // n x du orthonormal columns spanning the accretive part
  double c;  // certified lower bound for Re gamma_U
};

inline GammaFixture random_hypothesis_gamma(std::mt19937_64& rng,
                                            std::size_t n, std::size_t du,
                                            double c = 0.5) {
  Matrix w = qr_factor(oracles::random_matrix(rng, n, n)).q(n);
  Matrix gu = oracles::random_matrix(rng, du, du);
  const double scale = 0.4 * c / std::max(1.0, gu.norm_fro());
  gu *= cplx(scale);
  for (std::size_t i = 0; i < du; ++i) gu(i, i) += c;
  Matrix b = oracles::random_matrix(rng, n - du,
                                    std::max<std::size_t>(1, (n - du) / 2));
  // (n-du) x (n-du) Hermitian PSD, generally rank deficient
  Matrix gp = matmul(kern::Op::None, b, kern::Op::ConjT, b);
  Matrix blk(n, n);
  blk.set_block(0, 0, gu);
  blk.set_block(du, du, gp);
  Matrix gamma = mul(w, matmul(kern::Op::None, blk, kern::Op::ConjT, w));
  GammaFixture out;
  out.gamma = std::move(gamma);
  out.u = w.columns(0, du);
  out.c = 0.6 * c;  // Re gu >= c - ||perturbation|| >= 0.6 c
  return out;
}

}  // namespace fixtures

#endif
