#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "damplab/linalg.hpp"
#include "oracles.hpp"

using namespace damplab;

namespace {

std::mt19937_64 rng(42);

LinearMap map_of(Matrix m, const std::string& d = "X",
                 const std::string& c = "Y") {
  return LinearMap(std::move(m), d, c);
}

SubspaceBasis random_subspace(std::size_t ambient, std::size_t dim,
                              const std::string& label) {
  Matrix a = oracles::random_matrix(rng, ambient, dim);
  auto f = qr_factor(a);
  return {f.q(dim), label, 0.0};
}

}  // namespace

TEST_CASE("hermitian_sqrt on the identity and a diagonal") {
  LinearMap id = map_of(Matrix::identity(5), "X", "X");
  auto r = hermitian_sqrt(id);
  Matrix d = r.sqrt.m - Matrix::identity(5);
  CHECK(d.norm_fro() < 1e-13);

  Matrix dg(2, 2);
  dg(0, 0) = 4.0;
  dg(1, 1) = 9.0;
  auto r2 = hermitian_sqrt(map_of(std::move(dg), "X", "X"));
  CHECK(std::abs(r2.sqrt.m(0, 0) - 2.0) < 1e-13);
  CHECK(std::abs(r2.sqrt.m(1, 1) - 3.0) < 1e-13);
  CHECK(std::abs(r2.inv_sqrt.m(1, 1) - 1.0 / 3.0) < 1e-13);
}

TEST_CASE("hermitian_sqrt recomposition oracle on random SPD") {
  Matrix b = oracles::random_matrix(rng, 8, 8);
  Matrix m = mulH(b, b);
  m += 0.1 * Matrix::identity(8);
  auto r = hermitian_sqrt(map_of(m, "X", "X"));
  Matrix ss = mul(r.sqrt.m, r.sqrt.m);
  ss -= m;
  CHECK(ss.norm_fro() < 1e-10 * m.norm_fro());
  Matrix prod = mul(r.sqrt.m, r.inv_sqrt.m);
  prod -= Matrix::identity(8);
  CHECK(prod.norm_fro() < 1e-10);
}

TEST_CASE("hermitian_sqrt rejects bad inputs") {
  Matrix m = oracles::random_matrix(rng, 4, 4);  // generic, not Hermitian
  CHECK_THROWS_AS(hermitian_sqrt(map_of(m, "X", "X")), NotHermitian);
  Matrix neg = Matrix::identity(3);
  neg(2, 2) = -1.0;
  CHECK_THROWS_AS(hermitian_sqrt(map_of(neg, "X", "X")), NotPositiveDefinite);
}

TEST_CASE("min_singular_value forced cases") {
  CHECK(min_singular_value(map_of(Matrix::identity(4), "X", "X")) ==
        doctest::Approx(1.0).epsilon(1e-14));
  Matrix d(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = 0.5;
  d(2, 2) = 1.0 / 3.0;
  d(3, 3) = 0.25;
  CHECK(min_singular_value(map_of(d, "X", "X")) ==
        doctest::Approx(0.25).epsilon(1e-14));
  Matrix sk(2, 2);
  sk(0, 1) = -2.0;
  sk(1, 0) = 2.0;
  CHECK(min_singular_value(map_of(sk, "X", "X")) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("range and kernel of trivial maps") {
  RankPolicy pol;
  LinearMap zero = map_of(Matrix(3, 3), "X", "Y");
  CHECK(range_basis(zero, pol).dim() == 0);
  CHECK(kernel_basis(zero, pol).dim() == 3);

  Matrix d(2, 2);
  d(0, 0) = 1.0;
  auto rb = range_basis(map_of(d, "X", "Y"), pol);
  auto kb = kernel_basis(map_of(d, "X", "Y"), pol);
  REQUIRE(rb.dim() == 1);
  REQUIRE(kb.dim() == 1);
  CHECK(std::abs(rb.q(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(kb.q(1, 0)) == doctest::Approx(1.0));
  CHECK(rb.space == "Y");
  CHECK(kb.space == "X");
}

TEST_CASE("range dimension matches the row-reduction oracle") {
  RankPolicy pol;
  for (int trial = 0; trial < 8; ++trial) {
    Matrix a = oracles::random_matrix(rng, 6, 2);
    Matrix b = oracles::random_matrix(rng, 4, 2);
    Matrix m = matmul(kern::Op::None, a, kern::Op::ConjT, b);  // rank 2
    auto rb = range_basis(map_of(m), pol);
    CHECK(rb.dim() == 2);
    CHECK(rb.dim() == oracles::rank_row_reduction(m, 1e-9));
    CHECK(orthonormality_residual(rb.q) < 1e-12);
  }
}

TEST_CASE("ambiguous rank is reported, not fatal") {
  RankPolicy pol;  // relative 1e-10
  Matrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.05e-10;  // inside the +-10% band around the cutoff
  d(2, 2) = 1e-13;
  RankReport rep;
  auto rb = range_basis(map_of(d), pol, &rep);
  CHECK(rep.ambiguous);
  CHECK(rb.dim() == rep.rank);
}

TEST_CASE("rank-nullity and range/kernel orthogonality on random maps") {
  RankPolicy pol;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 3 + trial % 5, n = 4 + (trial * 7) % 6;
    const std::size_t r = std::min({m, n, std::size_t(2 + trial % 3)});
    Matrix a = oracles::random_matrix(rng, m, r);
    Matrix b = oracles::random_matrix(rng, n, r);
    Matrix mm = matmul(kern::Op::None, a, kern::Op::ConjT, b);
    LinearMap mp = map_of(mm, "X", "Y");
    auto rb = range_basis(mp, pol);
    auto kb = kernel_basis(mp, pol);
    CHECK(rb.dim() + kb.dim() == n);
    // range_basis(M) and kernel_basis(M^H) are orthogonal complements in Y
    auto kbh = kernel_basis(adjoint_map(mp), pol);
    CHECK(rb.dim() + kbh.dim() == m);
    Matrix cross = mulH(rb.q, kbh.q);
    CHECK(cross.norm_max() < 1e-10);
  }
}

TEST_CASE("subspace_intersection on axis-aligned spans") {
  Matrix e12(4, 2);
  e12(0, 0) = 1.0;
  e12(1, 1) = 1.0;
  Matrix e23(4, 2);
  e23(1, 0) = 1.0;
  e23(2, 1) = 1.0;
  SubspaceBasis b1{e12, "X", 0.0}, b2{e23, "X", 0.0};
  auto same = subspace_intersection(b1, b1);
  CHECK(same.dim() == 2);
  auto mid = subspace_intersection(b1, b2);
  REQUIRE(mid.dim() == 1);
  CHECK(std::abs(mid.q(1, 0)) == doctest::Approx(1.0));
  SubspaceBasis other{e12, "Z", 0.0};
  CHECK_THROWS_AS(subspace_intersection(b1, other), SpaceMismatch);
}

TEST_CASE("intersection dimension matches the null-space oracle") {
  for (int trial = 0; trial < 6; ++trial) {
    auto b1 = random_subspace(8, 5, "X");
    auto b2 = random_subspace(8, 5, "X");
    auto inter = subspace_intersection(b1, b2);
    Matrix oracle = oracles::intersection_oracle(b1.q, b2.q);
    CHECK(inter.dim() == 2);  // generic: 5 + 5 - 8
    CHECK(inter.dim() == oracle.cols());
    CHECK(oracles::span_distance(inter.q, oracle) < 1e-8);
    CHECK(oracles::span_distance(oracle, inter.q) < 1e-8);
    // complement-of-sums identity: dim(U int V) = m - rank([U_perp V_perp])
    auto c1 = orthonormal_complement(b1);
    auto c2 = orthonormal_complement(b2);
    Matrix stacked(8, c1.dim() + c2.dim());
    stacked.set_block(0, 0, c1.q);
    stacked.set_block(0, c1.dim(), c2.q);
    CHECK(inter.dim() == 8 - oracles::rank_row_reduction(stacked, 1e-9));
  }
}

TEST_CASE("intersection dimension matches the oracle up to 12 ambient dims") {
  for (std::size_t ambient = 3; ambient <= 12; ++ambient) {
    std::uniform_int_distribution<std::size_t> pick(1, ambient - 1);
    const std::size_t d1 = pick(rng), d2 = pick(rng);
    auto b1 = random_subspace(ambient, d1, "X");
    auto b2 = random_subspace(ambient, d2, "X");
    auto inter = subspace_intersection(b1, b2);
    Matrix oracle = oracles::intersection_oracle(b1.q, b2.q);
    CHECK(inter.dim() == oracle.cols());
  }
}

TEST_CASE("block inverse: forced small cases") {
  const Matrix eye = Matrix::identity(3);
  LinearMap a0 = map_of(Matrix(3, 3), "H0", "H0");
  LinearMap b = map_of(eye, "H1", "H0");
  LinearMap c = map_of(eye, "H0", "H1");
  auto inv = block_inverse_antitriangular(a0, b, c);
  // [[0, I], [I, 0]]
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(inv.m(i, 3 + i) - 1.0) < 1e-12);
    CHECK(std::abs(inv.m(3 + i, i) - 1.0) < 1e-12);
    CHECK(std::abs(inv.m(i, i)) < 1e-12);
    CHECK(std::abs(inv.m(3 + i, 3 + i)) < 1e-12);
  }
  LinearMap a1 = map_of(eye, "H0", "H0");
  auto inv2 = block_inverse_antitriangular(a1, b, c);
  // [[0, I], [I, -I]]
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(inv2.m(3 + i, 3 + i) + 1.0) < 1e-12);
}

TEST_CASE("block inverse: multiplication oracle on random blocks") {
  for (int trial = 0; trial < 6; ++trial) {
    Matrix a = oracles::random_matrix(rng, 4, 4);
    Matrix b = oracles::random_matrix(rng, 4, 4);
    Matrix c = oracles::random_matrix(rng, 4, 4);
    b += 3.0 * Matrix::identity(4);  // keep well away from singular
    c += 3.0 * Matrix::identity(4);
    auto inv = block_inverse_antitriangular(map_of(a, "H0", "H0"),
                                            map_of(b, "H1", "H0"),
                                            map_of(c, "H0", "H1"));
    Matrix big(8, 8);
    big.set_block(0, 0, a);
    big.set_block(0, 4, b);
    big.set_block(4, 0, c);
    Matrix left = mul(inv.m, big);
    left -= Matrix::identity(8);
    CHECK(left.norm_fro() < 1e-10);
    Matrix right = mul(big, inv.m);
    right -= Matrix::identity(8);
    CHECK(right.norm_fro() < 1e-10);
  }
}

TEST_CASE("block inverse names the singular block") {
  const Matrix eye = Matrix::identity(2);
  Matrix sing(2, 2);
  sing(0, 0) = 1.0;  // rank 1
  try {
    block_inverse_antitriangular(map_of(Matrix(2, 2), "H0", "H0"),
                                 map_of(sing, "H1", "H0"),
                                 map_of(eye, "H0", "H1"));
    FAIL("expected SingularBlock");
  } catch (const SingularBlock& e) {
    CHECK(std::string(e.what()).find("B") != std::string::npos);
  }
  try {
    block_inverse_antitriangular(map_of(Matrix(2, 2), "H0", "H0"),
                                 map_of(eye, "H1", "H0"),
                                 map_of(sing, "H0", "H1"));
    FAIL("expected SingularBlock");
  } catch (const SingularBlock& e) {
    CHECK(std::string(e.what()).find("C") != std::string::npos);
  }
}

TEST_CASE("compose enforces space labels") {
  LinearMap f = map_of(Matrix::identity(3), "A", "B");
  LinearMap g = map_of(Matrix::identity(3), "B", "C");
  auto gf = compose(g, f);
  CHECK(gf.domain == "A");
  CHECK(gf.codomain == "C");
  CHECK_THROWS_AS(compose(f, g), SpaceMismatch);
}

TEST_CASE("maps with non-finite entries are rejected") {
  Matrix bad(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(map_of(std::move(bad)), Error);
}
