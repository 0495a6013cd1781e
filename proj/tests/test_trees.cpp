#include <doctest.h>

#include <random>

#include "grsio/harness.hpp"
#include "grsio/trees.hpp"

using namespace grsio;

namespace {

Indices iota(size_t n) {
  Indices idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  return idx;
}

CoefficientTable random_table(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoefficientTable c;
  for (size_t i = 0; i < n; ++i) {
    c.F.push_back(u(rng));
    c.A.push_back(u(rng));
  }
  return c;
}

}  // namespace

TEST_CASE("decay bump has unit mass") {
  // In R^2, the integral of (1 + r^2)^{-M/2} is 2 pi / (M - 2), so chi_M(0) = (M - 2) / (2 pi).
  for (int M : {6, 20, 40}) CHECK(chi(Vec::Zero(2), M) == doctest::Approx((M - 2) / (2 * kPi)));
  Vec x(2);
  x << 3.0, 4.0;
  CHECK(chi(x, 20) == doctest::Approx(chi(Vec::Zero(2), 20) * std::pow(26.0, -10.0)));
}

TEST_CASE("generated lacunary trees are lacunary trees") {
  const Vec xi = Vec::Constant(1, 0.0432);
  const Vec z = Vec::Constant(2, 3.0);
  const TileSet tiles = lacunary_tree_tiles(2, 9, xi, -2, 4, z);
  REQUIRE(!tiles.empty());
  // The deepest tile carries the largest plate.
  Tree T{iota(tiles.size()), TreeTop{xi, tiles.back().R}, TreeKind::mixed};
  CHECK(is_tree(tiles, T));
  CHECK(classify(tiles, T) == TreeKind::lacunary);
  for (const Tile& t : tiles) {
    CHECK(tile_fits_top(t, T.top));
    CHECK_FALSE(in_center(t, xi));
  }
}

TEST_CASE("a top inside every centre gives an overlapping tree") {
  const GridPtr G = TriadicGrid::standard(1);
  const TriadicCube Q = TriadicCube::containing(G, -2, Vec::Constant(1, 0.05));
  const Vec xi = Q.center();
  const Vec z = Vec::Constant(2, 1.0);
  TileSet tiles{tile_from_cube(Q, 9, z)};
  Tree T{{0}, TreeTop{xi, tiles[0].R}, TreeKind::mixed};
  CHECK(classify(tiles, T) == TreeKind::overlapping);
  // Digit j refers to generation -j; xi is the centre of its generation -2 cube.
  CHECK(signature(xi, G, 3, 9).digits[1] == 0);
}

TEST_CASE("exact size enumerator agrees with the exhaustive oracle") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(seed);
    const TileSet tiles = scenario_tiles(2, 9, 10, rng);
    const CoefficientTable c = random_table(tiles.size(), seed);
    const Indices idx = iota(tiles.size());
    CHECK(size_bruteforce(tiles, idx, c) == size_of(tiles, idx, c).value);
  }
}

TEST_CASE("size decomposition halves size and yields strongly disjoint trees") {
  std::mt19937_64 rng(11);
  const TileSet tiles = scenario_tiles(2, 9, 24, rng);
  const CoefficientTable c = random_table(tiles.size(), 11);
  const Indices idx = iota(tiles.size());
  const double K = 3.1;
  const Decomposition D = size_decompose(tiles, idx, c, K);
  CHECK(is_partition(idx, D));
  CHECK(size_of(tiles, D.rest, c).value <= size_of(tiles, idx, c).value / std::sqrt(2.0));
  CHECK(verify_strongly_disjoint(tiles, D.selected, K).ok);
  // A tree whose top sits in a centre is not lacunary.
  std::vector<Tree> family = D.selected;
  family.push_back(Tree{{0}, TreeTop{tiles[0].Q.center(), tiles[0].R}, TreeKind::mixed});
  const DisjointnessReport bad = verify_strongly_disjoint(tiles, family, K);
  CHECK_FALSE(bad.ok);
  CHECK(bad.failure == "lacunary");
}

TEST_CASE("density decomposition halves density") {
  std::mt19937_64 rng(12);
  const TileSet tiles = scenario_tiles(2, 9, 20, rng);
  const DirectionField field = scenario_field(tiles, scenario_tau(1, 9), rng);
  const Indices idx = iota(tiles.size());
  const Decomposition D = density_decompose(tiles, idx, field, 20);
  CHECK(is_partition(idx, D));
  CHECK(dense(tiles, D.rest, field, D.rest, 20) <= 0.5 * dense(tiles, idx, field, 20));
}

TEST_CASE("a field outside the directional support carries no mass") {
  const TorusSpec spec(2, 16.0, 128);
  const GridPtr G = TriadicGrid::standard(1);
  // Q = [4/9, 5/9) does not contain chart(e_2) = 0.
  const TriadicCube Q = TriadicCube::containing(G, -2, Vec::Constant(1, 0.5));
  const Tile t = tile_from_cube(Q, 9, Vec::Constant(2, 8.0));
  const DirectionField off = DirectionField::constant(spec, Subspace::horizontal(2), true);
  CHECK(tile_mass(t, off, 20) == 0.0);
  CHECK(off.measure_E() == doctest::Approx(256.0));
}

TEST_CASE("model form is the coefficient inner product") {
  const CoefficientTable c = random_table(5, 3);
  double s = 0.0;
  for (int i : {0, 2, 4}) s += c.F[i] * c.A[i];
  CHECK(model_form({0, 2, 4}, c) == doctest::Approx(s));
}

TEST_CASE("decomposition of an empty set") {
  const TileSet none;
  const CoefficientTable c;
  const Decomposition D = size_decompose(none, {}, c, 3.0);
  CHECK(D.trees.empty());
  CHECK(D.rest.empty());
  CHECK(verify_strongly_disjoint(none, {}, 3.0).ok);
}
