#include <doctest.h>

#include <random>

#include "grsio/tiling.hpp"

using namespace grsio;

TEST_CASE("standard triadic cubes: sides, parents, children, centres") {
  const GridPtr G = TriadicGrid::standard(2);
  Vec y(2);
  y << 0.3, 0.61;
  const TriadicCube Q = TriadicCube::containing(G, -1, y);
  CHECK(Q.side() == doctest::Approx(1.0 / 3.0));
  CHECK(Q.q == std::vector<int64_t>{0, 1});
  CHECK(Q.contains(y));
  CHECK(Q.parent().side() == doctest::Approx(1.0));
  CHECK(Q.parent().contains(Q));
  const TriadicCube c = Q.center_child(2);
  CHECK(c.side() == doctest::Approx(1.0 / 27.0));
  CHECK((c.center() - Q.center()).norm() < 1e-14);
  CHECK(Q.digits_of(c) == std::vector<int64_t>{4, 4});
  CHECK(children(Q, 1).size() == 9);
  CHECK(Q.ancestor(2) == Q.parent().parent());
}

TEST_CASE("half-open cubes and disjointness") {
  const GridPtr G = TriadicGrid::standard(1);
  const TriadicCube a = TriadicCube::containing(G, 0, Vec::Constant(1, 0.5));
  const TriadicCube b = TriadicCube::containing(G, 0, Vec::Constant(1, 1.0));
  CHECK(a.contains(Vec::Constant(1, 0.0)));
  CHECK_FALSE(a.contains(Vec::Constant(1, 1.0)));
  CHECK(a.disjoint(b));
  CHECK_FALSE(a.disjoint(a.center_child(1)));
}

TEST_CASE("peripheral children: histogram count matches brute force") {
  for (int d = 1; d <= 2; ++d)
    for (int kappa = 3; kappa <= 5; ++kappa)
      CHECK(peripheral_count(d, kappa) == static_cast<double>(peripheral_count_bruteforce(d, kappa)));
}

TEST_CASE("peripheral rank and unrank are inverse") {
  const int d = 2, kappa = 4;
  const int64_t count = peripheral_count_bruteforce(d, kappa);
  for (int64_t tau = 0; tau < count; tau += 37) {
    const std::vector<int64_t> r = peripheral_unrank(d, kappa, tau);
    CHECK(is_peripheral_digits(r, kappa));
    CHECK(peripheral_rank(r, kappa) == tau);
  }
}

TEST_CASE("shifted family fits any cube within 1 + delta") {
  const ShiftedGridFamily fam(1, 9);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec lower = Vec::Constant(1, 4.0 * u(rng) - 2.0);
    const double side = std::pow(3.0, -5.0 * u(rng));
    const ShiftedGridFamily::Fit f = fam.fit(lower, side);
    CHECK(f.contains_input);
    CHECK(f.inflation <= 1.0 + fam.delta() + 1e-12);
    CHECK(f.cube.side() >= side * (1.0 - 1e-12));
  }
}

TEST_CASE("shifted grids nest across generations") {
  const ShiftedGridFamily fam(2, 10);  // kappa >= 9 + log_3 2
  const GridPtr G = fam.grid(1, {5, 17});
  Vec y(2);
  y << 0.123, -0.456;
  for (int g = -6; g < 2; ++g) {
    const TriadicCube Q = TriadicCube::containing(G, g, y);
    CHECK(Q.parent().contains(Q));
    CHECK(Q.parent() == TriadicCube::containing(G, g + 1, y));
  }
}

TEST_CASE("scale set and chart") {
  const double alpha = 1.0 / 729.0;
  CHECK(in_scale_set(1.0, alpha));
  CHECK(in_scale_set(9.0, alpha));
  CHECK_FALSE(in_scale_set(1.0 / 3.0, alpha));
  CHECK_FALSE(in_scale_set(2.0, alpha));
  Vec y(2);
  y << 0.1, -0.05;
  const Vec v = chart_inverse(y);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK((chart(v) - y).norm() < 1e-15);
}

TEST_CASE("oriented boxes: separating axis test") {
  OrientedBox a{Vec::Zero(2), Mat::Identity(2, 2), Vec::Constant(2, 1.0)};
  Mat rot(2, 2);
  const double t = kPi / 4;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  OrientedBox b{Vec::Constant(2, 2.3), rot, Vec::Constant(2, 1.0)};
  // Distance from the corner (1,1) to b's centre along the diagonal is 1.3*sqrt2 = 1.84 > 1.
  CHECK_FALSE(intersects(a, b));
  b.center = Vec::Constant(2, 1.6);  // 0.6 sqrt2 = 0.85 < 1
  CHECK(intersects(a, b));
  CHECK_FALSE(a.dilate(3.0).contains(b));  // corner (1.6, 1.6 + sqrt2) pokes out
  CHECK(a.dilate(3.1).contains(b));
  CHECK(a.volume() == doctest::Approx(4.0));
}

TEST_CASE("plates contain their anchor and nest in their parent") {
  std::mt19937_64 rng(2);
  const Subspace s = random_near_horizontal(3, 0.1, rng);
  Vec z(3);
  z << 3.7, -1.2, 0.4;
  const Plate R = Plate::containing(s.normal, 2, z);
  CHECK(R.contains(z));
  CHECK(R.measure() == doctest::Approx(81.0));
  CHECK(R.parent().contains(z));
  CHECK(R.box().volume() == doctest::Approx(81.0));
  CHECK(plates_intersect(R, R.parent()));
}

TEST_CASE("tiles from cubes: plate scale follows the cube side") {
  const GridPtr G = TriadicGrid::standard(1);
  const TriadicCube Q = TriadicCube::containing(G, -3, Vec::Constant(1, 0.05));
  const Vec z = Vec::Constant(2, 5.0);
  const Tile t = tile_from_cube(Q, 9, z);
  CHECK(t.R.contains(z));
  CHECK(t.scl() == doctest::Approx(27.0));
  CHECK(in_frequency_support(t, t.v() * 1.2));
  // The tile direction points at the centre of Q in the chart.
  CHECK((chart(t.v()) - Q.center()).norm() < 1e-15);
}

TEST_CASE("directional cells partition the peripheral region") {
  const GridPtr G = TriadicGrid::standard(1);
  const TriadicCube Q = TriadicCube::containing(G, -2, Vec::Constant(1, 0.05));
  const Tile t = tile_from_cube(Q, 4, Vec::Zero(2));
  const std::vector<int64_t> r = peripheral_unrank(1, 4, 3);
  const Vec y = Q.child(4, r).center();
  const Vec dir = chart_inverse(y);
  const int64_t tau = directional_cell_of(t, dir);
  CHECK(tau == 3);
  CHECK(in_directional_cell(t, dir, tau));
  CHECK_FALSE(in_directional_cell(t, dir, tau + 1));
  CHECK(directional_cell_of(t, chart_inverse(Q.center())) == -1);
}
