#include <doctest.h>

#include <random>

#include "grsio/operators.hpp"
#include "grsio/wavepackets.hpp"

using namespace grsio;

namespace {

Tile pole_tile(double y, int gen, const Vec& z) {
  const GridPtr G = TriadicGrid::standard(1);
  return tile_from_cube(TriadicCube::containing(G, gen, Vec::Constant(1, y)), 9, z);
}

}  // namespace

TEST_CASE("nets cover the cap and their partition squares to one") {
  const ConeProfile cone{1.0 / 729.0};
  std::mt19937_64 rng(1);
  for (int n : {2, 3})
    for (double s : {1.0, 9.0}) {
      const CapNet net = build_net(n, s, 1, cone);
      const NetReport r = check_net(net, 500, rng);
      CHECK(r.covers);
      CHECK(r.separated);
      for (int k = 0; k < 200; ++k) {
        const Vec u = random_cap_direction(n, cone.outer(), rng);
        CHECK(partition_sum_squares(net, u) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
}

TEST_CASE("a net coarser than the cap is a single point with theta = 1") {
  const ConeProfile cone{1.0 / 729.0};
  const CapNet net = build_net(2, 1.0, 0, cone);
  REQUIRE(net.singleton);
  std::mt19937_64 rng(2);
  CHECK(partition_values(net, random_cap_direction(2, cone.outer(), rng)) == std::vector<double>{1.0});
  CHECK_THROWS_AS(build_net(2, 2.0, 1, cone), Error);
}

TEST_CASE("frame identity on a small lattice") {
  const ConeProfile cone{1.0 / 729.0};
  const TorusSpec spec(2, 16.0, 128);
  std::mt19937_64 rng(3);
  const GridFunction g = random_band_limited(spec, cone, true, rng);
  const FrameReport r = frame_verify(build_net(2, 3.0, 1, cone), g);
  CHECK(r.rel_error <= 1e-6);
  CHECK(r.terms > 1);
}

TEST_CASE("canonical packets are unit vectors") {
  const Tile t = pole_tile(0.05, -2, Vec::Constant(2, 4.0));
  const CanonicalPacket p = canonical_packet(t);
  CHECK(std::abs(packet_inner(p, p) - 1.0) <= 0.05);
  // f = phi_t gives F(t) = ||phi_t||^2.
  const PacketSum f = make_packet_sum({p}, {cplx(1.0)});
  CHECK(f.norm2 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f_coefficients(f, {t}).front() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("packets with disjoint spectra are orthogonal") {
  const Tile a = pole_tile(0.05, -2, Vec::Constant(2, 4.0));
  const Tile b = pole_tile(0.25, -2, Vec::Constant(2, 4.0));
  const PacketSum f = make_packet_sum({canonical_packet(a)}, {cplx(1.0)});
  CHECK(f_coefficients(f, {b}).front() <= 1e-10);
}

TEST_CASE("packet spectrum stays inside omega_t") {
  const Tile t = pole_tile(0.05, -3, Vec::Constant(2, 2.0));
  std::mt19937_64 rng(4);
  const PacketReport r = build_packets_report(t, hilbert_smoothed(1, 1e-4), 500, rng);
  CHECK(r.spectral_leak == 0.0);
  CHECK(r.dual_leak == 0.0);
  CHECK(std::isfinite(r.diff_ratio));
}

TEST_CASE("a coefficients vanish when the field avoids alpha_t") {
  const TorusSpec spec(2, 16.0, 128);
  const Tile t = pole_tile(0.5, -2, Vec::Constant(2, 8.0));
  const DirectionField off = DirectionField::constant(spec, Subspace::horizontal(2), true);
  const std::vector<double> A = a_coefficients(off, {t}, hilbert_smoothed(1, 1e-4), 0);
  CHECK(A.front() == 0.0);
}
