#include <doctest.h>

#include <algorithm>
#include <random>

#include "grsio/experiments.hpp"
#include "grsio/operators.hpp"

using namespace grsio;

namespace {

GridFunction random_values(const TorusSpec& spec, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(spec.size());
  for (cplx& x : v) x = cplx(g(rng), g(rng));
  return GridFunction::from_values(spec, std::move(v));
}

}  // namespace

TEST_CASE("torus spec validates the Nyquist margin") {
  CHECK_NOTHROW(TorusSpec(2, 16.0, 128));
  CHECK_THROWS_AS(TorusSpec(2, 32.0, 128), Error);
  CHECK_THROWS_AS(TorusSpec(5, 4.0, 32), Error);
}

TEST_CASE("FFT matches direct summation and Parseval holds") {
  const TorusSpec spec(2, 2.0, 16);
  const GridFunction f = random_values(spec, 1);
  const std::vector<cplx> a = forward_dft(spec, f.values());
  const std::vector<cplx> b = forward_dft_naive(spec, f.values());
  double e = 0.0;
  for (size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  CHECK(e < 1e-12);
  CHECK(f.l2_norm() == doctest::Approx(f.spectral_l2_norm()).epsilon(1e-12));
  const std::vector<cplx> back = inverse_dft(spec, a);
  for (size_t i = 0; i < back.size(); ++i) CHECK(std::abs(back[i] - f.values()[i]) < 1e-12);
}

TEST_CASE("single mode has one unit coefficient") {
  const TorusSpec spec(3, 2.0, 16);
  const GridFunction f = GridFunction::single_mode(spec, {1, -2, 3});
  const size_t k = spec.flat_index({1, -2, 3});
  CHECK(std::abs(f.spectrum()[k] - cplx(1.0)) < 1e-12);
  const Vec xi = spec.frequency(k);
  CHECK(xi(1) == doctest::Approx(-1.0));
}

TEST_CASE("annulus projection keeps modes on the plateau and kills far ones") {
  const TorusSpec spec(2, 16.0, 128);
  // At k = 0 the cutoff is zeta(|xi|): |xi| = 20/16 is on its plateau, 40/16 is outside.
  const GridFunction in = GridFunction::single_mode(spec, {0, 20});
  const GridFunction out = GridFunction::single_mode(spec, {40, 0});
  CHECK(std::abs(project_annulus(in, 0.0).values()[7] - in.values()[7]) < 1e-12);
  CHECK(project_annulus(out, 0.0).sup_abs() < 1e-12);
}

TEST_CASE("constant symbol is the identity and parallel equals serial") {
  const TorusSpec spec(2, 8.0, 64);
  const GridFunction f = random_values(spec, 2);
  const Subspace s = Subspace::horizontal(2);
  const GridFunction g = directional_apply(f, constant_one(1), s, Rotation{Mat::Identity(1, 1)});
  for (size_t i = 0; i < spec.size(); ++i) CHECK(std::abs(g.values()[i] - f.values()[i]) < 1e-12);

  const std::vector<Subspace> Sigma = direction_set(2, 16, 16, 0.2, "equispaced", 1);
  const std::vector<Rotation> Qs = so_net(1, 1);
  const MultiplierFamily m = hilbert_smoothed(1, 1e-4);
  CHECK(maximal_directional(f, m, Sigma, Qs) == maximal_directional_serial(f, m, Sigma, Qs));
  const std::vector<double> hs{0.5, 1.0, 2.0};
  CHECK(maximal_truncated(f, m, Sigma, Qs, hs) == maximal_truncated_serial(f, m, Sigma, Qs, hs));
}

TEST_CASE("maximal operator dominates each slice and equals it for one direction") {
  const TorusSpec spec(2, 8.0, 64);
  const GridFunction f = random_values(spec, 3);
  const MultiplierFamily m = hilbert_smoothed(1, 1e-4);
  const std::vector<Subspace> Sigma = direction_set(2, 4, 4, 0.2, "equispaced", 1);
  const std::vector<Rotation> Q = so_net(1, 1);
  const std::vector<double> M = maximal_directional(f, m, Sigma, Q);
  for (const Subspace& s : Sigma) {
    const std::vector<double> one = directional_abs(f, m, s, Q[0]);
    for (size_t i = 0; i < M.size(); ++i) CHECK(M[i] >= one[i]);
  }
  const std::vector<Subspace> single{Sigma[2]};
  CHECK(maximal_directional(f, m, single, Q) == directional_abs(f, m, Sigma[2], Q[0]));
}

TEST_CASE("nested direction sets") {
  const std::vector<Subspace> a = direction_set(2, 8, 64, 0.1, "equispaced", 1);
  const std::vector<Subspace> b = direction_set(2, 32, 64, 0.1, "equispaced", 1);
  for (size_t i = 0; i < a.size(); ++i) CHECK((a[i].normal - b[i].normal).norm() == 0.0);
  for (const Subspace& s : b) CHECK((s.normal - unit(2, 1)).norm() <= 2.0 * std::sin(0.05) + 1e-12);
  const std::vector<Subspace> c = direction_set(3, 8, 32, 0.1, "equispaced", 1);
  const std::vector<Subspace> e = direction_set(3, 32, 32, 0.1, "equispaced", 1);
  for (size_t i = 0; i < c.size(); ++i) CHECK((c[i].normal - e[i].normal).norm() == 0.0);
}

TEST_CASE("weak L2 quasinorm against the sorted-level formula") {
  // For |g| sorted as a_1 >= a_2 >= ..., the sup over lambda is max_k a_k sqrt(k v).
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> g(200);
  for (double& x : g) x = u(rng);
  std::vector<double> s = g;
  std::sort(s.rbegin(), s.rend());
  const double v = 0.25;
  double expect = 0.0;
  for (size_t k = 0; k < s.size(); ++k) expect = std::max(expect, s[k] * std::sqrt((k + 1) * v));
  CHECK(weak_l2_quasinorm(g, v) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(weak_l2_quasinorm(std::vector<double>(10, 0.0), 1.0) == 0.0);
}

TEST_CASE("Carleson-Sjolin with the constant symbol returns |f|") {
  const TorusSpec spec(1, 16.0, 128);
  const GridFunction f = random_values(spec, 5);
  const MultiplierFamily one = constant_one(1);
  std::vector<Vec> Ns;
  for (double t : {-1.0, 0.0, 0.5}) Ns.push_back(Vec::Constant(1, t));
  const std::vector<double> a = carleson_sjolin(f, one, Ns);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(std::abs(f.values()[i])));
  CHECK(a == carleson_sjolin_serial(f, one, Ns));
}

TEST_CASE("Hardy-Littlewood maximal function of a constant") {
  const TorusSpec spec(2, 4.0, 32);
  const std::vector<double> g(spec.size(), 2.5);
  for (double x : hl_maximal(spec, g)) CHECK(x == doctest::Approx(2.5));
}

TEST_CASE("subspace average: constants are fixed and single modes match the closed form") {
  const TorusSpec spec(2, 16.0, 128);
  std::mt19937_64 rng(6);
  const Subspace s = random_near_horizontal(2, 0.1, rng);
  const GridFunction mode = GridFunction::single_mode(spec, {4, -7});
  const Vec xi = spec.frequency(spec.flat_index({4, -7}));
  for (double h : {0.5, 0.125}) {
    const GridFunction a = subspace_average(mode, s, h);
    // gamma^(h |P xi|) written directly from the projection.
    const double mult = gamma_hat(h * (projection(s) * xi).norm());
    for (size_t j = 0; j < spec.size(); j += 97)
      CHECK(std::abs(a.values()[j] - mult * mode.values()[j]) < 1e-12);
    CHECK(single_mode_average_error(xi, s, h) == doctest::Approx(1.0 - mult).epsilon(1e-12));
  }
}

TEST_CASE("random band-limited input is unit norm with spectrum in the cone annulus") {
  const TorusSpec spec(2, 16.0, 128);
  const ConeProfile cone{std::pow(3.0, -5)};
  std::mt19937_64 rng(7);
  const GridFunction f = random_band_limited(spec, cone, true, rng);
  CHECK(f.l2_norm() == doctest::Approx(1.0));
  for (size_t k = 0; k < spec.size(); ++k)
    if (std::abs(f.spectrum()[k]) > 1e-12) {
      const Vec xi = spec.frequency(k);
      CHECK(xi.norm() >= 1.0);
      CHECK(xi.norm() <= 1.5);
      CHECK(cone.in_gamma1(xi));
    }
}

TEST_CASE("log fit recovers an exact line") {
  const LinearFit f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}
