#include <doctest.h>

#include <random>

#include "grsio/multipliers.hpp"
#include "grsio/profiles.hpp"

using namespace grsio;

TEST_CASE("smoothed sign is odd and exact outside the transition") {
  const double eps = 1e-3;
  CHECK(smoothed_sign(2e-3, eps) == 1.0);
  CHECK(smoothed_sign(-eps, eps) == -1.0);
  CHECK(smoothed_sign(0.0, eps) == doctest::Approx(0.0));
  for (double x : {1e-5, 3e-4, 9e-4}) {
    CHECK(smoothed_sign(-x, eps) == doctest::Approx(-smoothed_sign(x, eps)).epsilon(1e-14));
    CHECK(std::abs(smoothed_sign(x, eps)) < 1.0);
  }
}

TEST_CASE("catalogue symbols at known points") {
  const Subspace s = Subspace::horizontal(3);
  Vec eta(2);
  eta << 0.5, -2.0;
  CHECK(constant_one(2)(s, eta) == cplx(1.0));
  CHECK(builtin("hilbert_smoothed(0.0001)", 2)(s, eta) == cplx(0.0, -1.0));
  CHECK(std::abs(riesz_component(2, 1)(s, eta) - cplx(-2.0 / std::sqrt(4.25))) < 1e-15);
  const MultiplierFamily bump = compact_bump(2, 1.0);
  Vec small(2), big(2);
  small << 0.3, 0.0;
  big << 0.8, 0.7;
  CHECK(bump(s, small) == cplx(1.0));
  CHECK(bump(s, big) == cplx(0.0));
}

TEST_CASE("Carleson-Sjolin shift evaluates the base at eta + N") {
  const Subspace s = Subspace::horizontal(2);
  const MultiplierFamily m0 = compact_bump(1, 1.0);
  Vec N(1), eta(1);
  N << 0.75;
  eta << -0.6;
  CHECK(cs_shift(m0, N)(s, eta) == m0(s, eta + N));
  CHECK(builtin("cs_shift(0.75)", 1)(s, eta) == m0(s, eta + N));
}

TEST_CASE("unknown labels are rejected") {
  CHECK_THROWS_AS(builtin("no_such_family", 1), Error);
  CHECK_THROWS_AS(riesz_component(2, 2), Error);
}

TEST_CASE("Mihlin estimates of bounded symbols") {
  const Subspace s = Subspace::horizontal(3);
  CHECK(mihlin_norm_estimate(constant_one(2), s, 2) == doctest::Approx(1.0));
  CHECK(mihlin_norm_estimate(hilbert_smoothed(2, 1e-6), s, 0) == doctest::Approx(1.0));
  // eta_k / |eta| is homogeneous of degree 0, so every scaled derivative is O(1).
  const double r = mihlin_norm_estimate(riesz_component(2, 0), s, 2);
  CHECK(r >= 1.0 - 1e-9);
  CHECK(r < 5.0);
  // A sigma-independent family has zero difference norm.
  std::mt19937_64 rng(1);
  const Subspace t = random_near_horizontal(3, 0.1, rng);
  CHECK(mihlin_difference_estimate(constant_one(2), s, t, 2, MihlinSamples{}) == 0.0);
}

TEST_CASE("profiles: plateaus and supports") {
  CHECK(zeta(1.25) == 1.0);
  CHECK(zeta(1.0) == 0.0);
  CHECK(zeta(1.5) == 0.0);
  CHECK(plateau(1.2) == 1.0);
  CHECK(plateau(0.5) == 0.0);
  CHECK(gamma_hat(0.0) == doctest::Approx(1.0));
  CHECK(gamma_hat(1.0) == 0.0);
  CHECK(psi_tilde(0.88) == 0.0);
  CHECK(psi_tilde(3.12) == 0.0);
  // Triadic dilates of psi_tilde sum to one on (0, inf).
  for (double r : {0.013, 0.2, 1.0, 2.5, 47.0}) {
    double s = 0.0;
    for (int k = -12; k <= 12; ++k) s += psi_tilde(std::pow(3.0, k) * r);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("cone profile apertures") {
  const ConeProfile c{1.0 / 729.0};
  CHECK(c.inner() == doctest::Approx(81.0 / 729.0));
  CHECK(c.outer() == doctest::Approx(243.0 / 729.0));
  Vec pole = unit(3, 2) * 1.3;
  CHECK(c(pole) == doctest::Approx(1.0));
  Vec side(3);
  side << 1.0, 0.0, 0.1;
  CHECK(c(side) == 0.0);
}
