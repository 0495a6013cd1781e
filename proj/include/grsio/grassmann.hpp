/**
 * @file grassmann.hpp
 * @brief Oriented hyperplanes of R^n stored by their unit normal, the rotation
 *        family between them, and the derivative formulas for that family.
 */
#pragma once

#include <random>
#include <vector>

#include "grsio/common.hpp"

namespace grsio {

/// Oriented codimension-1 subspace, identified with its unit normal.
struct Subspace {
  Vec normal;

  Subspace() = default;
  explicit Subspace(Vec v);  // normalizes, rejects the zero vector
  int n() const { return static_cast<int>(normal.size()); }
  int d() const { return n() - 1; }

  /// e_n^perp, i.e. R^d sitting inside R^n.
  static Subspace horizontal(int n) { return Subspace(unit(n, n - 1)); }
};

struct Rotation {
  Mat matrix;
  int n() const { return static_cast<int>(matrix.rows()); }
  bool is_special_orthogonal(double tol = 1e-10) const;
};

/// Orthonormal basis v_1..v_d of sigma.
struct TangentFrame {
  Subspace base;
  std::vector<Vec> vectors;
};

double dist(const Subspace& sigma, const Subspace& tau);

/// |sin angle(v_sigma, v_tau)|, the sup over unit omega of |P_sigma w - P_tau w|.
double dist_prime(const Subspace& sigma, const Subspace& tau);

/// Monte-Carlo lower estimate of the same sup over a random sphere sample.
double dist_prime_sampled(const Subspace& sigma, const Subspace& tau, int samples,
                          std::mt19937_64& rng);

/// Orthogonal projection onto sigma.
Mat projection(const Subspace& sigma);

/// Two-plane rotation taking v_sigma to v_tau, identity on sigma ∩ tau.
Rotation rotation_between(const Subspace& sigma, const Subspace& tau);

/// O_sigma: takes sigma to e_n^perp and v_sigma to e_n.
Rotation canonical_rotation(const Subspace& sigma);

TangentFrame tangent_frame(const Subspace& sigma);

/// Skew generator X with X v_j = v_sigma, X v_sigma = -v_j, zero elsewhere.
Mat tangent_generator(const TangentFrame& frame, int j);

/// d/dt P_{sigma(t)} xi at t = 0 along the curve generated by X_j.  This is
/// the commutator [X, P_sigma] xi, which reduces to X xi when xi lies in sigma.
Vec projection_derivative(const TangentFrame& frame, int j, const Vec& xi);

/// Subspace obtained from sigma by turning v_j towards v_sigma by angle t:
/// normal cos(t) v_sigma - sin(t) v_j.
Subspace rotate_along(const Subspace& sigma, const Vec& w, double t);

/// (cos b - 1) / sin b with a cancellation-free branch near 0.
double varpi(double beta);

/// Directional derivative in direction w ∈ sigma of sigma ↦ rotation_between(rho, sigma).
Mat rotation_derivative(const Subspace& sigma, const Subspace& rho, const Vec& w);

/// N(sigma) = R(<v, e_n> e_n - v), the horizontal shift attached to sigma.
Vec shift_of(const Subspace& sigma, double R);

/// Inverse of shift_of on |N| < R.
Subspace subspace_from_shift(const Vec& N, double R);

/// Random subspace with |v - e_n| < radius (uniform direction, uniform radius fraction).
Subspace random_near_horizontal(int n, double radius, std::mt19937_64& rng);

/// Measured sup of |O_sigma - O_tau| / dist over random pairs near e_n^perp.
double canonical_lipschitz(int n, double radius, int pairs, std::mt19937_64& rng);

}  // namespace grsio
