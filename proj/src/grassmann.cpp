/**
 * @file grassmann.cpp
 * @brief Hyperplane geometry: distances, two-plane rotations, tangent generators.
 */
#include "grsio/grassmann.hpp"

#include <algorithm>

namespace grsio {

namespace {

void require_same_dim(const Subspace& a, const Subspace& b) {
  if (a.n() != b.n())
    throw Error("dimension", "subspaces live in R^" + std::to_string(a.n()) + " and R^" +
                                 std::to_string(b.n()));
}

// Antipodal pairs have no distinguished rotation plane.  The cut sits just
// below the maximal distance 2 so that orthogonal normals (distance sqrt 2)
// are still handled.
constexpr double kAntipodalCut = 2.0 * (1.0 - 1e-8);

}  // namespace

Subspace::Subspace(Vec v) {
  const double r = v.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("subspace", "normal must be a nonzero finite vector");
  if (v.size() < 2) throw Error("subspace", "ambient dimension must be at least 2");
  normal = v / r;
}

bool Rotation::is_special_orthogonal(double tol) const {
  const Mat err = matrix.transpose() * matrix - Mat::Identity(n(), n());
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(matrix.determinant() - 1.0) <= tol;
}

double dist(const Subspace& sigma, const Subspace& tau) {
  require_same_dim(sigma, tau);
  return (sigma.normal - tau.normal).norm();
}

double dist_prime(const Subspace& sigma, const Subspace& tau) {
  require_same_dim(sigma, tau);
  const double c = std::clamp(sigma.normal.dot(tau.normal), -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

Mat projection(const Subspace& sigma) {
  return Mat::Identity(sigma.n(), sigma.n()) - sigma.normal * sigma.normal.transpose();
}

double dist_prime_sampled(const Subspace& sigma, const Subspace& tau, int samples,
                          std::mt19937_64& rng) {
  require_same_dim(sigma, tau);
  std::normal_distribution<double> g;
  const Mat D = projection(sigma) - projection(tau);
  double best = 0.0;
  Vec w(sigma.n());
  for (int k = 0; k < samples; ++k) {
    for (int i = 0; i < w.size(); ++i) w(i) = g(rng);
    w.normalize();
    best = std::max(best, (D * w).norm());
  }
  return best;
}

Rotation rotation_between(const Subspace& sigma, const Subspace& tau) {
  require_same_dim(sigma, tau);
  const int n = sigma.n();
  const Vec& a = sigma.normal;
  const double dd = dist(sigma, tau);
  if (dd > kAntipodalCut) throw Error("antipodal", "normals are (nearly) opposite");
  if (dd == 0.0) return Rotation{Mat::Identity(n, n)};

  // c - 1 from the chord length avoids cancellation for close normals.
  const double cm1 = -0.5 * dd * dd;
  const double c = 1.0 + cm1;
  Vec b = tau.normal - c * a;
  const double s = b.norm();
  b /= s;
  // Re-orthogonalize b against a once; s is tiny for nearby normals.
  b -= b.dot(a) * a;
  b.normalize();

  Mat O = Mat::Identity(n, n) + cm1 * (a * a.transpose() + b * b.transpose()) +
          s * (b * a.transpose() - a * b.transpose());
  return Rotation{O};
}

Rotation canonical_rotation(const Subspace& sigma) {
  return rotation_between(sigma, Subspace::horizontal(sigma.n()));
}

TangentFrame tangent_frame(const Subspace& sigma) {
  const int n = sigma.n();
  TangentFrame f{sigma, {}};
  const Vec en = unit(n, n - 1);
  if (dist(sigma, Subspace(-en)) > 1e-3) {
    const Mat Ot = canonical_rotation(sigma).matrix.transpose();
    for (int j = 0; j < n - 1; ++j) f.vectors.push_back(Ot.col(j));
    return f;
  }
  // Near -e_n the canonical rotation degenerates; Gram-Schmidt on e_1..e_d.
  for (int j = 0; j < n - 1; ++j) {
    Vec v = unit(n, j) - sigma.normal.dot(unit(n, j)) * sigma.normal;
    for (const Vec& u : f.vectors) v -= u.dot(v) * u;
    f.vectors.push_back(v.normalized());
  }
  return f;
}

Mat tangent_generator(const TangentFrame& frame, int j) {
  const int d = static_cast<int>(frame.vectors.size());
  if (j < 0 || j >= d) throw Error("index", "tangent index out of range");
  const Vec& vj = frame.vectors[j];
  const Vec& v = frame.base.normal;
  return v * vj.transpose() - vj * v.transpose();
}

Vec projection_derivative(const TangentFrame& frame, int j, const Vec& xi) {
  const Mat X = tangent_generator(frame, j);
  const Mat P = projection(frame.base);
  return (X * P - P * X) * xi;
}

Subspace rotate_along(const Subspace& sigma, const Vec& w, double t) {
  return Subspace(std::cos(t) * sigma.normal - std::sin(t) * w);
}

double varpi(double beta) {
  if (std::abs(beta) < 1e-4) return -std::tan(0.5 * beta);
  return (std::cos(beta) - 1.0) / std::sin(beta);
}

Mat rotation_derivative(const Subspace& sigma, const Subspace& rho, const Vec& w) {
  require_same_dim(sigma, rho);
  const Vec& vs = sigma.normal;
  const Vec& v = rho.normal;
  const double c = std::clamp(vs.dot(v), -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (s < 1e-12) throw Error("degenerate", "v_sigma = ±v_rho, the rotation plane is undefined");
  if (std::abs(w.dot(vs)) > 1e-9 * std::max(1.0, w.norm()))
    throw Error("tangent", "direction must lie in sigma");
  const double theta = std::acos(c);

  const Vec u = (c * v - vs) / s;      // unit, in span{v, v_sigma}, orthogonal to v
  const Vec U = c * u + s * v;         // unit, in sigma ∩ span{v, v_sigma}
  const double pw = varpi(theta);

  const double a = w.dot(U);
  const Vec wp = w - a * U;            // component in sigma ∩ rho
  Mat dR = a * (vs * u.transpose() - U * v.transpose());
  dR += pw * wp * u.transpose() - wp * v.transpose() + (pw * u + v) * wp.transpose();
  return dR;
}

Vec shift_of(const Subspace& sigma, double R) {
  const int n = sigma.n();
  const Vec en = unit(n, n - 1);
  const Vec full = R * (sigma.normal.dot(en) * en - sigma.normal);
  return full.head(n - 1);
}

Subspace subspace_from_shift(const Vec& N, double R) {
  const int d = static_cast<int>(N.size());
  const double q = N.squaredNorm() / (R * R);
  if (q >= 1.0) throw Error("shift", "|N| must be smaller than R");
  Vec v(d + 1);
  v.head(d) = -N / R;
  v(d) = std::sqrt(1.0 - q);
  return Subspace(v);
}

Subspace random_near_horizontal(int n, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Pick a tangent direction at e_n and an angle whose chord is below radius.
  Vec t = Vec::Zero(n);
  for (int i = 0; i < n - 1; ++i) t(i) = g(rng);
  t.normalize();
  const double chord = radius * u01(rng);
  const double ang = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
  return Subspace(std::cos(ang) * unit(n, n - 1) + std::sin(ang) * t);
}

double canonical_lipschitz(int n, double radius, int pairs, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Subspace a = random_near_horizontal(n, radius, rng);
    const Subspace b = random_near_horizontal(n, radius, rng);
    const double dd = dist(a, b);
    if (dd < 1e-12) continue;
    worst = std::max(worst,
                     op_norm(canonical_rotation(a).matrix - canonical_rotation(b).matrix) / dd);
  }
  return worst;
}

}  // namespace grsio
