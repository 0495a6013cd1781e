#include <doctest.h>

#include <cmath>
#include <random>

#include "grsio/grassmann.hpp"

using namespace grsio;

namespace {

Subspace line_at(double theta) {
  Vec v(2);
  v << -std::sin(theta), std::cos(theta);
  return Subspace(v);
}

// Plane rotation taking unit a to unit b by the angle between them, written
// out with the two-vector Rodrigues formula.
Mat rodrigues(const Vec& a, const Vec& b) {
  const int n = static_cast<int>(a.size());
  const double c = a.dot(b);
  Vec w = b - c * a;
  const double s = w.norm();
  if (s == 0.0) return Mat::Identity(n, n);
  w /= s;
  return Mat::Identity(n, n) + s * (w * a.transpose() - a * w.transpose()) +
         (c - 1.0) * (a * a.transpose() + w * w.transpose());
}

}  // namespace

TEST_CASE("subspace normalizes and rejects zero") {
  Vec v(3);
  v << 0.0, 3.0, 4.0;
  CHECK(Subspace(v).normal.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Subspace(Vec::Zero(3)), Error);
}

TEST_CASE("n = 2: rotation between lines is the planar rotation by the angle difference") {
  for (double a : {-0.3, 0.0, 0.1, 0.7}) {
    for (double b : {-0.2, 0.05, 0.4}) {
      const Mat O = rotation_between(line_at(a), line_at(b)).matrix;
      const double t = b - a;
      Mat expect(2, 2);
      expect << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      CHECK((O - expect).norm() < 1e-13);
      CHECK(dist(line_at(a), line_at(b)) == doctest::Approx(2.0 * std::abs(std::sin(t / 2))));
      CHECK(dist_prime(line_at(a), line_at(b)) == doctest::Approx(std::abs(std::sin(t))));
    }
  }
}

TEST_CASE("rotation_between agrees with the Rodrigues plane rotation") {
  std::mt19937_64 rng(3);
  for (int n = 3; n <= 4; ++n)
    for (int k = 0; k < 50; ++k) {
      const Subspace s = random_near_horizontal(n, 0.5, rng);
      const Subspace t = random_near_horizontal(n, 0.5, rng);
      const Mat O = rotation_between(s, t).matrix;
      CHECK((O - rodrigues(s.normal, t.normal)).norm() < 1e-12);
      CHECK(rotation_between(s, t).is_special_orthogonal());
    }
}

TEST_CASE("antipodal normals have no rotation") {
  CHECK_THROWS_AS(rotation_between(Subspace::horizontal(3), Subspace(-unit(3, 2))), Error);
}

TEST_CASE("projection is the orthogonal projector onto sigma") {
  std::mt19937_64 rng(4);
  const Subspace s = random_near_horizontal(3, 0.3, rng);
  const Mat P = projection(s);
  CHECK((P * P - P).norm() < 1e-14);
  CHECK((P - P.transpose()).norm() < 1e-14);
  CHECK((P * s.normal).norm() < 1e-14);
  CHECK(P.trace() == doctest::Approx(2.0));
}

TEST_CASE("canonical rotation sends v_sigma to e_n") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 4; ++n) {
    const Subspace s = random_near_horizontal(n, 0.4, rng);
    const Mat O = canonical_rotation(s).matrix;
    CHECK((O * s.normal - unit(n, n - 1)).norm() < 1e-13);
  }
}

TEST_CASE("tangent generator acts on the frame as documented") {
  std::mt19937_64 rng(6);
  const Subspace s = random_near_horizontal(4, 0.4, rng);
  const TangentFrame f = tangent_frame(s);
  REQUIRE(f.vectors.size() == 3);
  for (int j = 0; j < 3; ++j) {
    const Mat X = tangent_generator(f, j);
    CHECK((X + X.transpose()).norm() < 1e-14);
    CHECK((X * f.vectors[j] - s.normal).norm() < 1e-14);
    CHECK((X * s.normal + f.vectors[j]).norm() < 1e-14);
  }
}

TEST_CASE("varpi: closed values and the small-angle branch") {
  CHECK(varpi(kPi / 2) == doctest::Approx(-1.0).epsilon(1e-15));
  // (cos b - 1) / sin b = -tan(b / 2).
  for (double b : {1e-9, 1e-5, 0.01, 0.3, 1.0})
    CHECK(varpi(b) == doctest::Approx(-std::tan(b / 2)).epsilon(1e-12));
}

TEST_CASE("derivatives match central differences") {
  std::mt19937_64 rng(7);
  const double h = 1e-5;
  for (int n = 2; n <= 4; ++n) {
    const Subspace s = random_near_horizontal(n, 0.3, rng);
    const Subspace r = random_near_horizontal(n, 0.3, rng);
    const TangentFrame f = tangent_frame(s);
    Vec xi = Vec::Random(n);
    for (int j = 0; j < n - 1; ++j) {
      const Vec fd = (projection(rotate_along(s, f.vectors[j], h)) * xi -
                      projection(rotate_along(s, f.vectors[j], -h)) * xi) /
                     (2 * h);
      CHECK((fd - projection_derivative(f, j, xi)).norm() < 1e-8);
      const Mat fr = (rotation_between(r, rotate_along(s, f.vectors[j], h)).matrix -
                      rotation_between(r, rotate_along(s, f.vectors[j], -h)).matrix) /
                     (2 * h);
      CHECK((fr - rotation_derivative(s, r, f.vectors[j])).norm() < 1e-7);
    }
  }
}

TEST_CASE("shift map round trip") {
  std::mt19937_64 rng(8);
  for (int n = 2; n <= 4; ++n) {
    const Subspace s = random_near_horizontal(n, 0.2, rng);
    const Vec N = shift_of(s, 10.0);
    CHECK(N.size() == n - 1);
    CHECK((subspace_from_shift(N, 10.0).normal - s.normal).norm() < 1e-12);
  }
}

TEST_CASE("sampled dist' never exceeds the closed form") {
  std::mt19937_64 rng(9);
  const Subspace s = random_near_horizontal(3, 0.3, rng);
  const Subspace t = random_near_horizontal(3, 0.3, rng);
  const double exact = dist_prime(s, t);
  const double sampled = dist_prime_sampled(s, t, 4000, rng);
  CHECK(sampled <= exact + 1e-12);
  CHECK(sampled >= 0.9 * exact);
}
