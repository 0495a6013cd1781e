/**
 * @file capnet.cpp
 * @brief Chart-lattice nets on the cap and the squared-bump partition of unity.
 */
#include "grsio/wavepackets.hpp"

#include <algorithm>

namespace grsio {

CapNet build_net(int n, double s, int kappa, const ConeProfile& cone) {
  if (n < 2) throw Error("dimension", "nets need n >= 2");
  if (!in_scale_set(s, cone.alpha)) throw Error("scale", "s is not in the scale set");
  CapNet net;
  net.n = n;
  net.kappa = kappa;
  net.s = s;
  net.alpha = cone.alpha;
  net.r = std::pow(3.0, -kappa) / s;
  const int d = n - 1;
  const double c = cone.outer();
  if (c <= net.r) {
    net.singleton = true;
    net.points.push_back(unit(n, n - 1));
    return net;
  }
  // Spacing l / (2K) with l = 27/s puts every standard cube centre on the
  // lattice; the ratio keeps the covering radius below r and the separation
  // above 2r/3 after the chart distortion on the cap.
  const double ratio = d == 1 ? 1.5 : 1.2;
  const double K = std::ceil(27.0 * std::pow(3.0, kappa) / (2.0 * ratio));
  net.spacing = (27.0 / s) / (2.0 * K);
  const double chart_radius = std::sin(2.0 * std::asin(0.5 * c));
  const double reach = chart_radius + 0.5 * net.spacing * std::sqrt(static_cast<double>(d));
  const int kmax = static_cast<int>(std::ceil(reach / net.spacing));
  std::vector<int> k(d, -kmax);
  while (true) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = k[i] * net.spacing;
    if (y.norm() <= reach && y.norm() < 1.0) net.points.push_back(chart_inverse(y));
    int a = d - 1;
    while (a >= 0 && ++k[a] > kmax) k[a--] = -kmax;
    if (a < 0) break;
  }
  return net;
}

Vec random_cap_direction(int n, double chord, std::mt19937_64& rng) {
  const int d = n - 1;
  const double theta = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
  const double rad = std::sin(std::min(theta, 0.5 * kPi));
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = g(rng);
    y *= rad * std::pow(u(rng), 1.0 / d) / y.norm();
    // Chart density of surface measure is 1 / sqrt(1 - |y|^2).
    if (u(rng) > std::sqrt(1.0 - rad * rad) / std::sqrt(1.0 - y.squaredNorm())) continue;
    const Vec v = chart_inverse(y);
    if (ConeProfile::chord_to_pole(v) < chord) return v;
  }
}

double cap_bump(const Vec& beta, double r, const Vec& unit_dir) {
  return smooth_step((1.0 - (unit_dir - beta).norm() / r) / 0.5);
}

std::vector<double> partition_values(const CapNet& net, const Vec& u) {
  if (net.singleton) return {1.0};
  std::vector<double> b(net.points.size());
  double s2 = 0.0;
  for (size_t i = 0; i < b.size(); ++i) {
    b[i] = cap_bump(net.points[i], net.r, u);
    s2 += b[i] * b[i];
  }
  if (s2 == 0.0) return b;
  const double inv = 1.0 / std::sqrt(s2);
  for (auto& x : b) x *= inv;
  return b;
}

double partition_sum_squares(const CapNet& net, const Vec& u) {
  double s = 0.0;
  for (double t : partition_values(net, u)) s += t * t;
  return s;
}

NetReport check_net(const CapNet& net, int samples, std::mt19937_64& rng) {
  NetReport rep;
  const size_t P = net.points.size();
  rep.min_separation = P > 1 ? 1e300 : 0.0;
  for (size_t i = 0; i < P; ++i)
    for (size_t j = i + 1; j < P; ++j)
      rep.min_separation = std::min(rep.min_separation, (net.points[i] - net.points[j]).norm());
  if (P > 1) {
    rep.separated = rep.min_separation >= 2.0 * net.r / 3.0;
    // theta_beta = 1 on B(beta, r/3) is guaranteed once other bumps vanish there.
    rep.inner_plateau = rep.min_separation >= 4.0 * net.r / 3.0;
  }
  for (int k = 0; k < samples; ++k) {
    const Vec u = random_cap_direction(net.n, net.cap_chord(), rng);
    double best = 1e300;
    int mult = 0;
    for (const Vec& b : net.points) {
      const double dd = (u - b).norm();
      best = std::min(best, dd);
      if (dd < net.r) ++mult;
    }
    rep.max_gap = std::max(rep.max_gap, best);
    rep.max_multiplicity = std::max(rep.max_multiplicity, mult);
  }
  rep.covers = rep.max_gap < net.r;
  return rep;
}

std::vector<double> partition_derivative_sizes(const CapNet& net, int samples,
                                               std::mt19937_64& rng) {
  std::vector<double> out(3, 0.0);
  const double h = net.r / 16.0;
  std::normal_distribution<double> g;
  for (int k = 0; k < samples; ++k) {
    const Vec u = random_cap_direction(net.n, net.cap_chord(), rng);
    Vec w(net.n);
    for (int i = 0; i < net.n; ++i) w(i) = g(rng);
    w -= w.dot(u) * u;
    w.normalize();
    auto curve = [&](double t) { return Vec(std::cos(t) * u + std::sin(t) * w); };
    std::vector<std::vector<double>> f;  // f[step + 2][beta]
    for (int st = -2; st <= 2; ++st) f.push_back(partition_values(net, curve(st * h)));
    for (size_t b = 0; b < net.points.size(); ++b) {
      const double d1 = (f[3][b] - f[1][b]) / (2.0 * h);
      const double d2 = (f[3][b] - 2.0 * f[2][b] + f[1][b]) / (h * h);
      const double d3 = (f[4][b] - 2.0 * f[3][b] + 2.0 * f[1][b] - f[0][b]) / (2.0 * h * h * h);
      out[0] = std::max(out[0], std::abs(d1));
      out[1] = std::max(out[1], std::abs(d2));
      out[2] = std::max(out[2], std::abs(d3));
    }
  }
  return out;
}

}  // namespace grsio
