/**
 * @file coefficients.cpp
 * @brief Canonical tile packets in the continuum and the coefficient maps
 *        F(t) = |<f, phi_t>|, A(t) = |<1_E, theta_t(., sigma(.)) 1_{alpha_{t,tau}}>|.
 */
#include "grsio/wavepackets.hpp"

#include <algorithm>
#include <array>

#include "grsio/operators.hpp"

namespace grsio {

namespace {

double unnormalized_profile(const CanonicalPacket& p, const Vec& xi) {
  const double rho = xi.norm();
  const double z = zeta(rho);
  if (z == 0.0) return 0.0;
  return cap_bump(p.v, p.r, xi / rho) * z;
}

struct Node {
  Vec xi;
  double w;
};

// Gnomonic coordinates q on the tangent plane at v: u = (v + E q) / sqrt(1 + |q|^2),
// surface element (1 + |q|^2)^{-n/2} dq; then xi = rho u with volume rho^d drho dS.
std::vector<Node> support_nodes(const CanonicalPacket& p, const Vec& offset, const Quadrature& q) {
  const int n = static_cast<int>(p.v.size()), d = n - 1;
  const double P = std::tan(2.0 * std::asin(std::min(1.0, 0.5 * p.r)));
  const Vec along = p.v * p.v.dot(offset);
  const double tang = (offset - along).norm();
  const int Nt = std::max(q.tangential, 8 + 8 * static_cast<int>(std::ceil(tang * 2.0 * P)));
  const int Nr = std::max(q.radial, 16 + 8 * static_cast<int>(std::ceil(offset.norm() * 0.5)));
  const double ht = 2.0 * P / (Nt - 1), hr = 0.5 / (Nr - 1);
  std::vector<double> tw(Nt, ht), rw(Nr, hr);
  tw.front() = tw.back() = 0.5 * ht;
  rw.front() = rw.back() = 0.5 * hr;
  std::vector<Node> nodes;
  std::vector<int> k(d, 0);
  while (true) {
    Vec qv(d);
    double wq = 1.0;
    for (int i = 0; i < d; ++i) {
      qv(i) = -P + k[i] * ht;
      wq *= tw[k[i]];
    }
    const double q2 = qv.squaredNorm();
    const Vec u = (p.v + p.tangent * qv) / std::sqrt(1.0 + q2);
    const double ds = std::pow(1.0 + q2, -0.5 * n);
    for (int j = 0; j < Nr; ++j) {
      const double rho = 1.0 + j * hr;
      nodes.push_back(Node{rho * u, wq * ds * rw[j] * std::pow(rho, d)});
    }
    int a = d - 1;
    while (a >= 0 && ++k[a] == Nt) k[a--] = 0;
    if (a < 0) break;
  }
  return nodes;
}

}  // namespace

cplx CanonicalPacket::hat(const Vec& xi) const {
  const double a = unnormalized_profile(*this, xi);
  if (a == 0.0) return 0.0;
  const double ph = -2.0 * kPi * center.dot(xi);
  return norm * a * cplx(std::cos(ph), std::sin(ph));
}

CanonicalPacket canonical_packet(const Tile& t) {
  CanonicalPacket p;
  p.v = t.v();
  const TangentFrame fr = tangent_frame(Subspace(p.v));
  p.tangent.resize(p.v.size(), p.v.size() - 1);
  for (size_t j = 0; j < fr.vectors.size(); ++j) p.tangent.col(j) = fr.vectors[j];
  p.r = 0.5 * t.Q.center_child(t.kappa).side();
  p.center = t.R.box().center;
  p.s = 27.0 / t.Q.side();
  const Vec zero = Vec::Zero(p.v.size());
  double e = 0.0;
  for (const Node& nd : support_nodes(p, zero, Quadrature{24, 48})) {
    const double a = unnormalized_profile(p, nd.xi);
    e += nd.w * a * a;
  }
  p.norm = 1.0 / std::sqrt(e);
  return p;
}

cplx integrate_over_support(const CanonicalPacket& p, const std::function<cplx(const Vec&)>& F,
                            const Vec& offset, const Quadrature& q) {
  cplx s = 0.0;
  for (const Node& nd : support_nodes(p, offset, q)) s += nd.w * F(nd.xi);
  return s;
}

cplx packet_inner(const CanonicalPacket& a, const CanonicalPacket& b, const Quadrature& q) {
  if ((a.v - b.v).norm() >= a.r + b.r) return 0.0;
  const Vec off = a.center - b.center;
  if (a.r <= b.r)
    return integrate_over_support(a, [&](const Vec& xi) { return a.hat(xi) * std::conj(b.hat(xi)); },
                                  off, q);
  return std::conj(integrate_over_support(
      b, [&](const Vec& xi) { return b.hat(xi) * std::conj(a.hat(xi)); }, off, q));
}

PacketSum make_packet_sum(std::vector<CanonicalPacket> packets, std::vector<cplx> coef,
                          const Quadrature& q) {
  PacketSum f;
  f.packets = std::move(packets);
  f.coef = std::move(coef);
  const size_t N = f.packets.size();
  std::vector<double> rows(N, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(N); ++i) {
    cplx acc = 0.0;
    for (size_t j = 0; j < N; ++j)
      acc += f.coef[i] * std::conj(f.coef[j]) * packet_inner(f.packets[i], f.packets[j], q);
    rows[i] = acc.real();
  }
  for (double r : rows) f.norm2 += r;
  return f;
}

std::vector<double> f_coefficients(const PacketSum& f, const TileSet& tiles, const Quadrature& q) {
  std::vector<double> F(tiles.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(tiles.size()); ++t) {
    const CanonicalPacket pt = canonical_packet(tiles[t]);
    cplx acc = 0.0;
    for (size_t j = 0; j < f.packets.size(); ++j)
      acc += f.coef[j] * packet_inner(f.packets[j], pt, q);
    F[t] = std::abs(acc);
  }
  return F;
}

cplx dual_hat(const CanonicalPacket& p, const MultiplierFamily& m, const Subspace& sigma,
              const Vec& xi) {
  const cplx h = p.hat(xi);
  if (h == cplx(0.0)) return 0.0;
  const int d = static_cast<int>(xi.size()) - 1;
  const Mat OQ = directional_frame(sigma, Rotation{Mat::Identity(d, d)});
  const Vec Px = projection(sigma) * xi;
  return h * directional_symbol(m, sigma, OQ, xi) * psi_tilde(p.s * Px.norm()) *
         plateau(xi.norm());
}

std::vector<double> a_coefficients(const DirectionField& field, const TileSet& tiles,
                                   const MultiplierFamily& m, int64_t tau, const Quadrature& q) {
  const TorusSpec& spec = field.spec;
  const int n = spec.n;
  const double h = spec.L / spec.M;
  const Vec box_center = Vec::Constant(n, 0.5 * spec.L);
  std::vector<double> A(tiles.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(tiles.size()); ++t) {
    std::vector<int> active;
    for (size_t k = 0; k < field.sigmas.size(); ++k)
      if (in_directional_cell(tiles[t], field.sigmas[k].normal, tau))
        active.push_back(static_cast<int>(k));
    if (active.empty()) continue;
    const CanonicalPacket p = canonical_packet(tiles[t]);
    // Oscillation of e^{2 pi i <x - c, xi>} over the box sets the radial node count.
    const Vec extent = p.v * ((p.center - box_center).norm() + 0.5 * spec.L * std::sqrt(double(n)));
    const std::vector<Node> nodes = support_nodes(p, extent, q);
    std::vector<std::vector<cplx>> ph(n, std::vector<cplx>(spec.M));
    std::vector<std::vector<std::array<int, 4>>> pts(active.size());
    for (size_t j = 0; j < spec.size(); ++j) {
      if (!field.in_E[j]) continue;
      const auto it = std::find(active.begin(), active.end(), field.which[j]);
      if (it == active.end()) continue;
      const std::vector<int> mi = spec.multi_index(j);
      std::array<int, 4> a{0, 0, 0, 0};
      for (int ax = 0; ax < n; ++ax) a[ax] = mi[ax];
      pts[it - active.begin()].push_back(a);
    }
    cplx acc = 0.0;
    const int d = n - 1;
    std::vector<Mat> frames;
    std::vector<Mat> projs;
    for (int k : active) {
      frames.push_back(directional_frame(field.sigmas[k], Rotation{Mat::Identity(d, d)}));
      projs.push_back(projection(field.sigmas[k]));
    }
    for (const Node& nd : nodes) {
      const cplx base = p.hat(nd.xi);
      if (base == cplx(0.0)) continue;
      double cell = 1.0;
      for (int a = 0; a < n; ++a) {
        const double u = kPi * h * nd.xi(a);
        cell *= u == 0.0 ? h : h * std::sin(u) / u;
        for (int i = 0; i < spec.M; ++i) {
          const double ang = -2.0 * kPi * (i * h) * nd.xi(a);
          ph[a][i] = cplx(std::cos(ang), std::sin(ang));
        }
      }
      for (size_t ai = 0; ai < active.size(); ++ai) {
        const int k = active[ai];
        const Vec Px = projs[ai] * nd.xi;
        const double w = psi_tilde(p.s * Px.norm());
        if (w == 0.0) continue;
        const cplx dual = base * directional_symbol(m, field.sigmas[k], frames[ai], nd.xi) * w;
        cplx sum = 0.0;
        for (const auto& mi : pts[ai]) {
          cplx e = ph[0][mi[0]];
          for (int a = 1; a < n; ++a) e *= ph[a][mi[a]];
          sum += e;
        }
        acc += nd.w * cell * sum * std::conj(dual);
      }
    }
    A[t] = std::abs(acc);
  }
  return A;
}

CoefficientTable coefficient_tables(const PacketSum& f, const DirectionField& field,
                                    const TileSet& tiles, const MultiplierFamily& m, int64_t tau,
                                    int M, const Quadrature& q) {
  CoefficientTable c;
  c.F = f_coefficients(f, tiles, q);
  c.A = a_coefficients(field, tiles, m, tau, q);
  c.M = M;
  c.canonical_packet = true;
  return c;
}

PacketReport build_packets_report(const Tile& t, const MultiplierFamily& m, int pairs,
                                  std::mt19937_64& rng, const Quadrature& q) {
  PacketReport rep;
  const CanonicalPacket p = canonical_packet(t);
  const int n = t.n(), d = n - 1;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const TriadicCube center = t.Q.center_child(t.kappa);
  // (ii): spectrum outside omega_t.
  for (int k = 0; k < pairs; ++k) {
    Vec y = t.Q.center();
    for (int i = 0; i < d; ++i) y(i) += (u01(rng) - 0.5) * 4.0 * center.side();
    const Vec xi = (0.5 + 1.5 * u01(rng)) * chart_inverse(y);
    const bool inside = center.contains(chart(xi / xi.norm())) && xi.norm() > 0.5 && xi.norm() < 2.0;
    if (!inside) rep.spectral_leak = std::max(rep.spectral_leak, std::abs(p.hat(xi)));
  }
  const Vec zero = Vec::Zero(n);
  const std::vector<Node> nodes = support_nodes(p, zero, q);
  // Directions spread over Q_t and a neighbourhood of it.
  auto random_direction = [&]() {
    Vec y = t.Q.center();
    for (int i = 0; i < d; ++i) y(i) += (u01(rng) - 0.5) * 1.5 * t.Q.side();
    return chart_inverse(y);
  };
  // (iv): theta_t(., rho) vanishes for v_rho outside alpha_t.
  for (int k = 0; k < pairs; ++k) {
    const Vec v = random_direction();
    if (in_directional_support(t, v)) continue;
    const Subspace rho(v);
    for (size_t i = 0; i < nodes.size(); i += 7)
      rep.dual_leak = std::max(rep.dual_leak, std::abs(dual_hat(p, m, rho, nodes[i].xi)));
  }
  // (v) and the symbol difference bound, for pairs inside alpha_t.
  const double scl = t.scl();
  const Vec c = p.center;
  for (int k = 0; k < pairs; ++k) {
    const Vec v1 = random_direction(), v2 = random_direction();
    if (!in_directional_support(t, v1) || !in_directional_support(t, v2)) continue;
    const Subspace s1(v1), s2(v2);
    const double dd = dist(s1, s2);
    if (dd == 0.0) continue;
    const double bound = std::max(scl * dd, 1.0 / std::log(std::exp(1.0) + 1.0 / dd));
    const double bound_sym = (1.0 + p.s) * dd + 1.0 / std::log(std::exp(1.0) + 1.0 / dd);
    double symdiff = 0.0;
    for (size_t i = 0; i < nodes.size(); i += 5) {
      const Vec& xi = nodes[i].xi;
      if (p.hat(xi) == cplx(0.0)) continue;
      const cplx g1 = dual_hat(p, m, s1, xi) / p.hat(xi);
      const cplx g2 = dual_hat(p, m, s2, xi) / p.hat(xi);
      symdiff = std::max(symdiff, std::abs(g1 - g2));
    }
    rep.symbol_diff_constant = std::max(rep.symbol_diff_constant, symdiff / bound_sym);
    // Spatial difference at a few points of the plate and its neighbourhood.
    const OrientedBox box = t.R.box();
    for (int pt = 0; pt < 4; ++pt) {
      Vec x = c;
      for (int i = 0; i < n; ++i) x += (u01(rng) - 0.5) * 2.0 * box.half(i) * box.axes.col(i);
      auto value = [&](const Subspace& s) {
        cplx acc = 0.0;
        for (const Node& nd : support_nodes(p, x - c, q)) {
          const double ph = 2.0 * kPi * x.dot(nd.xi);
          acc += nd.w * dual_hat(p, m, s, nd.xi) * cplx(std::cos(ph), std::sin(ph));
        }
        return acc;
      };
      const double diff = std::abs(value(s1) - value(s2));
      Vec loc = box.axes.transpose() * (x - c);
      for (int i = 0; i < n; ++i) loc(i) /= 2.0 * box.half(i);
      const double bump = std::pow(1.0 + loc.squaredNorm(), -0.5 * 50 * n) / std::sqrt(t.R.measure());
      rep.diff_ratio = std::max(rep.diff_ratio, diff / (bound * bump));
    }
    ++rep.pairs;
  }
  return rep;
}

}  // namespace grsio
