/**
 * @file wavepackets.cpp
 * @brief phi_beta, psi_s and the two-path frame identity check on the lattice.
 */
#include "grsio/wavepackets.hpp"

#include <algorithm>

#include "grsio/operators.hpp"

namespace grsio {

namespace {

// Sparse table of theta_beta(xi') zeta(|xi|) over the lattice frequencies.
struct ThetaTable {
  std::vector<size_t> index;                          // lattice index
  std::vector<std::vector<std::pair<int, double>>> w; // (beta, theta * zeta)
  std::vector<double> zeta2_sum;                      // zeta^2 sum theta^2
};

ThetaTable theta_table(const TorusSpec& spec, const CapNet& net) {
  ThetaTable T;
  for (size_t k = 0; k < spec.size(); ++k) {
    const Vec xi = spec.frequency(k);
    const double r = xi.norm();
    const double z = zeta(r);
    if (z == 0.0) continue;
    const std::vector<double> th = partition_values(net, xi / r);
    std::vector<std::pair<int, double>> row;
    double s2 = 0.0;
    for (size_t b = 0; b < th.size(); ++b)
      if (th[b] != 0.0) {
        row.emplace_back(static_cast<int>(b), th[b] * z);
        s2 += th[b] * th[b];
      }
    if (row.empty()) continue;
    T.index.push_back(k);
    T.w.push_back(std::move(row));
    T.zeta2_sum.push_back(z * z * s2);
  }
  return T;
}

}  // namespace

GridFunction phi_beta(const TorusSpec& spec, const CapNet& net, int beta_index) {
  if (beta_index < 0 || beta_index >= static_cast<int>(net.points.size()))
    throw Error("index", "net point out of range");
  const double scale = 1.0 / std::pow(spec.L, spec.n);
  std::vector<cplx> c(spec.size(), 0.0);
  for (size_t k = 0; k < spec.size(); ++k) {
    const Vec xi = spec.frequency(k);
    const double r = xi.norm();
    const double z = zeta(r);
    if (z == 0.0) continue;
    const double th = partition_values(net, xi / r)[beta_index];
    c[k] = th * z * scale;
  }
  return GridFunction::from_spectrum(spec, std::move(c));
}

GridFunction psi_kernel(const TorusSpec& spec, const MultiplierFamily& m, const Subspace& sigma,
                        double s) {
  const int d = spec.n - 1;
  const Mat OQ = directional_frame(sigma, Rotation{Mat::Identity(d, d)});
  const Mat P = projection(sigma);
  const double scale = 1.0 / std::pow(spec.L, spec.n);
  std::vector<cplx> c(spec.size(), 0.0);
  for (size_t k = 0; k < spec.size(); ++k) {
    const Vec xi = spec.frequency(k);
    const double w = psi_tilde(s * (P * xi).norm()) * plateau(xi.norm());
    if (w == 0.0) continue;
    c[k] = directional_symbol(m, sigma, OQ, xi) * w * scale;
  }
  return GridFunction::from_spectrum(spec, std::move(c));
}

FrameReport frame_verify(const CapNet& net, const GridFunction& g) {
  const TorusSpec& spec = g.spec();
  if (spec.n != net.n) throw Error("dimension", "net and torus dimensions differ");
  const ThetaTable T = theta_table(spec, net);
  const std::vector<cplx>& cg = g.spectrum();
  FrameReport rep;
  rep.terms = static_cast<int>(net.points.size());

  // Path B: the multiplier zeta^2 sum theta^2.
  std::vector<cplx> outB(spec.size(), 0.0);
  for (size_t e = 0; e < T.index.size(); ++e) outB[T.index[e]] = cg[T.index[e]] * T.zeta2_sum[e];

  // Sampling step: 1/a must exceed the per-axis extent of every phi_beta spectrum.
  std::vector<int> lo(net.points.size() * spec.n, spec.M), hi(net.points.size() * spec.n, -spec.M);
  for (size_t e = 0; e < T.index.size(); ++e) {
    const auto mi = spec.multi_index(T.index[e]);
    for (const auto& [b, w] : T.w[e])
      for (int a = 0; a < spec.n; ++a) {
        const int si = spec.signed_index(mi[a]);
        lo[b * spec.n + a] = std::min(lo[b * spec.n + a], si);
        hi[b * spec.n + a] = std::max(hi[b * spec.n + a], si);
      }
  }
  int extent = 1;
  for (size_t i = 0; i < lo.size(); ++i) extent = std::max(extent, hi[i] - lo[i] + 1);
  int K = 1;
  while (K <= extent) K *= 2;
  if (K > spec.M) throw Error("frame", "packet spectra too wide for the lattice");
  const int stride = spec.M / K;
  const double a = spec.L / K;
  rep.lattice_step = a;

  const double Ln = std::pow(spec.L, spec.n);
  const double weight = std::pow(a, spec.n) * static_cast<double>(spec.size());
  std::vector<cplx> outA(spec.size(), 0.0);
  std::vector<std::vector<cplx>> per_beta(net.points.size());
#pragma omp parallel for schedule(dynamic)
  for (long b = 0; b < static_cast<long>(net.points.size()); ++b) {
    // Correlation <g, Tr_z phi_beta> for all lattice z.
    std::vector<cplx> C(spec.size(), 0.0);
    std::vector<double> phi(spec.size(), 0.0);
    bool any = false;
    for (size_t e = 0; e < T.index.size(); ++e)
      for (const auto& [bb, w] : T.w[e])
        if (bb == b) {
          phi[T.index[e]] = w / Ln;
          C[T.index[e]] = cg[T.index[e]] * w;  // c_g conj(c_phi) L^n
          any = true;
        }
    if (!any) continue;
    std::vector<cplx> Cx = inverse_dft(spec, C);
    for (size_t j = 0; j < spec.size(); ++j) {
      const auto mi = spec.multi_index(j);
      bool on = true;
      for (int ax = 0; ax < spec.n && on; ++ax) on = (mi[ax] % stride) == 0;
      if (!on) Cx[j] = 0.0;
    }
    std::vector<cplx> d = forward_dft(spec, Cx);
    for (size_t k = 0; k < spec.size(); ++k) d[k] = phi[k] == 0.0 ? 0.0 : d[k] * phi[k] * weight;
    per_beta[b] = std::move(d);
  }
  for (const auto& d : per_beta)
    if (!d.empty())
      for (size_t k = 0; k < spec.size(); ++k) outA[k] += d[k];

  double num = 0.0, den = 0.0, out = 0.0;
  for (size_t k = 0; k < spec.size(); ++k) {
    num += std::norm(outA[k] - outB[k]);
    den += std::norm(outB[k]);
    out += std::norm(outA[k]);
  }
  rep.output_norm = std::sqrt(out * Ln);
  rep.rel_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num * Ln);
  return rep;
}

}  // namespace grsio
