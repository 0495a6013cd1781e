/**
 * @file multipliers.cpp
 * @brief Built-in symbol families and finite-difference Mihlin norm estimates.
 */
#include "grsio/multipliers.hpp"

#include <algorithm>
#include <regex>

namespace grsio {

double smoothed_sign(double x, double eps) {
  if (x >= eps) return 1.0;
  if (x <= -eps) return -1.0;
  // Odd C^infinity transition across (-eps, eps).
  const double u = x / eps;
  const double a = flat_exp(1.0 + u), b = flat_exp(1.0 - u);
  return 2.0 * a / (a + b) - 1.0;
}

namespace {

std::vector<Vec> sample_directions(int d, int count) {
  std::vector<Vec> dirs;
  if (d == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
  } else if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * (k + 0.5) / count;
      Vec v(2);
      v << std::cos(t), std::sin(t);
      dirs.push_back(v);
    }
  } else {
    // Fibonacci points on S^{d-1} for d = 3; higher d falls back to coordinate axes.
    if (d == 3) {
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double r = std::sqrt(1.0 - z * z);
        Vec v(3);
        v << r * std::cos(golden * k), r * std::sin(golden * k), z;
        dirs.push_back(v);
      }
    } else {
      for (int i = 0; i < d; ++i) {
        dirs.push_back(unit(d, i));
        dirs.push_back(-unit(d, i));
      }
    }
  }
  return dirs;
}

void multi_indices(int d, int total, std::vector<int>& cur, int pos,
                   std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur[pos] = k;
    multi_indices(d, total - k, cur, pos + 1, out);
  }
}

// Nested central differences; f is evaluated 2^{|alpha|} times.
cplx nested_difference(const std::function<cplx(const Vec&)>& f, const Vec& eta,
                       std::vector<int> alpha, double h) {
  int i = 0;
  while (i < static_cast<int>(alpha.size()) && alpha[i] == 0) ++i;
  if (i == static_cast<int>(alpha.size())) return f(eta);
  --alpha[i];
  Vec ep = eta, em = eta;
  ep(i) += h;
  em(i) -= h;
  return (nested_difference(f, ep, alpha, h) - nested_difference(f, em, alpha, h)) / (2.0 * h);
}

double mihlin_of(const std::function<cplx(const Vec&)>& f, int d, int A,
                 const MihlinSamples& smp) {
  if (A < 0) throw Error("order", "A must be nonnegative");
  std::vector<std::vector<int>> alphas;
  for (int k = 0; k <= A; ++k) {
    std::vector<int> cur(d, 0);
    multi_indices(d, k, cur, 0, alphas);
  }
  const std::vector<Vec> dirs = sample_directions(d, smp.directions);
  const double lr0 = std::log(smp.rmin), lr1 = std::log(smp.rmax);
  double best = 0.0;
  for (int ir = 0; ir < smp.radii; ++ir) {
    const double r = std::exp(lr0 + (lr1 - lr0) * ir / std::max(1, smp.radii - 1));
    const double h = smp.step * r;
    for (const Vec& u : dirs) {
      const Vec eta = r * u;
      for (const auto& a : alphas) {
        int k = 0;
        for (int x : a) k += x;
        const double val = std::pow(r, k) * std::abs(nested_difference(f, eta, a, h));
        if (!std::isfinite(val)) {
          std::string where;
          for (int i = 0; i < d; ++i) where += (i ? "," : "") + std::to_string(eta(i));
          throw Error("nonfinite", "derivative estimate at eta=(" + where + ")");
        }
        best = std::max(best, val);
      }
    }
  }
  return best;
}

}  // namespace

double mihlin_norm_estimate(const MultiplierFamily& m, const Subspace& sigma, int A,
                            const MihlinSamples& samples) {
  return mihlin_of([&](const Vec& eta) { return m(sigma, eta); }, m.d, A, samples);
}

double mihlin_difference_estimate(const MultiplierFamily& m, const Subspace& sigma,
                                  const Subspace& tau, int A, const MihlinSamples& samples) {
  return mihlin_of([&](const Vec& eta) { return m(tau, eta) - m(sigma, eta); }, m.d, A,
                   samples);
}

NormReport family_norm_estimate(const MultiplierFamily& m, int A,
                                const std::vector<std::pair<Subspace, Subspace>>& pairs,
                                const MihlinSamples& samples) {
  NormReport rep;
  rep.samples = samples;
  std::vector<std::pair<double, double>> by_dist;  // (dist, weighted difference)
  for (const auto& [s, t] : pairs) {
    rep.mihlin_sup = std::max(rep.mihlin_sup, mihlin_norm_estimate(m, s, A, samples));
    const double dd = dist(s, t);
    if (m.sigma_independent || dd == 0.0) {
      by_dist.emplace_back(dd, 0.0);
      continue;
    }
    const double w = std::log(std::exp(1.0) + 1.0 / dd) *
                     mihlin_difference_estimate(m, s, t, A, samples);
    rep.holder_sup = std::max(rep.holder_sup, w);
    by_dist.emplace_back(dd, w);
  }
  rep.pairs_used = static_cast<int>(pairs.size());
  if (by_dist.size() >= 8) {
    std::sort(by_dist.begin(), by_dist.end());
    const size_t q = by_dist.size() / 4;
    double near = 0.0, far = 0.0;
    for (size_t i = 0; i < q; ++i) near = std::max(near, by_dist[i].second);
    for (size_t i = by_dist.size() - q; i < by_dist.size(); ++i)
      far = std::max(far, by_dist[i].second);
    rep.unstable = near > 2.0 * far && near > 0.0;
  }
  return rep;
}

MultiplierFamily custom(int d, int order, std::string label, bool sigma_independent,
                        std::function<cplx(const Subspace&, const Vec&)> f) {
  return MultiplierFamily{d, order, std::move(label), sigma_independent, std::move(f)};
}

MultiplierFamily constant_one(int d) {
  return custom(d, 1000, "constant_one", true,
                [](const Subspace&, const Vec&) { return cplx(1.0, 0.0); });
}

MultiplierFamily hilbert_smoothed(int d, double eps) {
  return custom(d, 1000, "hilbert_smoothed(" + std::to_string(eps) + ")", true,
                [eps](const Subspace&, const Vec& eta) {
                  return cplx(0.0, -smoothed_sign(eta(0), eps));
                });
}

MultiplierFamily riesz_component(int d, int k, double eps) {
  if (k < 0 || k >= d) throw Error("label", "riesz component index out of range");
  return custom(d, 1000, "riesz_component(" + std::to_string(k) + ")", true,
                [k, eps](const Subspace&, const Vec& eta) {
                  const double r = eta.norm();
                  if (r == 0.0) return cplx(0.0, 0.0);
                  return cplx(eta(k) / r * smooth_step(r / eps), 0.0);
                });
}

MultiplierFamily compact_bump(int d, double r) {
  return custom(d, 1000, "compact_bump(" + std::to_string(r) + ")", true,
                [r](const Subspace&, const Vec& eta) {
                  return cplx(smooth_step(2.0 * (1.0 - eta.norm() / r)), 0.0);
                });
}

MultiplierFamily cs_shift(const MultiplierFamily& m0, const Vec& N) {
  auto base = m0.eval;
  return custom(m0.d, m0.order, "cs_shift(" + m0.label + ")", m0.sigma_independent,
                [base, N](const Subspace& s, const Vec& eta) { return base(s, eta + N); });
}

MultiplierFamily builtin(const std::string& label, int d) {
  static const std::regex with_arg(R"((\w+)\(([^)]*)\))");
  std::smatch mm;
  std::string name = label, arg;
  if (std::regex_match(label, mm, with_arg)) {
    name = mm[1];
    arg = mm[2];
  }
  if (name == "constant_one") return constant_one(d);
  if (name == "hilbert_smoothed") return hilbert_smoothed(d, arg.empty() ? 1e-6 : std::stod(arg));
  if (name == "riesz_component") return riesz_component(d, arg.empty() ? 0 : std::stoi(arg));
  if (name == "cs_shift") {
    // Argument: first coordinate of the shift; base is the unit compact bump.
    Vec N = Vec::Zero(d);
    if (!arg.empty()) N(0) = std::stod(arg);
    return cs_shift(compact_bump(d, 1.0), N);
  }
  if (name == "custom") throw Error("label", "custom families are built with grsio::custom()");
  throw Error("label", "unknown multiplier family '" + label + "'");
}

}  // namespace grsio
