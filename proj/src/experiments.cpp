/**
 * @file experiments.cpp
 * @brief Norm growth in the number of directions and the differentiation sweep.
 */
#include "grsio/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace grsio {

namespace {

uint32_t bit_reverse(uint32_t x, int bits) {
  uint32_t r = 0;
  for (int b = 0; b < bits; ++b) r |= ((x >> b) & 1u) << (bits - 1 - b);
  return r;
}

double halton(uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

Subspace from_angle(double t) {
  Vec v(2);
  v << std::sin(t), std::cos(t);
  return Subspace(v);
}

// Chart point in the disc of radius rad from two numbers in [0,1).
Subspace from_disc(int n, double rad, double a, double b) {
  Vec y = Vec::Zero(n - 1);
  const double rho = rad * std::sqrt(a), phi = 2.0 * kPi * b;
  y(0) = rho * std::cos(phi);
  if (n - 1 > 1) y(1) = rho * std::sin(phi);
  Vec v(n);
  v.head(n - 1) = y;
  v(n - 1) = std::sqrt(1.0 - y.squaredNorm());
  return Subspace(v);
}

double l2(const std::vector<double>& a, double cell) { return l2_norm_of(a, cell); }

}  // namespace

std::vector<Subspace> direction_set(int n, int N, int nmax, double aperture,
                                    const std::string& kind, uint64_t seed) {
  if (N < 1 || nmax < N) throw Error("config", "direction count must satisfy 1 <= N <= nmax");
  std::vector<Subspace> out;
  out.reserve(N);
  if (kind == "equispaced") {
    if (n == 2) {
      int bits = 0;
      while ((1 << bits) < nmax) ++bits;
      const int grid = 1 << bits;
      for (int i = 0; i < N; ++i) {
        const double u = (bit_reverse(static_cast<uint32_t>(i), bits) + 0.5) / grid;
        out.push_back(from_angle(aperture * (2.0 * u - 1.0)));
      }
    } else {
      const double rad = std::sin(aperture);
      for (int i = 0; i < N; ++i) out.push_back(from_disc(n, rad, halton(i + 1, 2), halton(i + 1, 3)));
    }
    return out;
  }
  if (kind == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < N; ++i) {
      if (n == 2)
        out.push_back(from_angle(aperture * (2.0 * u(rng) - 1.0)));
      else {
        const double a = u(rng), b = u(rng);
        out.push_back(from_disc(n, std::sin(aperture), a, b));
      }
    }
    return out;
  }
  throw Error("config", "unknown direction set kind '" + kind + "'");
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const size_t n = x.size();
  if (n < 2) return f;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

GrowthResult opnorm_growth_experiment(const GrowthConfig& cfg) {
  if (!cfg.m.eval) throw Error("config", "growth experiment needs a multiplier");
  if (cfg.N_list.empty()) throw Error("config", "N_list is empty");
  const TorusSpec& spec = cfg.spec;
  const int n = spec.n, d = n - 1;
  std::vector<int> Ns = cfg.N_list;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  if (Ns.front() < 1) throw Error("config", "N must be positive");
  const int nmax = Ns.back();

  GrowthResult res;
  res.N = Ns;
  // Normals within the Gamma_0 aperture, where the cone cutoff is flat.
  res.aperture = 2.0 * std::asin(0.5 * cfg.cone.inner());
  const std::vector<Subspace> dirs =
      direction_set(n, nmax, nmax, res.aperture, cfg.directions, cfg.seed ^ 0x5bd1e995ULL);
  const std::vector<Rotation> Qs = so_net(d, cfg.rotations, static_cast<unsigned>(cfg.seed));

  struct Input {
    std::string name;
    uint64_t seed;
    GridFunction f;
  };
  std::vector<Input> inputs;
  for (int t = 0; t < cfg.trials; ++t) {
    const uint64_t s = cfg.seed * 1000 + t;
    std::mt19937_64 rng(s);
    inputs.push_back({"random", s, random_band_limited(spec, cfg.cone, true, rng)});
  }
  if (cfg.adversarial) {
    // Unit impulse at the centre, projected to the band and renormalized.
    GridFunction delta(spec);
    std::vector<int> mid(n, spec.M / 2);
    delta.at(spec.flat_index(mid)) = 1.0;
    GridFunction g = project_cone(project_annulus(delta, 0.0), cfg.cone);
    std::vector<cplx> v = g.values();
    const double nr = g.l2_norm();
    for (auto& z : v) z /= nr;
    inputs.push_back({"impulse", cfg.seed, GridFunction::from_values(spec, std::move(v))});

    // Energy on lattice frequencies within two angular lattice steps of the
    // coarsest split lines (xi' parallel to v_sigma), random phases.
    std::mt19937_64 rng(cfg.seed * 7919);
    std::normal_distribution<double> g01;
    const std::vector<Subspace> coarse = std::vector<Subspace>(dirs.begin(), dirs.begin() + Ns.front());
    std::vector<cplx> c(spec.size(), 0.0);
    for (size_t k = 0; k < spec.size(); ++k) {
      const Vec xi = spec.frequency(k);
      const double r = xi.norm();
      const double a = g01(rng), b = g01(rng);
      if (r <= 1.0 || r >= 1.5 || !cfg.cone.in_gamma0(xi)) continue;
      const double tol = 2.0 / (spec.L * r);
      for (const Subspace& s : coarse)
        if ((xi / r - s.normal * s.normal.dot(xi / r)).norm() < tol) {
          c[k] = cplx(a, b);
          break;
        }
    }
    GridFunction h = GridFunction::from_spectrum(spec, c);
    const double hn = h.spectral_l2_norm();
    if (hn > 0.0) {
      for (auto& z : c) z /= hn;
      inputs.push_back({"boundary", cfg.seed, GridFunction::from_spectrum(spec, std::move(c))});
    }
  }

  res.r.assign(Ns.size(), 0.0);
  const double cell = spec.cell_volume();
  for (const Input& in : inputs) {
    const GridFunction g = project_cone(project_annulus(in.f, 0.0), cfg.cone);
    std::vector<double> run(spec.size(), 0.0);
    int done = 0;
    for (size_t i = 0; i < Ns.size(); ++i) {
      const std::vector<Subspace> chunk(dirs.begin() + done, dirs.begin() + Ns[i]);
      if (!chunk.empty()) {
        const std::vector<double> mx = maximal_directional(g, cfg.m, chunk, Qs);
        for (size_t j = 0; j < run.size(); ++j) run[j] = std::max(run[j], mx[j]);
      }
      done = Ns[i];
      const double r = l2(run, cell) / in.f.l2_norm();
      res.rows.push_back({Ns[i], r, in.name, in.seed});
      res.r[i] = std::max(res.r[i], r);
    }
  }
  std::vector<double> logN;
  for (size_t i = 0; i < Ns.size(); ++i) {
    res.rows.push_back({Ns[i], res.r[i], "max", cfg.seed});
    logN.push_back(std::log(static_cast<double>(Ns[i])));
    res.ratio_sqrtN.push_back(res.r[i] / std::sqrt(static_cast<double>(Ns[i])));
    if (i > 0 && res.r[i] < res.r[i - 1]) res.monotone = false;
  }
  res.fit = fit_line(logN, res.r);
  return res;
}

std::string growth_csv(const GrowthResult& res) {
  std::ostringstream os;
  os.precision(12);
  os << "N,r,estimator,seed\n";
  for (const GrowthRow& r : res.rows) os << r.N << ',' << r.r << ',' << r.estimator << ',' << r.seed << '\n';
  return os.str();
}

std::vector<std::string> differentiation_fields() {
  return {"iid", "checkerboard", "stripes", "radial", "pointwise_worst"};
}

double single_mode_average_error(const Vec& xi, const Subspace& sigma, double h) {
  return std::abs(1.0 - gamma_hat((h * (projection(sigma) * xi)).norm()));
}

DifferentiationResult differentiation_experiment(const DifferentiationConfig& cfg) {
  const TorusSpec& spec = cfg.spec;
  const int n = spec.n;
  DifferentiationResult res;
  res.fields = differentiation_fields();
  const double aperture = 2.0 * std::asin(0.5 * cfg.cone.outer());
  const int K = cfg.directions;
  const std::vector<Subspace> dirs = direction_set(n, K, K, aperture, "equispaced", cfg.seed);

  // Field assignments (the worst field is formed per h below).
  std::mt19937_64 frng(cfg.seed * 31 + 7);
  std::uniform_int_distribution<int> pick(0, K - 1);
  std::vector<std::vector<int>> assign(4, std::vector<int>(spec.size()));
  for (size_t j = 0; j < spec.size(); ++j) {
    const std::vector<int> mi = spec.multi_index(j);
    const Vec x = spec.position(j);
    assign[0][j] = pick(frng);
    int parity = 0;
    for (int a = 0; a < n; ++a) parity += mi[a];
    assign[1][j] = (parity % 2) * (K - 1);
    assign[2][j] = (mi[0] / 2) % K;
    const double ang = std::atan2(x(1) - 0.5 * spec.L, x(0) - 0.5 * spec.L);
    assign[3][j] = std::min(K - 1, static_cast<int>((ang + kPi) / (2.0 * kPi) * K));
  }

  for (int fi = 0; fi < cfg.functions; ++fi) {
    // Gaussian-weighted random spectrum plus a small algebraic tail.
    std::mt19937_64 rng(cfg.seed * 100003 + fi);
    std::normal_distribution<double> g01;
    const double width = 0.25 + 0.05 * fi;
    std::vector<cplx> c(spec.size());
    for (size_t k = 0; k < spec.size(); ++k) {
      const double r = spec.frequency(k).norm();
      const double a = g01(rng), b = g01(rng);
      const double w = std::exp(-0.5 * r * r / (width * width)) + 1e-3 * std::pow(1.0 + r, -4.0);
      c[k] = w * cplx(a, b);
    }
    const GridFunction f = GridFunction::from_spectrum(spec, std::move(c));
    const std::string fname = "smooth_" + std::to_string(fi);
    std::vector<std::vector<double>> sup(res.fields.size(), std::vector<double>(cfg.kmax, 0.0));
    for (int k = 1; k <= cfg.kmax; ++k) {
      const double h = std::pow(2.0, -k);
      std::vector<std::vector<double>> err(K);
#pragma omp parallel for schedule(dynamic)
      for (int s = 0; s < K; ++s) {
        const GridFunction A = subspace_average(f, dirs[s], h);
        std::vector<double> e(spec.size());
        for (size_t j = 0; j < spec.size(); ++j) e[j] = std::abs(A.values()[j] - f.values()[j]);
        err[s] = std::move(e);
      }
      for (size_t j = 0; j < spec.size(); ++j) {
        double worst = 0.0;
        for (int s = 0; s < K; ++s) worst = std::max(worst, err[s][j]);
        for (int fld = 0; fld < 4; ++fld)
          sup[fld][k - 1] = std::max(sup[fld][k - 1], err[assign[fld][j]][j]);
        sup[4][k - 1] = std::max(sup[4][k - 1], worst);
      }
    }
    for (size_t fld = 0; fld < res.fields.size(); ++fld) {
      bool dec = true;
      for (int k = 1; k <= cfg.kmax; ++k) {
        res.rows.push_back({fname, res.fields[fld], k, sup[fld][k - 1]});
        if (k > 1 && !(sup[fld][k - 1] < sup[fld][k - 2])) dec = false;
      }
      ++res.sequences;
      if (dec)
        ++res.decreasing;
      else
        res.failures.push_back(fname + "/" + res.fields[fld]);
    }
  }
  return res;
}

std::string differentiation_csv(const DifferentiationResult& res) {
  std::ostringstream os;
  os.precision(12);
  os << "function,field,k,h,sup_error\n";
  for (const auto& r : res.rows)
    os << r.function << ',' << r.field << ',' << r.k << ',' << std::pow(2.0, -r.k) << ','
       << r.sup_error << '\n';
  return os.str();
}

}  // namespace grsio
