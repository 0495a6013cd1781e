/**
 * @file operators.cpp
 * @brief Spectral operators on the torus and their maximal versions.
 */
#include "grsio/operators.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

namespace grsio {

GridFunction project_annulus(const GridFunction& f, double k) {
  const double sc = std::pow(2.0, -k);
  return f.multiply_spectrum([sc](const Vec& xi) { return cplx(zeta(sc * xi.norm())); });
}

GridFunction project_cone(const GridFunction& f, const ConeProfile& cone) {
  return f.multiply_spectrum([&cone](const Vec& xi) { return cplx(cone(xi)); });
}

Mat directional_frame(const Subspace& sigma, const Rotation& Q) {
  const int n = sigma.n(), d = n - 1;
  if (Q.n() != d) throw Error("dimension", "Q must act on R^d");
  Mat Qext = Mat::Identity(n, n);
  Qext.topLeftCorner(d, d) = Q.matrix;
  return Qext * canonical_rotation(sigma).matrix * projection(sigma);
}

cplx directional_symbol(const MultiplierFamily& m, const Subspace& sigma, const Mat& OQ,
                        const Vec& xi) {
  const Vec eta = (OQ * xi).head(m.d);
  const cplx val = m(sigma, eta);
  if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
    std::string where;
    for (int i = 0; i < xi.size(); ++i) where += (i ? "," : "") + std::to_string(xi(i));
    throw Error("symbol", "multiplier evaluation failed at xi=(" + where + ")");
  }
  return val;
}

GridFunction directional_apply(const GridFunction& f, const MultiplierFamily& m,
                               const Subspace& sigma, const Rotation& Q) {
  if (sigma.n() != f.spec().n) throw Error("dimension", "subspace and torus dimensions differ");
  if (m.d != sigma.d()) throw Error("dimension", "multiplier acts on R^" + std::to_string(m.d));
  const Mat OQ = directional_frame(sigma, Q);
  return f.multiply_spectrum([&](const Vec& xi) { return directional_symbol(m, sigma, OQ, xi); });
}

std::vector<double> directional_abs(const GridFunction& f, const MultiplierFamily& m,
                                    const Subspace& sigma, const Rotation& Q) {
  const GridFunction g = directional_apply(f, m, sigma, Q);
  std::vector<double> a(g.values().size());
  for (size_t i = 0; i < a.size(); ++i) a[i] = std::abs(g.values()[i]);
  return a;
}

namespace {

// Pointwise max over slices 0..count-1 of slice(i), in parallel.
template <class Slice>
std::vector<double> parallel_max(size_t size, int count, Slice slice) {
  std::vector<double> result(size, 0.0);
  if (count <= 0) return result;
  // Exceptions must not escape an OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel
  {
    std::vector<double> local(size, 0.0);
#pragma omp for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
      try {
        const std::vector<double> a = slice(i);
        for (size_t j = 0; j < size; ++j) local[j] = std::max(local[j], a[j]);
      } catch (...) {
#pragma omp critical(grsio_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(grsio_merge)
    for (size_t j = 0; j < size; ++j) result[j] = std::max(result[j], local[j]);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

template <class Slice>
std::vector<double> serial_max(size_t size, int count, Slice slice) {
  std::vector<double> result(size, 0.0);
  for (int i = 0; i < count; ++i) {
    const std::vector<double> a = slice(i);
    for (size_t j = 0; j < size; ++j) result[j] = std::max(result[j], a[j]);
  }
  return result;
}

std::vector<double> abs_values(const GridFunction& g) {
  std::vector<double> a(g.values().size());
  for (size_t i = 0; i < a.size(); ++i) a[i] = std::abs(g.values()[i]);
  return a;
}

void require_nonempty(size_t k, const char* what) {
  if (k == 0) throw Error("empty", std::string(what) + " must be nonempty");
}

}  // namespace

std::vector<double> maximal_directional(const GridFunction& f, const MultiplierFamily& m,
                                        const std::vector<Subspace>& Sigma,
                                        const std::vector<Rotation>& Qs) {
  require_nonempty(Sigma.size(), "Sigma");
  require_nonempty(Qs.size(), "Qs");
  f.spectrum();  // populate the cache before threads read it
  const int nq = static_cast<int>(Qs.size());
  return parallel_max(f.values().size(), static_cast<int>(Sigma.size()) * nq, [&](int i) {
    return directional_abs(f, m, Sigma[i / nq], Qs[i % nq]);
  });
}

std::vector<double> maximal_directional_serial(const GridFunction& f, const MultiplierFamily& m,
                                               const std::vector<Subspace>& Sigma,
                                               const std::vector<Rotation>& Qs) {
  require_nonempty(Sigma.size(), "Sigma");
  require_nonempty(Qs.size(), "Qs");
  const int nq = static_cast<int>(Qs.size());
  return serial_max(f.values().size(), static_cast<int>(Sigma.size()) * nq, [&](int i) {
    return directional_abs(f, m, Sigma[i / nq], Qs[i % nq]);
  });
}

std::vector<Rotation> so_net(int d, int count, unsigned seed) {
  std::vector<Rotation> out;
  if (d == 1 || count <= 1) {
    out.push_back(Rotation{Mat::Identity(d, d)});
    return out;
  }
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * k / count;
      Mat R(2, 2);
      R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      out.push_back(Rotation{R});
    }
    return out;
  }
  if (d == 3) {
    out.push_back(Rotation{Mat::Identity(3, 3)});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (int k = 1; k < count; ++k) {
      Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
      q.normalize();
      out.push_back(Rotation{q.toRotationMatrix()});
    }
    return out;
  }
  throw Error("dimension", "rotation nets are provided for d <= 3");
}

std::vector<double> carleson_sjolin(const GridFunction& f, const MultiplierFamily& m0,
                                    const std::vector<Vec>& Ngrid) {
  require_nonempty(Ngrid.size(), "Ngrid");
  if (m0.d != f.spec().n) throw Error("dimension", "base symbol must act on the torus dimension");
  const Subspace dummy = Subspace::horizontal(m0.d + 1);
  f.spectrum();
  return parallel_max(f.values().size(), static_cast<int>(Ngrid.size()), [&](int i) {
    const Vec& N = Ngrid[i];
    return abs_values(f.multiply_spectrum([&](const Vec& eta) { return m0(dummy, eta + N); }));
  });
}

std::vector<double> carleson_sjolin_serial(const GridFunction& f, const MultiplierFamily& m0,
                                           const std::vector<Vec>& Ngrid) {
  require_nonempty(Ngrid.size(), "Ngrid");
  const Subspace dummy = Subspace::horizontal(m0.d + 1);
  return serial_max(f.values().size(), static_cast<int>(Ngrid.size()), [&](int i) {
    const Vec& N = Ngrid[i];
    return abs_values(f.multiply_spectrum([&](const Vec& eta) { return m0(dummy, eta + N); }));
  });
}

std::vector<double> hl_maximal(const TorusSpec& spec, const std::vector<double>& g) {
  const int n = spec.n, M = spec.M;
  const size_t N = spec.size();
  // Periodic window sums of half-width r, applied axis by axis.
  auto window_sum = [&](const std::vector<double>& a, int r) {
    std::vector<double> cur = a, next(N);
    std::vector<double> pre(3 * M + 1);
    size_t stride = 1;
    for (int axis = n - 1; axis >= 0; --axis) {
      for (size_t base = 0; base < N; ++base) {
        if ((base / stride) % M != 0) continue;
        pre[0] = 0.0;
        for (int t = 0; t < 3 * M; ++t) pre[t + 1] = pre[t] + cur[base + (t % M) * stride];
        for (int t = 0; t < M; ++t) {
          const double s = (2 * r + 1 >= M) ? pre[M] : pre[t + r + M + 1] - pre[t - r + M];
          next[base + t * stride] = s;
        }
      }
      cur.swap(next);
      stride *= M;
    }
    return cur;
  };
  std::vector<double> best(g);
  for (int r = 1; r <= M / 2; r *= 2) {
    const std::vector<double> s = window_sum(g, r);
    const double vol = std::pow(std::min(2 * r + 1, M), n);
    for (size_t i = 0; i < N; ++i) best[i] = std::max(best[i], s[i] / vol);
  }
  return best;
}

TransferenceReport cs_transference_error(const GridFunction& f, const MultiplierFamily& m0,
                                         const std::vector<Vec>& shift_fractions, double R,
                                         double R0, double eps, double c0) {
  const TorusSpec& fs = f.spec();
  const int d = fs.n, n = d + 1;
  if (m0.d != d) throw Error("dimension", "base symbol must act on R^d");
  if (!(2.0 * R0 < c0 * eps * R)) throw Error("smallness", "need 2 R0 < c0 eps R");
  // Lift frequency must sit on the lattice of the last axis.
  R = std::ceil(R * fs.L) / fs.L;
  TransferenceReport rep;
  rep.R = R;

  const TorusSpec ns(n, fs.L, fs.M);
  const auto& fhat = f.spectrum();
  // Demodulated lift: spectrum f^(eta) * psi^(k) with k the offset from R.
  std::vector<cplx> Fhat(ns.size(), 0.0);
  for (size_t i = 0; i < ns.size(); ++i) {
    const Vec xi = ns.frequency(i);
    const double pk = gamma_hat(std::abs(xi(d)));
    if (pk == 0.0) continue;
    std::vector<int> idx = ns.multi_index(i);
    idx.pop_back();
    const cplx c = fhat[fs.flat_index(idx)];
    if (c != cplx(0.0)) Fhat[i] = c * pk;
  }
  const GridFunction F = GridFunction::from_spectrum(ns, Fhat);
  std::vector<double> absF(ns.size());
  for (size_t i = 0; i < absF.size(); ++i) absF[i] = std::abs(F.values()[i]);
  const std::vector<double> MF = hl_maximal(ns, absF);
  rep.max_maximal = *std::max_element(MF.begin(), MF.end());

  const Rotation Id{Mat::Identity(d, d)};
  for (const Vec& frac : shift_fractions) {
    if (frac.norm() > 1.0 + 1e-12) throw Error("shift", "shift fractions must lie in the unit ball");
    const Vec N = c0 * eps * R * frac;
    const Subspace sigma = subspace_from_shift(N, R);
    rep.dists.push_back(dist(sigma, Subspace::horizontal(n)));
    rep.shift_roundtrip.push_back((shift_of(sigma, R) - N).norm());
    const Mat OQ = directional_frame(sigma, Id);
    std::vector<cplx> G(ns.size(), 0.0);
    for (size_t i = 0; i < ns.size(); ++i) {
      if (Fhat[i] == cplx(0.0)) continue;
      Vec xi = ns.frequency(i);
      const Vec eta = xi.head(d);
      xi(d) += R;  // true frequency of the modulated lift
      const cplx full = directional_symbol(m0, sigma, OQ, xi);
      const cplx cs = m0(sigma, eta + N);
      G[i] = Fhat[i] * (full - cs);
    }
    const GridFunction E = GridFunction::from_spectrum(ns, std::move(G));
    rep.max_error = std::max(rep.max_error, E.sup_abs());
  }
  rep.ratio = rep.max_maximal > 0.0 ? rep.max_error / rep.max_maximal : 0.0;
  return rep;
}

GridFunction subspace_average(const GridFunction& f, const Subspace& sigma, double h) {
  if (!(h > 0.0)) throw Error("scale", "h must be positive");
  const Mat P = projection(sigma);
  return f.multiply_spectrum([&](const Vec& xi) { return cplx(gamma_hat(h * (P * xi).norm())); });
}

namespace {
std::vector<double> truncated_slice(const GridFunction& f, const MultiplierFamily& m,
                                    const Subspace& sigma, const Rotation& Q, double h) {
  const Mat OQ = directional_frame(sigma, Q);
  const Mat P = projection(sigma);
  return abs_values(f.multiply_spectrum([&](const Vec& xi) {
    return directional_symbol(m, sigma, OQ, xi) * gamma_hat(h * (P * xi).norm());
  }));
}
}  // namespace

std::vector<double> maximal_truncated(const GridFunction& f, const MultiplierFamily& m,
                                      const std::vector<Subspace>& Sigma,
                                      const std::vector<Rotation>& Qs,
                                      const std::vector<double>& hs) {
  require_nonempty(Sigma.size(), "Sigma");
  require_nonempty(Qs.size(), "Qs");
  require_nonempty(hs.size(), "hs");
  f.spectrum();
  const int nq = static_cast<int>(Qs.size()), nh = static_cast<int>(hs.size());
  return parallel_max(f.values().size(), static_cast<int>(Sigma.size()) * nq * nh, [&](int i) {
    return truncated_slice(f, m, Sigma[i / (nq * nh)], Qs[(i / nh) % nq], hs[i % nh]);
  });
}

std::vector<double> maximal_truncated_serial(const GridFunction& f, const MultiplierFamily& m,
                                             const std::vector<Subspace>& Sigma,
                                             const std::vector<Rotation>& Qs,
                                             const std::vector<double>& hs) {
  require_nonempty(Sigma.size(), "Sigma");
  require_nonempty(Qs.size(), "Qs");
  require_nonempty(hs.size(), "hs");
  const int nq = static_cast<int>(Qs.size()), nh = static_cast<int>(hs.size());
  return serial_max(f.values().size(), static_cast<int>(Sigma.size()) * nq * nh, [&](int i) {
    return truncated_slice(f, m, Sigma[i / (nq * nh)], Qs[(i / nh) % nq], hs[i % nh]);
  });
}

double weak_l2_quasinorm(const std::vector<double>& absg, double cell_volume) {
  std::vector<double> v(absg);
  std::sort(v.begin(), v.end(), std::greater<double>());
  double best = 0.0;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] <= 0.0) break;
    // For lambda just below v[k], at least k+1 samples exceed lambda.
    best = std::max(best, v[k] * std::sqrt(static_cast<double>(k + 1) * cell_volume));
  }
  return best;
}

double l2_norm_of(const std::vector<double>& absg, double cell_volume) {
  double s = 0.0;
  for (double a : absg) s += a * a;
  return std::sqrt(s * cell_volume);
}

GridFunction random_band_limited(const TorusSpec& spec, const ConeProfile& cone, bool cone_only,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(spec.size(), 0.0);
  for (size_t i = 0; i < c.size(); ++i) {
    const Vec xi = spec.frequency(i);
    const double r = xi.norm();
    double w;
    if (cone_only)
      w = (r > 1.0 && r < 1.5) ? cone.angular(ConeProfile::chord_to_pole(xi)) : 0.0;
    else
      w = (r > 0.5 && r < 2.0) ? 1.0 : 0.0;
    const double a = g(rng), b = g(rng);
    if (w > 0.0) c[i] = w * cplx(a, b);
  }
  GridFunction f = GridFunction::from_spectrum(spec, c);
  const double nrm = f.spectral_l2_norm();
  if (nrm > 0.0)
    for (auto& z : c) z /= nrm;
  return GridFunction::from_spectrum(spec, std::move(c));
}

}  // namespace grsio
