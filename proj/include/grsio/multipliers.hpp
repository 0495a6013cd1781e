/**
 * @file multipliers.hpp
 * @brief Families sigma -> m_sigma of Mihlin symbols on R^d and sampled norm estimates.
 */
#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "grsio/grassmann.hpp"

namespace grsio {

struct MultiplierFamily {
  int d = 1;
  int order = 0;                 ///< declared smoothness A
  std::string label;
  bool sigma_independent = true;
  std::function<cplx(const Subspace&, const Vec&)> eval;

  cplx operator()(const Subspace& s, const Vec& eta) const { return eval(s, eta); }
};

/// Sample lattice for Mihlin norm estimation.
struct MihlinSamples {
  int radii = 25;         ///< log-spaced |eta| in [rmin, rmax]
  int directions = 16;    ///< per sphere (ignored for d = 1, where ±1 is used)
  double rmin = 1e-3;
  double rmax = 1e3;
  double step = 1e-3;     ///< finite-difference step relative to |eta|
};

struct NormReport {
  double mihlin_sup = 0.0;
  double holder_sup = 0.0;
  bool unstable = false;  ///< holder term grows as pairs approach each other
  int pairs_used = 0;
  MihlinSamples samples;
};

/// Smoothed sign: exactly ±1 for |x| >= eps, odd and C^infinity.
double smoothed_sign(double x, double eps);

/// Max over samples and |alpha| <= A of |eta|^|alpha| |D^alpha m_sigma(eta)|.
double mihlin_norm_estimate(const MultiplierFamily& m, const Subspace& sigma, int A,
                            const MihlinSamples& samples = {});

/// Same estimate for the difference m_tau - m_sigma.
double mihlin_difference_estimate(const MultiplierFamily& m, const Subspace& sigma,
                                  const Subspace& tau, int A, const MihlinSamples& samples);

NormReport family_norm_estimate(const MultiplierFamily& m, int A,
                                const std::vector<std::pair<Subspace, Subspace>>& pairs,
                                const MihlinSamples& samples = {});

/// Catalogue: constant_one, hilbert_smoothed(eps), riesz_component(k),
/// cs_shift(N1;N2;...) [compact bump base], plus explicit factories below.
MultiplierFamily builtin(const std::string& label, int d);

MultiplierFamily constant_one(int d);
MultiplierFamily hilbert_smoothed(int d, double eps);
MultiplierFamily riesz_component(int d, int k, double eps = 1e-6);
MultiplierFamily cs_shift(const MultiplierFamily& m0, const Vec& N);
MultiplierFamily custom(int d, int order, std::string label, bool sigma_independent,
                        std::function<cplx(const Subspace&, const Vec&)> f);

/// Radial compactly supported bump on R^d used as Carleson-Sjolin base symbol:
/// 1 on |eta| <= r/2, 0 for |eta| >= r.
MultiplierFamily compact_bump(int d, double r);

}  // namespace grsio
