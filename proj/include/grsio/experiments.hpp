/**
 * @file experiments.hpp
 * @brief The two scaling experiments run on the lattice: growth of the
 *        maximal directional operator norm with the number of directions,
 *        and pointwise convergence of subspace averages along measurable
 *        direction fields.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grsio/operators.hpp"

namespace grsio {

/// N subspaces near e_n^perp whose normals make angle at most `aperture` with
/// e_n.  Prefixes are nested: direction_set(n, N, ...) starts with
/// direction_set(n, N', ...) for N' <= N when the same nmax is passed.
///   equispaced: n = 2 uses the bit-reversed order of an nmax-point angular
///               grid, so power-of-two prefixes are equispaced; n >= 3 uses a
///               Halton sequence in the chart disc.
///   random:     i.i.d. uniform angles (n = 2) or chart points (n >= 3).
std::vector<Subspace> direction_set(int n, int N, int nmax, double aperture,
                                    const std::string& kind, uint64_t seed);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct GrowthConfig {
  TorusSpec spec{2, 64.0, 512};
  ConeProfile cone{std::pow(3.0, -5)};
  MultiplierFamily m;
  std::vector<int> N_list{8, 16, 32, 64, 128, 256, 512, 1024};
  std::string directions = "equispaced";
  int trials = 4;          ///< random band-limited inputs
  bool adversarial = true; ///< add the impulse and boundary inputs
  int rotations = 1;       ///< size of the SO(d) net
  uint64_t seed = 1;
};

struct GrowthRow {
  int N = 0;
  double r = 0.0;
  std::string estimator;
  uint64_t seed = 0;
};

struct GrowthResult {
  std::vector<GrowthRow> rows;   ///< one row per (N, input) plus the "max" rows
  std::vector<int> N;
  std::vector<double> r;         ///< max over inputs
  bool monotone = true;
  LinearFit fit;                 ///< r against log N
  std::vector<double> ratio_sqrtN;
  double aperture = 0.0;
};

/// r(N) = max over unit-norm inputs f of ||maximal_directional(P_0 P_cn f)||_2.
GrowthResult opnorm_growth_experiment(const GrowthConfig& cfg);
std::string growth_csv(const GrowthResult& res);

struct DifferentiationConfig {
  TorusSpec spec{2, 16.0, 128};
  ConeProfile cone{std::pow(3.0, -5)};
  int functions = 10;
  int directions = 16;
  int kmax = 8;            ///< h = 2^{-k}, k = 1..kmax
  uint64_t seed = 1;
};

struct DifferentiationRow {
  std::string function;
  std::string field;
  int k = 0;
  double sup_error = 0.0;
};

struct DifferentiationResult {
  std::vector<DifferentiationRow> rows;
  int sequences = 0;
  int decreasing = 0;          ///< sequences strictly decreasing in k
  std::vector<std::string> fields;
  std::vector<std::string> failures;
};

/// Names of the adversarial direction fields, in evaluation order.
std::vector<std::string> differentiation_fields();

/// sup_x |A_{sigma(x),h} f(x) - f(x)| for smooth band-limited-plus-tail f and
/// the measurable fields of differentiation_fields().
DifferentiationResult differentiation_experiment(const DifferentiationConfig& cfg);
std::string differentiation_csv(const DifferentiationResult& res);

/// Closed form of the same error for a single mode: |1 - gamma^(h P_sigma xi)| |f|.
double single_mode_average_error(const Vec& xi, const Subspace& sigma, double h);

}  // namespace grsio
