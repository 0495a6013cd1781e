/**
 * @file operators.hpp
 * @brief Spectral projections, directional multipliers and their maximal
 *        versions on the periodic lattice.
 *
 * Every maximal operator has an OpenMP implementation (parallel over the
 * family of slices, per-thread running max, final merge) and a `_serial`
 * reference that the tests and benchmarks compare against.
 */
#pragma once

#include <random>
#include <vector>

#include "grsio/multipliers.hpp"
#include "grsio/profiles.hpp"
#include "grsio/torus.hpp"

namespace grsio {

GridFunction project_annulus(const GridFunction& f, double k);
GridFunction project_cone(const GridFunction& f, const ConeProfile& cone);

/// m_sigma evaluated at Q O_sigma P_sigma xi (first d coordinates).
cplx directional_symbol(const MultiplierFamily& m, const Subspace& sigma, const Mat& OQ,
                        const Vec& xi);
/// Precomputed product Q * O_sigma restricted to the first d output rows is
/// what directional_symbol expects; this builds it.
Mat directional_frame(const Subspace& sigma, const Rotation& Q);

GridFunction directional_apply(const GridFunction& f, const MultiplierFamily& m,
                               const Subspace& sigma, const Rotation& Q);

/// |.| of a directional multiplier output, one slice of a maximal operator.
std::vector<double> directional_abs(const GridFunction& f, const MultiplierFamily& m,
                                    const Subspace& sigma, const Rotation& Q);

std::vector<double> maximal_directional(const GridFunction& f, const MultiplierFamily& m,
                                        const std::vector<Subspace>& Sigma,
                                        const std::vector<Rotation>& Qs);
std::vector<double> maximal_directional_serial(const GridFunction& f, const MultiplierFamily& m,
                                               const std::vector<Subspace>& Sigma,
                                               const std::vector<Rotation>& Qs);

/// Quasi-uniform sample of SO(d): d = 1 gives {Id}, d = 2 equispaced angles,
/// d = 3 seeded random unit quaternions.
std::vector<Rotation> so_net(int d, int count, unsigned seed = 7);

/// sup over shifts N of |(m0(. + N) f^)^vee| for f on a d-torus.
std::vector<double> carleson_sjolin(const GridFunction& f, const MultiplierFamily& m0,
                                    const std::vector<Vec>& Ngrid);
std::vector<double> carleson_sjolin_serial(const GridFunction& f, const MultiplierFamily& m0,
                                           const std::vector<Vec>& Ngrid);

/// Result of the transference error measurement.
struct TransferenceReport {
  double ratio = 0.0;        ///< max_sigma sup|Err_sigma F| / sup M F
  double max_error = 0.0;
  double max_maximal = 0.0;
  double R = 0.0;            ///< frequency lift actually used (multiple of 1/L)
  std::vector<double> dists; ///< dist(sigma, R^d) of the sampled subspaces
  std::vector<double> shift_roundtrip;  ///< |N(sigma) - N|
};

/// The n = d+1 lifted function F(y, x_n) = f(y) psi(x_n) e^{2 pi i R x_n} is
/// handled in demodulated form, so only |F| and |Err F| are ever formed.
/// Shifts are N = c0 eps R * frac for each frac in shift_fractions (|frac| <= 1).
TransferenceReport cs_transference_error(const GridFunction& f, const MultiplierFamily& m0,
                                         const std::vector<Vec>& shift_fractions, double R,
                                         double R0, double eps, double c0 = 0.5);

/// Centered-cube Hardy-Littlewood maximal function on the lattice (cube
/// half-widths 0, 1, 2, 4, ... cells), computed with periodic summed tables.
std::vector<double> hl_maximal(const TorusSpec& spec, const std::vector<double>& g);

GridFunction subspace_average(const GridFunction& f, const Subspace& sigma, double h);

std::vector<double> maximal_truncated(const GridFunction& f, const MultiplierFamily& m,
                                      const std::vector<Subspace>& Sigma,
                                      const std::vector<Rotation>& Qs,
                                      const std::vector<double>& hs);
std::vector<double> maximal_truncated_serial(const GridFunction& f, const MultiplierFamily& m,
                                             const std::vector<Subspace>& Sigma,
                                             const std::vector<Rotation>& Qs,
                                             const std::vector<double>& hs);

/// sup over lambda of lambda |{|g| > lambda}|^{1/2}; evaluated exactly at the
/// sorted sample levels (limit from below), which dominates any lambda grid.
double weak_l2_quasinorm(const std::vector<double>& absg, double cell_volume);
double l2_norm_of(const std::vector<double>& absg, double cell_volume);

/// Random band-limited function with spectrum inside Gamma_1 ∩ Ann(1, 3/2)
/// (cone=true) or Ann(1/2, 2) (cone=false), normalized to unit L2 norm.
GridFunction random_band_limited(const TorusSpec& spec, const ConeProfile& cone, bool cone_only,
                                 std::mt19937_64& rng);

}  // namespace grsio
