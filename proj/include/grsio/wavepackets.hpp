/**
 * @file wavepackets.hpp
 * @brief Nets on the spherical cap, the squared partition of unity, the
 *        single-scale kernels phi_beta and psi_s, the frame identity check,
 *        and canonical wave packets evaluated by spectral quadrature.
 *
 * Two numerical back ends are used.  Nets, phi_beta, psi_s and the frame
 * identity live on the periodic lattice.  Tile packets, whose caps are far
 * below any affordable lattice resolution, are handled in the continuum: every
 * inner product is a quadrature over the (small) frequency support of one of
 * the packets involved.
 */
#pragma once

#include <random>
#include <vector>

#include "grsio/multipliers.hpp"
#include "grsio/profiles.hpp"
#include "grsio/tiling.hpp"
#include "grsio/torus.hpp"
#include "grsio/trees.hpp"

namespace grsio {

// ---------------------------------------------------------------- nets

struct CapNet {
  int n = 2;
  int kappa = 1;
  double s = 1.0;
  double alpha = 1.0 / 729.0;
  double r = 0.0;          ///< covering radius 3^{-kappa} / s
  double spacing = 0.0;    ///< chart lattice spacing
  bool singleton = false;
  std::vector<Vec> points; ///< unit vectors near e_n

  double cap_chord() const { return 243.0 * alpha; }
};

/// Lattice net in the chart, aligned so that centers of standard cubes of
/// side 27/s are net points.  Throws when s is not an admissible scale.
CapNet build_net(int n, double s, int kappa, const ConeProfile& cone);

struct NetReport {
  double min_separation = 0.0;   ///< min pairwise chord distance
  double max_gap = 0.0;          ///< largest distance from a sample to the net
  int max_multiplicity = 0;      ///< max number of balls B(beta, r) containing a sample
  bool covers = true;
  bool separated = true;         ///< balls of radius r/3 pairwise disjoint
  bool inner_plateau = true;     ///< theta_beta = 1 on B(beta, r/3) for every beta
};
NetReport check_net(const CapNet& net, int samples, std::mt19937_64& rng);

/// Uniform sample of unit vectors whose chord distance to e_n is below `chord`.
Vec random_cap_direction(int n, double chord, std::mt19937_64& rng);

/// Bump of radius r around beta (value 1 on B(beta, r/2)).
double cap_bump(const Vec& beta, double r, const Vec& unit_dir);

/// theta_beta(unit_dir) for every net point (zero vector when no bump is active).
/// A singleton net gives theta = 1 everywhere.
std::vector<double> partition_values(const CapNet& net, const Vec& unit_dir);
double partition_sum_squares(const CapNet& net, const Vec& unit_dir);

/// Max over samples of the k-th derivative of theta_beta along great circles,
/// k = 1..3, by central finite differences.
std::vector<double> partition_derivative_sizes(const CapNet& net, int samples,
                                               std::mt19937_64& rng);

// ---------------------------------------------------------------- lattice kernels

/// phi_beta with spectrum theta_beta(xi') zeta(|xi|).
GridFunction phi_beta(const TorusSpec& spec, const CapNet& net, int beta_index);

/// psi_s(., sigma) with spectrum m_sigma(O_sigma P_sigma xi) Psi~(s |P_sigma xi|) Phi(|xi|).
GridFunction psi_kernel(const TorusSpec& spec, const MultiplierFamily& m, const Subspace& sigma,
                        double s);

struct FrameReport {
  double rel_error = 0.0;
  double lattice_step = 0.0;   ///< a, sampling step of the translation lattice
  int terms = 0;               ///< number of net points used
  double output_norm = 0.0;
};

/// Path A: correlate with each Tr_z phi_beta, sample on a lattice a Z^n with
/// 1/a above the spectral extent of phi_beta, resynthesize with weight a^n
/// and sum over beta.  Path B: multiply by zeta^2 sum theta_beta^2.
FrameReport frame_verify(const CapNet& net, const GridFunction& g);

// ---------------------------------------------------------------- continuum packets

/// Canonical packet of a tile: spectrum N theta(xi') zeta(|xi|) e^{-2 pi i <c, xi>}
/// with theta a bump of chord radius r = l(Q^o)/2 around v_t and c the centre
/// of R_t.  N makes the L^2 norm one.
struct CanonicalPacket {
  Vec v;          ///< cap centre
  Mat tangent;    ///< n x d orthonormal basis of v^perp
  double r = 0.0;
  Vec center;     ///< spatial centre
  double s = 1.0; ///< scale used by the dual kernel
  double norm = 1.0;

  cplx hat(const Vec& xi) const;
};

CanonicalPacket canonical_packet(const Tile& t);

struct Quadrature {
  int tangential = 16;  ///< minimum nodes per tangent axis
  int radial = 32;      ///< minimum radial nodes
};

/// Integral of F over the frequency support of p, in gnomonic cap coordinates
/// times radius in [1, 3/2], trapezoid rule.  `offset` sets extra node
/// density for integrands oscillating like e^{2 pi i <offset, xi>}.
cplx integrate_over_support(const CanonicalPacket& p, const std::function<cplx(const Vec&)>& F,
                            const Vec& offset, const Quadrature& q = {});

/// <phi_a, phi_b> = int hat(a) conj(hat(b)).
cplx packet_inner(const CanonicalPacket& a, const CanonicalPacket& b, const Quadrature& q = {});

/// f = sum_j c_j phi_j with its exact norm from the Gram matrix.
struct PacketSum {
  std::vector<CanonicalPacket> packets;
  std::vector<cplx> coef;
  double norm2 = 0.0;
};
PacketSum make_packet_sum(std::vector<CanonicalPacket> packets, std::vector<cplx> coef,
                          const Quadrature& q = {});

/// |<f, phi_t>| for every tile.
std::vector<double> f_coefficients(const PacketSum& f, const TileSet& tiles,
                                   const Quadrature& q = {});

/// hat of theta_t(., sigma): packet spectrum times m_sigma(O P xi) Psi~(s |P xi|).
cplx dual_hat(const CanonicalPacket& p, const MultiplierFamily& m, const Subspace& sigma,
              const Vec& xi);

/// |<1_E, theta_t(., sigma(.)) 1_{alpha_{t,tau}}(v_sigma(.))>| with the field
/// constant on lattice cells; each cell integral is taken exactly through
/// the transform of the cell indicator.
std::vector<double> a_coefficients(const DirectionField& field, const TileSet& tiles,
                                   const MultiplierFamily& m, int64_t tau,
                                   const Quadrature& q = {});

CoefficientTable coefficient_tables(const PacketSum& f, const DirectionField& field,
                                    const TileSet& tiles, const MultiplierFamily& m, int64_t tau,
                                    int M, const Quadrature& q = {});

/// Adaptedness report for one tile against sampled directions.
struct PacketReport {
  double spectral_leak = 0.0;     ///< max |phi_t^| outside omega_t on samples
  double dual_leak = 0.0;         ///< max |theta_t^(., rho)| for v_rho outside alpha_t
  double diff_ratio = 0.0;        ///< (v) measured constant
  double symbol_diff_constant = 0.0;
  int pairs = 0;
};
PacketReport build_packets_report(const Tile& t, const MultiplierFamily& m, int pairs,
                                  std::mt19937_64& rng, const Quadrature& q = {});

}  // namespace grsio
