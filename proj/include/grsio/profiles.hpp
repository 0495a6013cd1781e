/**
 * @file profiles.hpp
 * @brief Radial and conical cutoffs: annulus profile, cone cutoff, truncation
 *        bump, the Ann(1,3/2) plateau and the triadic Littlewood-Paley bump.
 */
#pragma once

#include "grsio/common.hpp"

namespace grsio {

/// zeta: supported in (1, 3/2), equal to 1 on [9/8, 11/8].
double zeta(double r);

/// Phi: 1 on [1, 3/2], supported in (1/2, 2).
double plateau(double r);

/// Radial bump whose triadic dilates sum to 1: supp in (8/9, 28/9).
double psi_tilde(double r);

/// Fourier transform of the truncation bump: exp(1 - 1/(1-r^2)) on r < 1.
double gamma_hat(double r);

/// Cone apertures and the cone cutoff Psi for aperture parameter alpha.
struct ConeProfile {
  double alpha = std::pow(3.0, -8);

  double inner() const { return 81.0 * alpha; }   ///< Gamma_0 aperture 3^4 alpha
  double outer() const { return 243.0 * alpha; }  ///< Gamma_1 aperture 3^5 alpha

  /// |xi' - e_n| for xi != 0 (last coordinate is the e_n axis).
  static double chord_to_pole(const Vec& xi);

  double angular(double chord) const;
  double operator()(const Vec& xi) const;  ///< Psi(xi)
  bool in_gamma0(const Vec& xi) const { return chord_to_pole(xi) < inner(); }
  bool in_gamma1(const Vec& xi) const { return chord_to_pole(xi) < outer(); }
};

}  // namespace grsio
