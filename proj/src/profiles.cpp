#include "grsio/profiles.hpp"

namespace grsio {

double zeta(double r) { return smooth_window(r, 9.0 / 8.0, 11.0 / 8.0, 1.0 / 8.0); }

double plateau(double r) { return smooth_window(r, 1.0, 1.5, 0.5); }

namespace {
// omega = 1 on [0, 2.7], 0 beyond 3.1; psi_tilde(r) = omega(r) - omega(3r)
// telescopes over triadic dilates and lives in (0.9, 3.1) ⊂ (8/9, 28/9).
double omega(double r) { return 1.0 - smooth_step((r - 2.7) / 0.4); }
}  // namespace

double psi_tilde(double r) { return omega(r) - omega(3.0 * r); }

double gamma_hat(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

double ConeProfile::chord_to_pole(const Vec& xi) {
  const double r = xi.norm();
  if (r == 0.0) return 2.0;
  Vec u = xi / r;
  u(u.size() - 1) -= 1.0;
  return u.norm();
}

double ConeProfile::angular(double chord) const {
  return smooth_step((outer() - chord) / (outer() - inner()));
}

double ConeProfile::operator()(const Vec& xi) const {
  const double r = xi.norm();
  if (r == 0.0) return 0.0;
  return plateau(r) * angular(chord_to_pole(xi));
}

}  // namespace grsio
