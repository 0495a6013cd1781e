/**
 * @file common.hpp
 * @brief Shared aliases, the error type, and the smooth step functions used by
 *        every cutoff in the library.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace grsio {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised on violated preconditions.  Carries a short machine-usable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string tag, const std::string& what)
      : std::runtime_error(tag + ": " + what), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

/// e^{-1/x} for x > 0, 0 otherwise.
inline double flat_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// C^infinity step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = flat_exp(u), b = flat_exp(1.0 - u);
  return a / (a + b);
}

/// Smooth indicator of [a, b] with transition widths w on each side:
/// 1 on [a, b], 0 outside (a - w, b + w).
inline double smooth_window(double x, double a, double b, double w) {
  return smooth_step((x - (a - w)) / w) * smooth_step(((b + w) - x) / w);
}

inline Vec unit(int n, int k) {
  Vec e = Vec::Zero(n);
  e(k) = 1.0;
  return e;
}

/// Largest singular value (operator 2-norm).
inline double op_norm(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

}  // namespace grsio
