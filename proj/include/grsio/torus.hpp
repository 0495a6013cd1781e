/**
 * @file torus.hpp
 * @brief Periodic sampling of R^n and the discrete Fourier pair used by every operator.
 *
 * Convention: for samples f_j at x_j = j L / M, the coefficients are
 *   c_k = M^{-n} sum_j f_j exp(-2 pi i k.j / M),   xi_k = k / L,
 * with k in [-M/2, M/2) per axis, so f_j = sum_k c_k exp(2 pi i xi_k . x_j) and
 *   sum_j |f_j|^2 (L/M)^n = L^n sum_k |c_k|^2.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grsio/common.hpp"

namespace grsio {

struct TorusSpec {
  int n = 2;
  double L = 32.0;
  int M = 256;

  TorusSpec() = default;
  TorusSpec(int n_, double L_, int M_);  // validates
  double nyquist() const { return M / (2.0 * L); }
  double cell_volume() const { return std::pow(L / M, n); }
  size_t size() const;
  /// Signed frequency index of array slot i along one axis.
  int signed_index(int i) const { return i < M / 2 ? i : i - M; }
  Vec frequency(size_t flat) const;
  Vec position(size_t flat) const;
  std::vector<int> multi_index(size_t flat) const;
  size_t flat_index(const std::vector<int>& idx) const;  // wraps periodically
};

/// Complex samples on the torus with a lazily cached spectrum.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const TorusSpec& spec);
  static GridFunction from_values(const TorusSpec& spec, std::vector<cplx> values);
  static GridFunction from_spectrum(const TorusSpec& spec, std::vector<cplx> spectrum);
  /// exp(2 pi i xi.x) for xi on the frequency lattice (given by signed indices).
  static GridFunction single_mode(const TorusSpec& spec, const std::vector<int>& k);
  static GridFunction from_function(const TorusSpec& spec,
                                    const std::function<cplx(const Vec&)>& f);

  const TorusSpec& spec() const { return spec_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<cplx>& spectrum() const;

  cplx& at(size_t i) {
    spectrum_.reset();
    return values_[i];
  }
  void set_values(std::vector<cplx> v);

  double l2_norm() const;            ///< (sum |f|^2 cell volume)^{1/2}
  double spectral_l2_norm() const;   ///< (L^n sum |c_k|^2)^{1/2}
  double sup_abs() const;

  /// New function whose spectrum is c_k * symbol(xi_k).
  GridFunction multiply_spectrum(const std::function<cplx(const Vec&)>& symbol) const;
  /// Same with precomputed per-slot symbol values.
  GridFunction multiply_spectrum(const std::vector<cplx>& symbol) const;

  /// CSV rows "k_1,...,k_n,re,im" for every nonzero coefficient above tol.
  std::string spectrum_csv(double tol = 0.0) const;

 private:
  TorusSpec spec_;
  std::vector<cplx> values_;
  mutable std::optional<std::vector<cplx>> spectrum_;
};

/// Forward (values -> coefficients, scaled) and inverse transforms.  Plans
/// are created once per (n, M, direction) under a lock and reused from any thread.
std::vector<cplx> forward_dft(const TorusSpec& spec, const std::vector<cplx>& values);
std::vector<cplx> inverse_dft(const TorusSpec& spec, const std::vector<cplx>& spectrum);

/// Reference DFT by direct summation (O(size^2)); only for tiny grids in tests.
std::vector<cplx> forward_dft_naive(const TorusSpec& spec, const std::vector<cplx>& values);

}  // namespace grsio
