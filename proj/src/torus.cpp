/**
 * @file torus.cpp
 * @brief FFTW-backed transforms on the periodic lattice.
 */
#include "grsio/torus.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace grsio {

TorusSpec::TorusSpec(int n_, double L_, int M_) : n(n_), L(L_), M(M_) {
  if (n < 1 || n > 4) throw Error("config", "torus dimension must be in 1..4");
  if (!(L > 0.0)) throw Error("config", "period must be positive");
  if (M < 2 || (M & (M - 1)) != 0) throw Error("config", "points per axis must be a power of 2");
  if (nyquist() < 4.0)
    throw Error("config", "Nyquist frequency M/(2L) must be at least 4 to resolve Ann(1/2,2)");
}

size_t TorusSpec::size() const {
  size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<size_t>(M);
  return s;
}

std::vector<int> TorusSpec::multi_index(size_t flat) const {
  std::vector<int> idx(n);
  for (int a = n - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % M);
    flat /= M;
  }
  return idx;
}

size_t TorusSpec::flat_index(const std::vector<int>& idx) const {
  size_t f = 0;
  for (int a = 0; a < n; ++a) f = f * M + static_cast<size_t>(((idx[a] % M) + M) % M);
  return f;
}

Vec TorusSpec::frequency(size_t flat) const {
  Vec xi(n);
  for (int a = n - 1; a >= 0; --a) {
    xi(a) = signed_index(static_cast<int>(flat % M)) / L;
    flat /= M;
  }
  return xi;
}

Vec TorusSpec::position(size_t flat) const {
  Vec x(n);
  for (int a = n - 1; a >= 0; --a) {
    x(a) = static_cast<double>(flat % M) * L / M;
    flat /= M;
  }
  return x;
}

namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int n, int M, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(n, M, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  std::vector<int> dims(n, M);
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= M;
  fftw_complex* a = fftw_alloc_complex(total);
  fftw_complex* b = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(n, dims.data(), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  plan_cache.emplace(key, p);
  return p;
}

std::vector<cplx> run(const TorusSpec& spec, const std::vector<cplx>& in, int sign) {
  if (in.size() != spec.size()) throw Error("size", "sample count does not match torus");
  std::vector<cplx> out(in.size());
  fftw_plan p = get_plan(spec.n, spec.M, sign);
  // New-array execution is thread-safe; the input is copied because FFTW
  // takes a non-const pointer.
  std::vector<cplx> tmp = in;
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> forward_dft(const TorusSpec& spec, const std::vector<cplx>& values) {
  std::vector<cplx> c = run(spec, values, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(spec.size());
  for (auto& z : c) z *= scale;
  return c;
}

std::vector<cplx> inverse_dft(const TorusSpec& spec, const std::vector<cplx>& spectrum) {
  return run(spec, spectrum, FFTW_BACKWARD);
}

std::vector<cplx> forward_dft_naive(const TorusSpec& spec, const std::vector<cplx>& values) {
  const size_t N = spec.size();
  std::vector<cplx> c(N);
  for (size_t k = 0; k < N; ++k) {
    const auto kk = spec.multi_index(k);
    cplx acc = 0.0;
    for (size_t j = 0; j < N; ++j) {
      const auto jj = spec.multi_index(j);
      long dot = 0;
      for (int a = 0; a < spec.n; ++a) dot += static_cast<long>(kk[a]) * jj[a];
      const double ph = -2.0 * kPi * static_cast<double>(dot % spec.M) / spec.M;
      acc += values[j] * cplx(std::cos(ph), std::sin(ph));
    }
    c[k] = acc / static_cast<double>(N);
  }
  return c;
}

GridFunction::GridFunction(const TorusSpec& spec) : spec_(spec), values_(spec.size(), 0.0) {}

GridFunction GridFunction::from_values(const TorusSpec& spec, std::vector<cplx> values) {
  if (values.size() != spec.size()) throw Error("size", "sample count does not match torus");
  GridFunction g;
  g.spec_ = spec;
  g.values_ = std::move(values);
  return g;
}

GridFunction GridFunction::from_spectrum(const TorusSpec& spec, std::vector<cplx> spectrum) {
  GridFunction g = from_values(spec, inverse_dft(spec, spectrum));
  g.spectrum_ = std::move(spectrum);
  return g;
}

GridFunction GridFunction::single_mode(const TorusSpec& spec, const std::vector<int>& k) {
  std::vector<cplx> c(spec.size(), 0.0);
  c[spec.flat_index(k)] = 1.0;
  return from_spectrum(spec, std::move(c));
}

GridFunction GridFunction::from_function(const TorusSpec& spec,
                                         const std::function<cplx(const Vec&)>& f) {
  std::vector<cplx> v(spec.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f(spec.position(i));
  return from_values(spec, std::move(v));
}

const std::vector<cplx>& GridFunction::spectrum() const {
  if (!spectrum_) spectrum_ = forward_dft(spec_, values_);
  return *spectrum_;
}

void GridFunction::set_values(std::vector<cplx> v) {
  if (v.size() != spec_.size()) throw Error("size", "sample count does not match torus");
  values_ = std::move(v);
  spectrum_.reset();
}

double GridFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& z : values_) s += std::norm(z);
  return std::sqrt(s * spec_.cell_volume());
}

double GridFunction::spectral_l2_norm() const {
  double s = 0.0;
  for (const auto& z : spectrum()) s += std::norm(z);
  return std::sqrt(s * std::pow(spec_.L, spec_.n));
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

GridFunction GridFunction::multiply_spectrum(
    const std::function<cplx(const Vec&)>& symbol) const {
  std::vector<cplx> c = spectrum();
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != cplx(0.0)) c[i] *= symbol(spec_.frequency(i));
  return from_spectrum(spec_, std::move(c));
}

GridFunction GridFunction::multiply_spectrum(const std::vector<cplx>& symbol) const {
  std::vector<cplx> c = spectrum();
  for (size_t i = 0; i < c.size(); ++i) c[i] *= symbol[i];
  return from_spectrum(spec_, std::move(c));
}

std::string GridFunction::spectrum_csv(double tol) const {
  std::ostringstream os;
  os.precision(17);
  const auto& c = spectrum();
  for (size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) <= tol) continue;
    const auto idx = spec_.multi_index(i);
    for (int a = 0; a < spec_.n; ++a) os << spec_.signed_index(idx[a]) << ",";
    os << c[i].real() << "," << c[i].imag() << "\n";
  }
  return os.str();
}

}  // namespace grsio
