/**
 * @file tiling.cpp
 * @brief Triadic grids, the shifted fitting family, plates and tiles.
 */
#include "grsio/tiling.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace grsio {

namespace {

int64_t ipow3(int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t mulmod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

int64_t pow3mod(int e, int64_t m) {
  int64_t r = 1 % m;
  for (int i = 0; i < e; ++i) r = mulmod(r, 3, m);
  return r;
}

int positive_mod(int a, int p) { return ((a % p) + p) % p; }

}  // namespace

// ---------------------------------------------------------------- grids

int64_t TriadicGrid::modulus() const { return ipow3(period) - 1; }

int64_t TriadicGrid::offset_at(int axis, int g) const {
  const int64_t P = modulus();
  if (P <= 0 || offset[axis] == 0) return 0;
  return mulmod(pow3mod(positive_mod(-g, period), P), offset[axis], P);
}

double TriadicGrid::side(int g) const { return std::pow(3.0, g + m()); }

std::string TriadicGrid::id() const {
  std::ostringstream os;
  os << "m" << scale_index << "/" << scale_count << ":p" << period << ":o";
  for (size_t i = 0; i < offset.size(); ++i) os << (i ? "-" : "") << offset[i];
  return os.str();
}

GridPtr TriadicGrid::standard(int d) {
  auto g = std::make_shared<TriadicGrid>();
  g->d = d;
  g->offset.assign(d, 0);
  return g;
}

double TriadicCube::lower(int axis) const {
  const double frac = grid->modulus() > 0
                          ? static_cast<double>(grid->offset_at(axis, gen)) / grid->modulus()
                          : 0.0;
  return side() * (static_cast<double>(q[axis]) + frac);
}

Vec TriadicCube::lower() const {
  Vec a(d());
  for (int i = 0; i < d(); ++i) a(i) = lower(i);
  return a;
}

Vec TriadicCube::center() const { return lower() + Vec::Constant(d(), 0.5 * side()); }

bool TriadicCube::contains(const Vec& y) const {
  const double l = side();
  for (int i = 0; i < d(); ++i) {
    const double a = lower(i);
    if (y(i) < a || y(i) >= a + l) return false;
  }
  return true;
}

std::vector<int64_t> TriadicCube::digits_of(const TriadicCube& desc) const {
  // Walk the descendant up to this generation, collecting the base offsets.
  const int k = gen - desc.gen;
  if (k < 0) throw Error("grid", "not a descendant generation");
  std::vector<int64_t> r(d());
  const TriadicCube anc = desc.ancestor(k);
  if (anc.q != q) return {};
  const int64_t P = grid->modulus();
  for (int i = 0; i < d(); ++i) {
    const int64_t base =
        P > 0 ? static_cast<int64_t>((static_cast<__int128>(ipow3(k)) * grid->offset_at(i, gen)) / P)
              : 0;
    r[i] = desc.q[i] - ipow3(k) * q[i] - base;
  }
  return r;
}

bool TriadicCube::contains(const TriadicCube& o) const {
  if (o.gen > gen) return false;
  return ancestor(0).q == q && o.ancestor(gen - o.gen).q == q;
}

bool TriadicCube::disjoint(const TriadicCube& o) const {
  return !contains(o) && !o.contains(*this);
}

TriadicCube TriadicCube::parent() const {
  TriadicCube p{grid, gen + 1, q};
  const int64_t P = grid->modulus();
  for (int i = 0; i < d(); ++i) {
    const int64_t c =
        P > 0 ? static_cast<int64_t>((static_cast<__int128>(3) * grid->offset_at(i, gen + 1)) / P) : 0;
    p.q[i] = floor_div(q[i] - c, 3);
  }
  return p;
}

TriadicCube TriadicCube::ancestor(int k) const {
  TriadicCube c = *this;
  for (int i = 0; i < k; ++i) c = c.parent();
  return c;
}

TriadicCube TriadicCube::child(int kappa, const std::vector<int64_t>& r) const {
  TriadicCube c{grid, gen - kappa, q};
  const int64_t P = grid->modulus();
  const int64_t s = ipow3(kappa);
  for (int i = 0; i < d(); ++i) {
    const int64_t base =
        P > 0 ? static_cast<int64_t>((static_cast<__int128>(s) * grid->offset_at(i, gen)) / P) : 0;
    c.q[i] = s * q[i] + base + r[i];
  }
  return c;
}

TriadicCube TriadicCube::center_child(int kappa) const {
  return child(kappa, std::vector<int64_t>(d(), (ipow3(kappa) - 1) / 2));
}

TriadicCube TriadicCube::containing(GridPtr grid, int gen, const Vec& y) {
  TriadicCube c{grid, gen, std::vector<int64_t>(grid->d)};
  const double l = grid->side(gen);
  for (int i = 0; i < grid->d; ++i) {
    const double frac = grid->modulus() > 0
                            ? static_cast<double>(grid->offset_at(i, gen)) / grid->modulus()
                            : 0.0;
    c.q[i] = static_cast<int64_t>(std::floor(y(i) / l - frac));
  }
  return c;
}

std::string TriadicCube::address() const {
  std::ostringstream os;
  os << gen;
  for (auto v : q) os << ":" << v;
  return os.str();
}

std::vector<TriadicCube> children(const TriadicCube& Q, int kappa) {
  const int d = Q.d();
  const int64_t s = ipow3(kappa);
  int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= s;
  std::vector<TriadicCube> out;
  out.reserve(total);
  std::vector<int64_t> r(d, 0);
  for (int64_t idx = 0; idx < total; ++idx) {
    int64_t t = idx;
    for (int i = d - 1; i >= 0; --i) {
      r[i] = t % s;
      t /= s;
    }
    out.push_back(Q.child(kappa, r));
  }
  return out;
}

TriadicCube center(const TriadicCube& Q, int kappa) { return Q.center_child(kappa); }

// ---------------------------------------------------------------- peripheral children

namespace {

constexpr int64_t kGapBudget = 27 * 27;  // squared gap, in child sides

int64_t axis_gap(int64_t r, int kappa) {
  const int64_t c = (ipow3(kappa) - 1) / 2;
  return std::max<int64_t>(0, std::llabs(r - c) - 1);
}

// near[k][b]: number of k-tuples of axis digits with sum of squared gaps < b.
std::vector<std::vector<double>> build_near_table(int d, int kappa) {
  const int64_t s = ipow3(kappa);
  std::vector<double> hist(kGapBudget, 0.0);  // hist[g^2] for g^2 < budget
  for (int64_t r = 0; r < s; ++r) {
    const int64_t g = axis_gap(r, kappa);
    if (g * g < kGapBudget) hist[g * g] += 1.0;
  }
  std::vector<std::vector<double>> exact(d + 1, std::vector<double>(kGapBudget, 0.0));
  exact[0][0] = 1.0;  // exact[k][v]: tuples with squared sum exactly v
  for (int k = 1; k <= d; ++k)
    for (int v = 0; v < kGapBudget; ++v)
      for (int h = 0; h <= v; ++h) exact[k][v] += exact[k - 1][v - h] * hist[h];
  std::vector<std::vector<double>> below(d + 1, std::vector<double>(kGapBudget + 1, 0.0));
  for (int k = 0; k <= d; ++k)
    for (int b = 1; b <= kGapBudget; ++b) below[k][b] = below[k][b - 1] + exact[k][b - 1];
  return below;
}

const std::vector<std::vector<double>>& near_table(int d, int kappa) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, kappa);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_near_table(d, kappa)).first;
  return it->second;
}

}  // namespace

bool is_peripheral_digits(const std::vector<int64_t>& r, int kappa) {
  int64_t s = 0;
  for (auto x : r) {
    const int64_t g = axis_gap(x, kappa);
    s += g * g;
    if (s >= kGapBudget) return true;
  }
  return false;
}

double peripheral_count(int d, int kappa) {
  const auto& below = near_table(d, kappa);
  return std::pow(3.0, kappa * d) - below[d][kGapBudget];
}

int64_t peripheral_count_bruteforce(int d, int kappa) {
  // Geometric oracle: actual Euclidean distance between child cubes.
  const TriadicCube Q{TriadicGrid::standard(d), kappa, std::vector<int64_t>(d, 0)};
  const TriadicCube C = Q.center_child(kappa);
  const Vec cl = C.lower();
  const double cs = C.side();
  const double thresh = std::pow(3.0, 3 - kappa) * Q.side();
  int64_t count = 0;
  for (const TriadicCube& ch : children(Q, kappa)) {
    const Vec a = ch.lower();
    double d2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double gap = std::max({0.0, cl(i) - (a(i) + cs), a(i) - (cl(i) + cs)});
      d2 += gap * gap;
    }
    if (std::sqrt(d2) >= thresh * (1.0 - 1e-12)) ++count;
  }
  return count;
}

std::vector<int64_t> peripheral_unrank(int d, int kappa, int64_t tau) {
  const auto& below = near_table(d, kappa);
  const int64_t s = ipow3(kappa);
  if (tau < 0 || static_cast<double>(tau) >= peripheral_count(d, kappa))
    throw Error("index", "peripheral index out of range");
  std::vector<int64_t> r(d);
  int64_t used = 0;  // squared gap of the prefix, capped at budget
  for (int i = 0; i < d; ++i) {
    const int rest = d - 1 - i;
    const double all_rest = std::pow(static_cast<double>(s), rest);
    for (int64_t x = 0; x < s; ++x) {
      const int64_t g = axis_gap(x, kappa);
      const int64_t u = std::min(kGapBudget, used + g * g);
      const double completions =
          u >= kGapBudget ? all_rest : all_rest - below[rest][kGapBudget - u];
      if (static_cast<double>(tau) < completions) {
        r[i] = x;
        used = u;
        break;
      }
      tau -= static_cast<int64_t>(completions);
    }
  }
  return r;
}

int64_t peripheral_rank(const std::vector<int64_t>& r, int kappa) {
  const int d = static_cast<int>(r.size());
  if (!is_peripheral_digits(r, kappa)) return -1;
  const auto& below = near_table(d, kappa);
  const int64_t s = ipow3(kappa);
  int64_t tau = 0, used = 0;
  for (int i = 0; i < d; ++i) {
    const int rest = d - 1 - i;
    const double all_rest = std::pow(static_cast<double>(s), rest);
    for (int64_t x = 0; x < r[i]; ++x) {
      const int64_t g = axis_gap(x, kappa);
      const int64_t u = std::min(kGapBudget, used + g * g);
      tau += static_cast<int64_t>(u >= kGapBudget ? all_rest : all_rest - below[rest][kGapBudget - u]);
    }
    const int64_t g = axis_gap(r[i], kappa);
    used = std::min(kGapBudget, used + g * g);
  }
  return tau;
}

std::vector<TriadicCube> peripheral(const TriadicCube& Q, int kappa) {
  std::vector<TriadicCube> out;
  for (const TriadicCube& c : children(Q, kappa))
    if (is_peripheral_digits(Q.digits_of(c), kappa)) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------- shifted family

ShiftedGridFamily::ShiftedGridFamily(int d, int kappa) : d_(d), kappa_(kappa) {
  if (d < 1) throw Error("dimension", "d must be positive");
  if (kappa < 9.0 + std::log(static_cast<double>(d)) / std::log(3.0) - 1e-12)
    throw Error("kappa", "kappa must be at least 9 + log_3 d");
  delta_ = std::pow(3.0, -(kappa + 9));
  p_ = kappa + 11;
  Ks_ = static_cast<int64_t>(std::ceil(std::log(3.0) / std::log1p(delta_ / 8.0)));
}

double ShiftedGridFamily::size() const {
  return static_cast<double>(Ks_) * std::pow(static_cast<double>(ipow3(p_) - 1), d_);
}

GridPtr ShiftedGridFamily::grid(int64_t scale_index, const std::vector<int64_t>& offset) const {
  auto g = std::make_shared<TriadicGrid>();
  g->d = d_;
  g->scale_index = scale_index;
  g->scale_count = Ks_;
  g->period = p_;
  g->offset = offset;
  return g;
}

ShiftedGridFamily::Fit ShiftedGridFamily::fit(const Vec& lower, double side) const {
  if (lower.size() != d_ || !(side > 0.0)) throw Error("cube", "bad cube");
  Fit out;
  // Exact fit in the standard grid.
  const double lg = std::log(side) / std::log(3.0);
  const int g0 = static_cast<int>(std::lround(lg));
  if (std::abs(std::pow(3.0, g0) - side) <= 1e-13 * side) {
    bool aligned = true;
    std::vector<int64_t> q(d_);
    for (int i = 0; i < d_ && aligned; ++i) {
      const double t = lower(i) / std::pow(3.0, g0);
      q[i] = std::llround(t);
      aligned = std::abs(t - q[i]) <= 1e-12 * std::max(1.0, std::abs(t));
    }
    if (aligned) {
      out.cube = TriadicCube{grid(0, std::vector<int64_t>(d_, 0)), g0, q};
      out.exact_standard = true;
      return out;
    }
  }
  // Target side l_P (1 + 3 delta / 8), rounded to the scale lattice 3^{k / Ks}.
  const double x = lg + std::log1p(0.375 * delta_) / std::log(3.0);
  const int64_t k = std::llround(x * static_cast<double>(Ks_));
  const int g = static_cast<int>(floor_div(k, Ks_));
  const int64_t i = k - static_cast<int64_t>(g) * Ks_;
  const double lL = std::pow(3.0, g) * std::pow(3.0, static_cast<double>(i) / Ks_);

  const int64_t P = ipow3(p_) - 1;
  std::vector<int64_t> q(d_), N0(d_);
  for (int a = 0; a < d_; ++a) {
    const double target = lower(a) - 0.5 * (lL - side);
    const double t = target / lL;
    int64_t qa = static_cast<int64_t>(std::floor(t));
    int64_t Ng = std::llround((t - static_cast<double>(qa)) * static_cast<double>(P));
    if (Ng >= P) {
      Ng -= P;
      ++qa;
    }
    q[a] = qa;
    N0[a] = mulmod(pow3mod(positive_mod(g, p_), P), Ng, P);
  }
  out.cube = TriadicCube{grid(i, N0), g, q};

  const Vec L0 = out.cube.lower();
  const double l = out.cube.side();
  const Vec c = lower + Vec::Constant(d_, 0.5 * side);
  double lam = 0.0;
  for (int a = 0; a < d_; ++a) {
    lam = std::max(lam, std::max(std::abs(L0(a) - c(a)), std::abs(L0(a) + l - c(a))) / (0.5 * side));
    if (L0(a) > lower(a) || L0(a) + l < lower(a) + side) out.contains_input = false;
  }
  out.inflation = lam;
  return out;
}

// ---------------------------------------------------------------- scales, charts, locate

bool in_scale_set(double s, double alpha) {
  if (!(s > 0.0)) return false;
  const double e = std::log(s) / std::log(3.0);
  if (std::abs(e - std::round(e)) > 1e-9) return false;
  return std::pow(3.0, 6) * s * alpha >= 1.0 - 1e-12;
}

Vec chart(const Vec& u) { return u.head(u.size() - 1); }

Vec chart_inverse(const Vec& y) {
  const double q = y.squaredNorm();
  if (q >= 1.0) throw Error("chart", "point outside the unit ball");
  Vec v(y.size() + 1);
  v.head(y.size()) = y;
  v(y.size()) = std::sqrt(1.0 - q);
  return v;
}

Located locate(const ShiftedGridFamily& fam, const ConeProfile& cone, const Vec& beta, double s) {
  if (!in_scale_set(s, cone.alpha)) throw Error("scale", "s is not in the scale set");
  if (std::abs(beta.norm() - 1.0) > 1e-12 || ConeProfile::chord_to_pole(beta) >= cone.outer())
    throw Error("direction", "beta must be a unit vector in the cap");
  const Vec y = chart(beta);
  const double half = 27.0 / s;
  const auto f = fam.fit(y - Vec::Constant(y.size(), half), 2.0 * half);
  return Located{f.cube, f.inflation};
}

// ---------------------------------------------------------------- boxes and plates

double OrientedBox::gauge(const Vec& x) const {
  const Vec loc = axes.transpose() * (x - center);
  double g = 0.0;
  for (int i = 0; i < loc.size(); ++i) g = std::max(g, std::abs(loc(i)) / half(i));
  return g;
}

std::vector<Vec> OrientedBox::corners() const {
  const int n = static_cast<int>(center.size());
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec c = center;
    for (int i = 0; i < n; ++i) c += ((mask >> i) & 1 ? 1.0 : -1.0) * half(i) * axes.col(i);
    out.push_back(c);
  }
  return out;
}

bool OrientedBox::contains(const OrientedBox& o, double slack) const {
  for (const Vec& c : o.corners())
    if (!contains(c, slack)) return false;
  return true;
}

double OrientedBox::volume() const { return (2.0 * half).prod(); }

bool intersects(const OrientedBox& a, const OrientedBox& b, double slack) {
  const int n = static_cast<int>(a.center.size());
  std::vector<Vec> cand;
  for (int i = 0; i < n; ++i) {
    cand.push_back(a.axes.col(i));
    cand.push_back(b.axes.col(i));
  }
  if (n == 3) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Eigen::Vector3d u = a.axes.col(i), w = b.axes.col(j);
        const Eigen::Vector3d c = u.cross(w);
        if (c.norm() > 1e-12) cand.push_back(Vec(c.normalized()));
      }
  } else if (n > 3) {
    throw Error("dimension", "box intersection implemented for n <= 3");
  }
  const Vec dc = b.center - a.center;
  for (const Vec& L : cand) {
    double ra = 0.0, rb = 0.0;
    for (int i = 0; i < n; ++i) {
      ra += a.half(i) * std::abs(a.axes.col(i).dot(L));
      rb += b.half(i) * std::abs(b.axes.col(i).dot(L));
    }
    const double scale = std::max(1.0, ra + rb);
    if (std::abs(dc.dot(L)) > ra + rb + slack * scale) return false;
  }
  return true;
}

bool plates_intersect(const Plate& a, const Plate& b, double slack) {
  if (a.beta.size() == b.beta.size() && (a.beta - b.beta).norm() == 0.0) {
    // Same rotated lattice: plates are nested or disjoint, decided on integers.
    if (a.j != b.j) return false;
    const Plate& lo = a.k <= b.k ? a : b;
    const Plate& hi = a.k <= b.k ? b : a;
    const int64_t f = ipow3(hi.k - lo.k);
    for (size_t i = 0; i < lo.q.size(); ++i)
      if (floor_div(lo.q[i], f) != hi.q[i]) return false;
    return true;
  }
  return intersects(a.box(), b.box(), slack);
}

Mat Plate::frame() const {
  return rotation_between(Subspace(unit(n(), n() - 1)), Subspace(beta)).matrix;
}

OrientedBox Plate::box() const {
  const int nn = n(), d = nn - 1;
  const double l = scl();
  Vec c(nn), h(nn);
  for (int i = 0; i < d; ++i) {
    c(i) = l * (static_cast<double>(q[i]) + 0.5);
    h(i) = 0.5 * l;
  }
  c(d) = static_cast<double>(j) + 0.5;
  h(d) = 0.5;
  const Mat O = frame();
  return OrientedBox{O * c, O, h};
}

bool Plate::contains(const Vec& x) const {
  const Vec loc = frame().transpose() * x;
  const int d = n() - 1;
  const double l = scl();
  for (int i = 0; i < d; ++i)
    if (std::floor(loc(i) / l) != static_cast<double>(q[i])) return false;
  return std::floor(loc(d)) == static_cast<double>(j);
}

Plate Plate::parent() const {
  Plate p = *this;
  ++p.k;
  for (auto& v : p.q) v = floor_div(v, 3);
  return p;
}

Plate Plate::containing(const Vec& beta, int k, const Vec& x) {
  if (k < 0) throw Error("plate", "plate scale below 1");
  Plate p;
  p.beta = beta;
  p.k = k;
  const Vec loc = p.frame().transpose() * x;
  const int d = static_cast<int>(beta.size()) - 1;
  p.q.resize(d);
  for (int i = 0; i < d; ++i) p.q[i] = static_cast<int64_t>(std::floor(loc(i) / p.scl()));
  p.j = static_cast<int64_t>(std::floor(loc(d)));
  return p;
}

// ---------------------------------------------------------------- tiles

Tile tile_from_cube(const TriadicCube& Q, int kappa, const Vec& z) {
  // scl * l(Q) = 3^{k + g + m} lies in [1, 3) exactly when k = -g.
  const int k = -Q.gen;
  if (k < 0) throw Error("plate", "frequency cube too large: plate scale below 1");
  Tile t;
  t.Q = Q;
  t.kappa = kappa;
  t.R = Plate::containing(chart_inverse(Q.center()), k, z);
  return t;
}

Tile make_tile(const ShiftedGridFamily& fam, const ConeProfile& cone, const Vec& beta, double s,
               const Vec& z) {
  const int n = static_cast<int>(beta.size());
  const Mat O = rotation_between(Subspace(unit(n, n - 1)), Subspace(beta)).matrix;
  const Vec loc = O.transpose() * z;
  for (int i = 0; i < n; ++i) {
    const double u = i < n - 1 ? loc(i) / s : loc(i);
    if (std::abs(u - std::round(u)) > 1e-9 * std::max(1.0, std::abs(u)))
      throw Error("lattice", "z is not a point of the rotated lattice");
  }
  return tile_from_cube(locate(fam, cone, beta, s).cube, fam.kappa(), z);
}

bool in_frequency_support(const Tile& t, const Vec& xi) {
  const double r = xi.norm();
  if (!(r > 0.5 && r < 2.0)) return false;
  const Vec u = xi / r;
  if (u(u.size() - 1) <= 0.0) return false;
  return t.Q.center_child(t.kappa).contains(chart(u));
}

int64_t directional_cell_of(const Tile& t, const Vec& u) {
  if (u(u.size() - 1) <= 0.0) return -1;
  const Vec y = chart(u);
  if (!t.Q.contains(y)) return -1;
  const TriadicCube c = TriadicCube::containing(t.Q.grid, t.Q.gen - t.kappa, y);
  return peripheral_rank(t.Q.digits_of(c), t.kappa);
}

bool in_directional_support(const Tile& t, const Vec& u) { return directional_cell_of(t, u) >= 0; }

bool in_directional_cell(const Tile& t, const Vec& u, int64_t tau) {
  return directional_cell_of(t, u) == tau;
}

std::string tile_csv_row(const Tile& t, const Vec& z) {
  std::ostringstream os;
  os.precision(17);
  os << t.Q.grid->id() << "," << t.Q.gen;
  for (auto v : t.Q.q) os << "," << v;
  for (int i = 0; i < t.R.beta.size(); ++i) os << "," << t.R.beta(i);
  for (int i = 0; i < z.size(); ++i) os << "," << z(i);
  os << "," << t.scl();
  return os.str();
}

GeomConstant measure_geom_constant(int n, int kappa, int pairs, std::mt19937_64& rng) {
  const int d = n - 1;
  const GridPtr G = TriadicGrid::standard(d);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> gen_pick(-6, -2), depth(0, 3);
  GeomConstant out;
  for (int k = 0; k < pairs; ++k) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = 0.2 * u(rng);
    const int g = gen_pick(rng);
    const TriadicCube Qt = TriadicCube::containing(G, g, y);
    const TriadicCube Qs = TriadicCube::containing(G, g - depth(rng), y);
    Vec z(n);
    for (int i = 0; i < n; ++i) z(i) = 50.0 * u(rng);
    const Tile t = tile_from_cube(Qt, kappa, z);
    // A point of R_t picks a plate of t' that meets R_t.
    const OrientedBox bt = t.R.box();
    Vec w = bt.center;
    for (int i = 0; i < n; ++i) w += 0.999 * u(rng) * bt.half(i) * bt.axes.col(i);
    const Tile tp = tile_from_cube(Qs, kappa, w);
    const OrientedBox bp = tp.R.box();
    if (!intersects(bt, bp)) continue;
    double need = 0.0;
    for (const Vec& c : bt.corners()) need = std::max(need, bp.gauge(c));
    out.K = std::max(out.K, need);
    ++out.pairs;
  }
  // Second item: with the found K, KR_t meeting KR_t' forces KR_t ⊆ K^2 R_t'.
  std::mt19937_64 rng2(rng());
  for (int k = 0; k < pairs; ++k) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = 0.2 * u(rng2);
    const int g = gen_pick(rng2);
    const TriadicCube Qt = TriadicCube::containing(G, g, y);
    const TriadicCube Qs = TriadicCube::containing(G, g - depth(rng2), y);
    Vec z(n), w(n);
    for (int i = 0; i < n; ++i) z(i) = 50.0 * u(rng2);
    const Tile t = tile_from_cube(Qt, kappa, z);
    const OrientedBox bt = t.R.box().dilate(out.K);
    w = bt.center;
    for (int i = 0; i < n; ++i) w += 0.999 * u(rng2) * bt.half(i) * bt.axes.col(i);
    const Tile tp = tile_from_cube(Qs, kappa, w);
    const OrientedBox bp = tp.R.box();
    if (!intersects(bt, bp.dilate(out.K))) continue;
    if (!bp.dilate(out.K * out.K).contains(bt, 1e-9)) out.second_item_holds = false;
  }
  return out;
}

}  // namespace grsio
