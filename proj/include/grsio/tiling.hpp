/**
 * @file tiling.hpp
 * @brief Triadic grids on R^d, the shifted family used to fit arbitrary cubes,
 *        rotated plates in R^n and time-frequency tiles built from both.
 *
 * A grid of pace (1, m) with offset digits N0 has generation-g cubes
 *   3^{g+m} ( q + N_g / P ) + [0, 3^{g+m})^d,   P = 3^p - 1,
 * where N_g = 3^{(-g) mod p} N0 mod P is the base-3 string of N0 rotated by g.
 * Rotating digits is exactly what makes generations nest, so every such
 * offset defines a genuine triadic grid.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grsio/grassmann.hpp"
#include "grsio/profiles.hpp"

namespace grsio {

struct TriadicGrid {
  int d = 1;
  int64_t scale_index = 0;     ///< m = scale_index / scale_count
  int64_t scale_count = 1;
  int period = 1;              ///< p, digit period of the offsets
  std::vector<int64_t> offset; ///< N0 per axis, in [0, 3^p - 1)

  double m() const { return static_cast<double>(scale_index) / scale_count; }
  int64_t modulus() const;     ///< P = 3^p - 1
  /// N_g per axis.
  int64_t offset_at(int axis, int g) const;
  double side(int g) const;
  std::string id() const;

  static std::shared_ptr<const TriadicGrid> standard(int d);  ///< pace (1,0), zero offset
};

using GridPtr = std::shared_ptr<const TriadicGrid>;

struct TriadicCube {
  GridPtr grid;
  int gen = 0;
  std::vector<int64_t> q;

  int d() const { return grid->d; }
  double side() const { return grid->side(gen); }
  double lower(int axis) const;
  Vec lower() const;
  Vec center() const;
  bool contains(const Vec& y) const;  ///< half-open cube
  bool contains(const TriadicCube& other) const;
  bool disjoint(const TriadicCube& other) const;
  bool operator==(const TriadicCube& o) const {
    return grid->id() == o.grid->id() && gen == o.gen && q == o.q;
  }
  TriadicCube parent() const;
  TriadicCube ancestor(int k) const;
  /// Child at generation gen - kappa with per-axis digits r in [0, 3^kappa).
  TriadicCube child(int kappa, const std::vector<int64_t>& r) const;
  /// Per-axis digits of a descendant relative to this cube.
  std::vector<int64_t> digits_of(const TriadicCube& descendant) const;
  TriadicCube center_child(int kappa) const;
  /// Cube of the same grid and generation containing y.
  static TriadicCube containing(GridPtr grid, int gen, const Vec& y);
  std::string address() const;
};

/// All 3^{kappa d} children (only for small kappa d).
std::vector<TriadicCube> children(const TriadicCube& Q, int kappa);
TriadicCube center(const TriadicCube& Q, int kappa);
std::vector<TriadicCube> peripheral(const TriadicCube& Q, int kappa);

/// Peripheral test on child digits: Euclidean gap to the center child is at
/// least 27 child sides (3^{3-kappa} l(Q)).
bool is_peripheral_digits(const std::vector<int64_t>& r, int kappa);
double peripheral_count(int d, int kappa);                 ///< by axis-histogram counting
int64_t peripheral_count_bruteforce(int d, int kappa);     ///< exhaustive
/// Lexicographic enumeration of peripheral children, tau in [0, count).
std::vector<int64_t> peripheral_unrank(int d, int kappa, int64_t tau);
int64_t peripheral_rank(const std::vector<int64_t>& r, int kappa);

/// The shifted family: scales m_i = i / K_s, offsets with period kappa + 11.
class ShiftedGridFamily {
 public:
  ShiftedGridFamily(int d, int kappa);
  int d() const { return d_; }
  int kappa() const { return kappa_; }
  double delta() const { return delta_; }      ///< 3^{-(kappa+9)}
  int64_t scale_count() const { return Ks_; }
  int period() const { return p_; }
  double size() const;                         ///< C = K_s (3^p - 1)^d
  GridPtr grid(int64_t scale_index, const std::vector<int64_t>& offset) const;

  struct Fit {
    TriadicCube cube;
    double inflation = 1.0;  ///< least lambda with L ⊆ lambda P (dilation about c(P))
    bool contains_input = true;
    bool exact_standard = false;
  };
  /// Cube L of some family grid with P ⊆ L ⊆ (1 + delta) P.
  Fit fit(const Vec& lower, double side) const;

 private:
  int d_, kappa_, p_;
  double delta_;
  int64_t Ks_;
};

/// Scale set S = {3^k : 3^6 s alpha >= 1}.
bool in_scale_set(double s, double alpha);
/// Chart maps between the upper hemisphere and R^d.
Vec chart(const Vec& unit_vector);            ///< drop last coordinate
Vec chart_inverse(const Vec& y);              ///< (y, sqrt(1 - |y|^2))

struct Located {
  TriadicCube cube;
  double inflation = 1.0;
};
Located locate(const ShiftedGridFamily& fam, const ConeProfile& cone, const Vec& beta, double s);

/// Box with orthonormal axes (columns) and half extents.
struct OrientedBox {
  Vec center;
  Mat axes;
  Vec half;

  OrientedBox dilate(double K) const { return {center, axes, half * K}; }
  double gauge(const Vec& x) const;  ///< max_i |<x - c, a_i>| / half_i
  bool contains(const Vec& x, double slack = 1e-12) const { return gauge(x) <= 1.0 + slack; }
  std::vector<Vec> corners() const;
  bool contains(const OrientedBox& other, double slack = 1e-12) const;
  double volume() const;
};
/// Separating-axis test (n = 2, 3); touching within slack counts as intersecting.
bool intersects(const OrientedBox& a, const OrientedBox& b, double slack = 1e-12);

struct Plate {
  Vec beta;                  ///< unit normal direction (thickness axis)
  int k = 0;                 ///< scl = 3^k, k >= 0
  std::vector<int64_t> q;    ///< horizontal cube address in the pace (1,0) grid
  int64_t j = 0;             ///< vertical unit interval index

  int n() const { return static_cast<int>(beta.size()); }
  double scl() const { return std::pow(3.0, k); }
  double measure() const { return std::pow(scl(), n() - 1); }
  Mat frame() const;         ///< rotation sending e_n to beta
  OrientedBox box() const;
  bool contains(const Vec& x) const;
  Plate parent() const;      ///< horizontal parent, same vertical slab
  bool operator==(const Plate& o) const {
    return k == o.k && q == o.q && j == o.j && (beta - o.beta).norm() == 0.0;
  }
  static Plate containing(const Vec& beta, int k, const Vec& x);
};

/// Exact for plates of the same orientation, separating-axis test otherwise.
bool plates_intersect(const Plate& a, const Plate& b, double slack = 1e-12);

struct Tile {
  Plate R;
  TriadicCube Q;
  int kappa = 9;

  Vec v() const { return chart_inverse(Q.center()); }
  double scl() const { return R.scl(); }
  int n() const { return R.n(); }
};

/// Tile for (beta, s, z): Q from locate, plate of the v_t grid containing z.
Tile make_tile(const ShiftedGridFamily& fam, const ConeProfile& cone, const Vec& beta, double s,
               const Vec& z);
/// Tile with a given frequency cube and the plate of matching scale containing z.
Tile tile_from_cube(const TriadicCube& Q, int kappa, const Vec& z);

bool in_frequency_support(const Tile& t, const Vec& xi);
bool in_directional_support(const Tile& t, const Vec& unit_dir);               ///< alpha_t
bool in_directional_cell(const Tile& t, const Vec& unit_dir, int64_t tau);    ///< alpha_{t,tau}
/// tau of the peripheral child containing chart(unit_dir), or -1.
int64_t directional_cell_of(const Tile& t, const Vec& unit_dir);

/// Tile CSV row: grid_id, gen, q..., beta..., z..., scl
std::string tile_csv_row(const Tile& t, const Vec& z);

struct GeomConstant {
  double K = 0.0;            ///< max over pairs of the containment factor
  int pairs = 0;
  bool second_item_holds = true;
};
/// Search for the nesting constant over random tile pairs near the pole.
GeomConstant measure_geom_constant(int n, int kappa, int pairs, std::mt19937_64& rng);

}  // namespace grsio
