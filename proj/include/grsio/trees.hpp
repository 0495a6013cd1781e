/**
 * @file trees.hpp
 * @brief Trees of tiles, size and density functionals, and the greedy
 *        decompositions that split a tile set into trees plus a remainder.
 *
 * Tile sets are plain vectors; trees and partitions refer to tiles by index
 * into that vector so that partition checks are exact multiset comparisons.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grsio/tiling.hpp"
#include "grsio/torus.hpp"

namespace grsio {

using TileSet = std::vector<Tile>;
using Indices = std::vector<int>;

enum class TreeKind { lacunary, overlapping, mixed };
std::string to_string(TreeKind k);

struct TreeTop {
  Vec xi;   ///< frequency point in R^d (chart coordinates)
  Plate R;
};

struct Tree {
  Indices tiles;
  TreeTop top;
  TreeKind kind = TreeKind::mixed;
  double measure() const { return top.R.measure(); }
};

/// Per-tile coefficient values with their provenance.
struct CoefficientTable {
  std::vector<double> F;
  std::vector<double> A;
  int M = 20;                       ///< decay order of the adapted class that produced it
  bool canonical_packet = true;
};

/// Sampled direction field x -> sigma(x) and a set E, on the spatial lattice.
struct DirectionField {
  TorusSpec spec;
  std::vector<Subspace> sigmas;     ///< distinct values taken by the field
  std::vector<int> which;           ///< index into sigmas per lattice point
  std::vector<uint8_t> in_E;        ///< 1 where the point lies in E

  static DirectionField constant(const TorusSpec& spec, const Subspace& sigma, bool full_E);
  double measure_E() const;
};

/// t <= t': Q_{t'} ⊆ Q_t and R_t ∩ R_{t'} != ∅.
bool leq(const Tile& t, const Tile& tp);

/// Tree membership of a single tile for a given top.
bool tile_fits_top(const Tile& t, const TreeTop& top);
bool in_center(const Tile& t, const Vec& xi);   ///< xi ∈ Q_t^{o,kappa}
TreeKind classify(const TileSet& all, const Tree& T);
/// Checks the two tree items for every member.
bool is_tree(const TileSet& all, const Tree& T);

/// sum_{j=1}^{depth} a_j 3^{-j}, a_j = 0 iff xi lies in the kappa-center of its
/// generation -j cube.  Points on a triadic boundary are nudged by 3^{-depth-3}.
struct Signature {
  double value = 0.0;
  bool perturbed = false;
  std::vector<int> digits;
};
Signature signature(const Vec& xi, const GridPtr& grid, int depth, int kappa);

// ---------------------------------------------------------------- size

struct SizeOptions {
  int exact_threshold = 64;
  bool allow_sampled = false;   ///< above the threshold, sample tops instead of failing
  int sampled_tops = 256;
  uint64_t seed = 1;
};

struct SizeResult {
  double value = 0.0;
  TreeTop top;
  Indices tiles;        ///< maximal lacunary tree attaining the value
  bool sampled = false;
  int tops_examined = 0;
};

/// Candidate tree tops generated by a tile set: one interior point per cell
/// of the arrangement {Q_t, Q_t^o} and the plates R_t with two parents each.
struct TopCandidates {
  std::vector<Vec> xis;
  std::vector<Plate> plates;
};
TopCandidates top_candidates(const TileSet& all, const Indices& idx);

/// Maximal lacunary tree of idx with the given top.
Indices maximal_lacunary_tree(const TileSet& all, const Indices& idx, const TreeTop& top);

SizeResult size_of(const TileSet& all, const Indices& idx, const CoefficientTable& c,
                   const SizeOptions& opt = {});
/// Exhaustive oracle over subsets (at most 16 tiles) with the same tops.
double size_bruteforce(const TileSet& all, const Indices& idx, const CoefficientTable& c);

// ---------------------------------------------------------------- density

/// L^1-normalized decay bump (1 + |x|^2)^{-M/2} on R^n.
double chi(const Vec& x, int M);
/// Sy^1_R chi_M at x; the displacement is wrapped with the given period when
/// it is positive.  E is a box in R^n, so density uses period 0.
double plate_bump(const Plate& R, const Vec& x, int M, double period);

/// Riemann sum of Sy^1_{R_t} chi_M over E_t = {x ∈ E : v_sigma(x) ∈ alpha_t}.
double tile_mass(const Tile& t, const DirectionField& field, int M);
/// sup over peers t' >= t of tile_mass(t').
double density(const TileSet& all, int t, const DirectionField& field, const Indices& peers,
               int M);
/// max over t ∈ idx of density(t) with the peers given (default: idx itself).
double dense(const TileSet& all, const Indices& idx, const DirectionField& field, int M);
double dense(const TileSet& all, const Indices& idx, const DirectionField& field,
             const Indices& peers, int M);

struct Decomposition {
  Indices rest;               ///< light or small set
  std::vector<Tree> trees;
  std::vector<Tree> selected; ///< size: the maximal lacunary trees picked by the greedy loop
  double input_value = 0.0;   ///< dense(P) or size(P)
  double rest_value = 0.0;
  double sum_measure = 0.0;   ///< sum |R_T|
  double carleson_constant = 0.0;
  bool sampled = false;
  bool signature_ties = false;
};

Decomposition density_decompose(const TileSet& all, const Indices& idx,
                                const DirectionField& field, int M);
Decomposition size_decompose(const TileSet& all, const Indices& idx, const CoefficientTable& c,
                             double K, const SizeOptions& opt = {});

/// True when every tile of idx occurs exactly once among rest and trees.
bool is_partition(const Indices& idx, const Decomposition& D);

// ---------------------------------------------------------------- strong disjointness

struct DisjointnessReport {
  bool ok = true;
  std::string failure;   ///< "lacunary", "separation" or "plate_overlap"
  int tree_a = -1, tree_b = -1;
  int tile_a = -1, tile_b = -1;
};
DisjointnessReport verify_strongly_disjoint(const TileSet& all, const std::vector<Tree>& family,
                                            double K);
/// {R_t x Q_t^o} pairwise disjoint over the tiles of the family.
DisjointnessReport verify_plate_separation(const TileSet& all, const std::vector<Tree>& family);

double model_form(const Indices& idx, const CoefficientTable& c);

// ---------------------------------------------------------------- generators

/// Random tiles of the standard grid near the pole: frequency generations in
/// [gmin, gmax], plates near the origin so that many pairs are comparable.
TileSet random_tiles(int n, int kappa, int count, int gmin, int gmax, double spread,
                     std::mt19937_64& rng);

/// A lacunary tree: one tile per generation gtop, gtop-1, ..., gtop-depth+1,
/// all containing xi outside their centers, plates through a common point.
TileSet lacunary_tree_tiles(int n, int kappa, const Vec& xi, int gtop, int depth, const Vec& z);

std::string decomposition_json(const TileSet& all, const Indices& idx, const Decomposition& D);

}  // namespace grsio
