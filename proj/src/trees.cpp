/**
 * @file trees.cpp
 * @brief Tree predicates, size by arrangement enumeration, density by lattice
 *        sums, and the greedy size and density decompositions.
 */
#include "grsio/trees.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

namespace grsio {

std::string to_string(TreeKind k) {
  switch (k) {
    case TreeKind::lacunary: return "lacunary";
    case TreeKind::overlapping: return "overlapping";
    default: return "mixed";
  }
}

DirectionField DirectionField::constant(const TorusSpec& spec, const Subspace& sigma, bool full_E) {
  DirectionField f;
  f.spec = spec;
  f.sigmas = {sigma};
  f.which.assign(spec.size(), 0);
  f.in_E.assign(spec.size(), full_E ? 1 : 0);
  return f;
}

double DirectionField::measure_E() const {
  double c = 0.0;
  for (auto e : in_E) c += e;
  return c * spec.cell_volume();
}

bool leq(const Tile& t, const Tile& tp) {
  return t.Q.contains(tp.Q) && plates_intersect(t.R, tp.R);
}

bool in_center(const Tile& t, const Vec& xi) { return t.Q.center_child(t.kappa).contains(xi); }

bool tile_fits_top(const Tile& t, const TreeTop& top) {
  return t.Q.contains(top.xi) && t.scl() <= top.R.scl() && plates_intersect(t.R, top.R);
}

TreeKind classify(const TileSet& all, const Tree& T) {
  bool lac = true, ovl = true;
  for (int i : T.tiles) {
    const bool c = in_center(all[i], T.top.xi);
    lac = lac && !c;
    ovl = ovl && c;
  }
  if (lac) return TreeKind::lacunary;
  if (ovl) return TreeKind::overlapping;
  return TreeKind::mixed;
}

bool is_tree(const TileSet& all, const Tree& T) {
  for (int i : T.tiles)
    if (!tile_fits_top(all[i], T.top)) return false;
  return true;
}

Signature signature(const Vec& xi_in, const GridPtr& grid, int depth, int kappa) {
  Signature s;
  Vec xi = xi_in;
  // A point on a boundary of the finest level examined is moved off it.
  const TriadicCube fine = TriadicCube::containing(grid, -depth - kappa, xi);
  for (int i = 0; i < xi.size(); ++i) {
    const double u = (xi(i) - fine.lower(i)) / fine.side();
    if (u < 1e-9 || u > 1.0 - 1e-9) {
      xi(i) += std::pow(3.0, -depth - 3);
      s.perturbed = true;
    }
  }
  double w = 1.0;
  for (int j = 1; j <= depth; ++j) {
    w /= 3.0;
    const TriadicCube Q = TriadicCube::containing(grid, -j, xi);
    const int a = Q.center_child(kappa).contains(xi) ? 0 : 1;
    s.digits.push_back(a);
    s.value += a * w;
  }
  return s;
}

// ---------------------------------------------------------------- size

namespace {

using Bits = std::vector<uint64_t>;

Bits make_bits(size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, size_t p) { b[p >> 6] |= (uint64_t{1} << (p & 63)); }
bool get_bit(const Bits& b, size_t p) { return (b[p >> 6] >> (p & 63)) & 1; }
bool any_bit(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

// Sum of F^2 over the set bits, always in increasing position order so that
// supersets give sums that are at least as large in floating point as well.
double energy(const Bits& lac, const Bits& pm, const Indices& idx, const CoefficientTable& c) {
  double s = 0.0;
  for (size_t p = 0; p < idx.size(); ++p)
    if (get_bit(lac, p) && get_bit(pm, p)) s += c.F[idx[p]] * c.F[idx[p]];
  return s;
}

struct MaskedTops {
  std::vector<Vec> xis;     // one representative per distinct lacunary mask
  std::vector<Bits> lac;
  std::vector<Plate> plates;
  std::vector<Bits> pm;
};

MaskedTops mask_tops(const TileSet& all, const Indices& idx, const TopCandidates& cand,
                     bool dedupe = true) {
  MaskedTops m;
  std::set<Bits> seen;
  for (const Vec& xi : cand.xis) {
    Bits b = make_bits(idx.size());
    for (size_t p = 0; p < idx.size(); ++p) {
      const Tile& t = all[idx[p]];
      if (t.Q.contains(xi) && !in_center(t, xi)) set_bit(b, p);
    }
    if (!any_bit(b) || (dedupe && !seen.insert(b).second)) continue;
    m.xis.push_back(xi);
    m.lac.push_back(std::move(b));
  }
  for (const Plate& R : cand.plates) {
    Bits b = make_bits(idx.size());
    for (size_t p = 0; p < idx.size(); ++p) {
      const Tile& t = all[idx[p]];
      if (t.scl() <= R.scl() && plates_intersect(t.R, R)) set_bit(b, p);
    }
    m.plates.push_back(R);
    m.pm.push_back(std::move(b));
  }
  return m;
}

Indices bits_to_indices(const Bits& a, const Bits& b, const Indices& idx) {
  Indices out;
  for (size_t p = 0; p < idx.size(); ++p)
    if (get_bit(a, p) && get_bit(b, p)) out.push_back(idx[p]);
  return out;
}

}  // namespace

TopCandidates top_candidates(const TileSet& all, const Indices& idx) {
  TopCandidates c;
  if (idx.empty()) return c;
  const int d = all[idx[0]].Q.d();
  std::vector<std::vector<double>> breaks(d);
  for (int i : idx) {
    const Tile& t = all[i];
    const TriadicCube C = t.Q.center_child(t.kappa);
    for (int a = 0; a < d; ++a) {
      breaks[a].push_back(t.Q.lower(a));
      breaks[a].push_back(t.Q.lower(a) + t.Q.side());
      breaks[a].push_back(C.lower(a));
      breaks[a].push_back(C.lower(a) + C.side());
    }
  }
  std::vector<std::vector<double>> reps(d);
  for (int a = 0; a < d; ++a) {
    auto& b = breaks[a];
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    // Offset 1/pi of the cell width keeps representatives off triadic points.
    for (size_t k = 0; k + 1 < b.size(); ++k) reps[a].push_back(b[k] + (b[k + 1] - b[k]) / kPi);
  }
  std::vector<size_t> pos(d, 0);
  while (true) {
    Vec xi(d);
    for (int a = 0; a < d; ++a) xi(a) = reps[a][pos[a]];
    bool inside = false;
    for (int i : idx)
      if (all[i].Q.contains(xi)) {
        inside = true;
        break;
      }
    if (inside) c.xis.push_back(xi);
    int a = d - 1;
    while (a >= 0 && ++pos[a] == reps[a].size()) pos[a--] = 0;
    if (a < 0) break;
  }
  // Plates: those of the set and two parents of each.  A top plate larger than
  // every plate here only adds measure while the tiles it can collect are
  // already collected by one of these, so the supremum is not affected for
  // trees whose members lie within two generations of the top.
  for (int i : idx) {
    Plate R = all[i].R;
    for (int g = 0; g < 3; ++g) {
      if (std::find(c.plates.begin(), c.plates.end(), R) == c.plates.end()) c.plates.push_back(R);
      R = R.parent();
    }
  }
  return c;
}

Indices maximal_lacunary_tree(const TileSet& all, const Indices& idx, const TreeTop& top) {
  Indices out;
  for (int i : idx)
    if (tile_fits_top(all[i], top) && !in_center(all[i], top.xi)) out.push_back(i);
  return out;
}

SizeResult size_of(const TileSet& all, const Indices& idx, const CoefficientTable& c,
                   const SizeOptions& opt) {
  SizeResult res;
  if (idx.empty()) return res;
  if (static_cast<int>(idx.size()) > opt.exact_threshold && !opt.allow_sampled)
    throw Error("size", "tile set above the exact-mode threshold");
  TopCandidates cand = top_candidates(all, idx);
  if (static_cast<int>(idx.size()) > opt.exact_threshold) {
    std::mt19937_64 rng(opt.seed);
    std::shuffle(cand.xis.begin(), cand.xis.end(), rng);
    if (static_cast<int>(cand.xis.size()) > opt.sampled_tops) cand.xis.resize(opt.sampled_tops);
    res.sampled = true;
  }
  const MaskedTops m = mask_tops(all, idx, cand);
  double best = -1.0;
  int bx = -1, bp = -1;
  for (size_t r = 0; r < m.plates.size(); ++r)
    for (size_t x = 0; x < m.xis.size(); ++x) {
      ++res.tops_examined;
      const double v = std::sqrt(energy(m.lac[x], m.pm[r], idx, c) / m.plates[r].measure());
      if (v > best) {
        best = v;
        bx = static_cast<int>(x);
        bp = static_cast<int>(r);
      }
    }
  if (bx < 0) return res;
  res.value = best;
  res.top = TreeTop{m.xis[bx], m.plates[bp]};
  res.tiles = bits_to_indices(m.lac[bx], m.pm[bp], idx);
  return res;
}

double size_bruteforce(const TileSet& all, const Indices& idx, const CoefficientTable& c) {
  if (idx.size() > 16) throw Error("size", "brute force limited to 16 tiles");
  const TopCandidates cand = top_candidates(all, idx);
  const size_t N = idx.size();
  double best = 0.0;
  for (uint32_t S = 1; S < (1u << N); ++S) {
    for (const Vec& xi : cand.xis)
      for (const Plate& R : cand.plates) {
        const TreeTop top{xi, R};
        bool ok = true;
        double e = 0.0;
        for (size_t p = 0; p < N && ok; ++p) {
          if (!((S >> p) & 1)) continue;
          const Tile& t = all[idx[p]];
          ok = tile_fits_top(t, top) && !in_center(t, xi);
          e += c.F[idx[p]] * c.F[idx[p]];
        }
        if (ok) best = std::max(best, std::sqrt(e / R.measure()));
      }
  }
  return best;
}

// ---------------------------------------------------------------- density

double chi(const Vec& x, int M) {
  const int n = static_cast<int>(x.size());
  const double logc = std::lgamma(0.5 * M) - 0.5 * n * std::log(kPi) - std::lgamma(0.5 * (M - n));
  return std::exp(logc) * std::pow(1.0 + x.squaredNorm(), -0.5 * M);
}

double plate_bump(const Plate& R, const Vec& x, int M, double period) {
  const OrientedBox b = R.box();
  Vec disp = x - b.center;
  if (period > 0.0)
    for (int i = 0; i < disp.size(); ++i) disp(i) -= period * std::floor(disp(i) / period + 0.5);
  Vec u = b.axes.transpose() * disp;
  for (int i = 0; i < u.size(); ++i) u(i) /= 2.0 * b.half(i);
  return chi(u, M) / R.measure();
}

double tile_mass(const Tile& t, const DirectionField& field, int M) {
  std::vector<uint8_t> admissible(field.sigmas.size());
  for (size_t k = 0; k < field.sigmas.size(); ++k)
    admissible[k] = in_directional_support(t, field.sigmas[k].normal) ? 1 : 0;
  double s = 0.0;
  const size_t N = field.spec.size();
  for (size_t i = 0; i < N; ++i) {
    if (!field.in_E[i] || !admissible[field.which[i]]) continue;
    s += plate_bump(t.R, field.spec.position(i), M, 0.0);
  }
  return s * field.spec.cell_volume();
}

namespace {

std::vector<double> masses(const TileSet& all, const Indices& idx, const DirectionField& field,
                           int M) {
  std::vector<double> m(idx.size());
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < static_cast<long>(idx.size()); ++p)
    m[p] = tile_mass(all[idx[p]], field, M);
  return m;
}

double dense_from(const TileSet& all, const Indices& idx, const Indices& peers,
                  const std::vector<double>& pm) {
  double best = 0.0;
  for (int t : idx)
    for (size_t q = 0; q < peers.size(); ++q)
      if (pm[q] > best && leq(all[t], all[peers[q]])) best = pm[q];
  return best;
}

}  // namespace

double density(const TileSet& all, int t, const DirectionField& field, const Indices& peers,
               int M) {
  double best = 0.0;
  for (int q : peers)
    if (leq(all[t], all[q])) best = std::max(best, tile_mass(all[q], field, M));
  return best;
}

double dense(const TileSet& all, const Indices& idx, const DirectionField& field,
             const Indices& peers, int M) {
  return dense_from(all, idx, peers, masses(all, peers, field, M));
}

double dense(const TileSet& all, const Indices& idx, const DirectionField& field, int M) {
  return dense(all, idx, field, idx, M);
}

Decomposition density_decompose(const TileSet& all, const Indices& idx,
                                const DirectionField& field, int M) {
  Decomposition D;
  const std::vector<double> pm = masses(all, idx, field, M);
  const double delta = dense_from(all, idx, idx, pm);
  D.input_value = delta;
  if (delta <= 0.0) {
    D.rest = idx;
    return D;
  }
  std::vector<int> witnesses;
  for (size_t p = 0; p < idx.size(); ++p)
    if (pm[p] > 0.5 * delta) witnesses.push_back(static_cast<int>(p));
  std::stable_sort(witnesses.begin(), witnesses.end(), [&](int a, int b) {
    return all[idx[a]].R.measure() > all[idx[b]].R.measure();
  });
  std::vector<uint8_t> removed(idx.size(), 0);
  for (int w : witnesses) {
    const Tile& tw = all[idx[w]];
    Tree T;
    for (size_t p = 0; p < idx.size(); ++p)
      if (!removed[p] && leq(all[idx[p]], tw)) {
        T.tiles.push_back(idx[p]);
        removed[p] = 1;
      }
    if (T.tiles.empty()) continue;
    T.top = TreeTop{tw.Q.center(), tw.R};
    T.kind = classify(all, T);
    D.sum_measure += T.measure();
    D.trees.push_back(std::move(T));
  }
  for (size_t p = 0; p < idx.size(); ++p)
    if (!removed[p]) D.rest.push_back(idx[p]);
  D.rest_value = dense(all, D.rest, field, M);
  const double E = field.measure_E();
  D.carleson_constant = E > 0.0 ? D.sum_measure * delta / E : 0.0;
  return D;
}

namespace {

// Lexicographic key for selecting among qualifying trees.
struct SelectKey {
  double sig;
  std::vector<double> xi;
  int k;
  std::vector<int64_t> q;
  int64_t j;
  bool operator<(const SelectKey& o) const {
    return std::tie(sig, xi, k, q, j) < std::tie(o.sig, o.xi, o.k, o.q, o.j);
  }
};

}  // namespace

Decomposition size_decompose(const TileSet& all, const Indices& idx, const CoefficientTable& c,
                             double K, const SizeOptions& opt) {
  Decomposition D;
  const SizeResult S0 = size_of(all, idx, c, opt);
  D.input_value = S0.value;
  D.sampled = S0.sampled;
  if (S0.value <= 0.0) {
    D.rest = idx;
    return D;
  }
  const double bar = S0.value / std::sqrt(2.0);
  const TopCandidates cand = top_candidates(all, idx);
  const GridPtr grid = all[idx[0]].Q.grid;
  const int kappa = all[idx[0]].kappa;
  std::vector<Signature> sigs;
  for (const Vec& xi : cand.xis) sigs.push_back(signature(xi, grid, 20, kappa));

  Indices current = idx;
  while (!current.empty()) {
    // Keep every representative: equal tile sets with different xi differ in signature.
    const MaskedTops m = mask_tops(all, current, cand, false);
    bool found = false;
    SelectKey best{};
    int bx = -1, bp = -1;
    for (size_t x = 0; x < m.xis.size(); ++x) {
      const auto it = std::find_if(cand.xis.begin(), cand.xis.end(),
                                   [&](const Vec& v) { return v == m.xis[x]; });
      const double sig = sigs[it - cand.xis.begin()].value;
      for (size_t r = 0; r < m.plates.size(); ++r) {
        const double v = std::sqrt(energy(m.lac[x], m.pm[r], current, c) / m.plates[r].measure());
        if (!(v > bar)) continue;
        const Plate& R = m.plates[r];
        SelectKey key{sig, std::vector<double>(m.xis[x].data(), m.xis[x].data() + m.xis[x].size()),
                      R.k, R.q, R.j};
        if (found && key.sig == best.sig && key.xi != best.xi) D.signature_ties = true;
        if (!found || key < best) {
          best = key;
          bx = static_cast<int>(x);
          bp = static_cast<int>(r);
          found = true;
        }
      }
    }
    if (!found) break;

    const TreeTop top{m.xis[bx], m.plates[bp]};
    Tree T;
    T.top = top;
    T.tiles = bits_to_indices(m.lac[bx], m.pm[bp], current);
    T.kind = TreeKind::lacunary;
    D.selected.push_back(T);
    D.trees.push_back(T);
    D.sum_measure += T.measure();

    // Enlarged set: xi_T ∈ Q_t and R_t meets K^2 R_T.
    const OrientedBox big = top.R.box().dilate(K * K);
    std::set<int> inT(T.tiles.begin(), T.tiles.end());
    std::map<std::tuple<std::vector<int64_t>, int64_t>, Tree> pieces;
    Indices next;
    for (int i : current) {
      const Tile& t = all[i];
      const bool enlarged = t.Q.contains(top.xi) && intersects(t.R.box(), big);
      if (!enlarged) {
        next.push_back(i);
        continue;
      }
      if (inT.count(i)) continue;
      if (t.scl() <= top.R.scl()) {
        // Same-scale plate of the top's lattice through the center of R_t.
        const Plate Rp = Plate::containing(top.R.beta, top.R.k, t.R.box().center);
        Tree& P = pieces[{Rp.q, Rp.j}];
        P.top = TreeTop{top.xi, Rp};
        P.tiles.push_back(i);
      } else {
        Tree P;
        P.top = TreeTop{top.xi, t.R};
        P.tiles.push_back(i);
        P.kind = classify(all, P);
        D.sum_measure += P.measure();
        D.trees.push_back(std::move(P));
      }
    }
    for (auto& [key, P] : pieces) {
      P.kind = classify(all, P);
      D.sum_measure += P.measure();
      D.trees.push_back(std::move(P));
    }
    current = std::move(next);
  }
  D.rest = current;
  D.rest_value = size_of(all, D.rest, c, opt).value;
  D.carleson_constant = D.sum_measure * S0.value * S0.value;
  return D;
}

bool is_partition(const Indices& idx, const Decomposition& D) {
  std::vector<int> a = idx, b = D.rest;
  for (const Tree& T : D.trees) b.insert(b.end(), T.tiles.begin(), T.tiles.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// ---------------------------------------------------------------- strong disjointness

DisjointnessReport verify_strongly_disjoint(const TileSet& all, const std::vector<Tree>& family,
                                            double K) {
  DisjointnessReport r;
  for (size_t a = 0; a < family.size(); ++a)
    if (classify(all, family[a]) != TreeKind::lacunary || !is_tree(all, family[a])) {
      r.ok = false;
      r.failure = "lacunary";
      r.tree_a = static_cast<int>(a);
      return r;
    }
  for (size_t a = 0; a < family.size(); ++a) {
    const OrientedBox big = family[a].top.R.box().dilate(K * K);
    for (size_t b = 0; b < family.size(); ++b) {
      if (a == b) continue;
      for (int t : family[a].tiles)
        for (int tp : family[b].tiles) {
          const Tile& T1 = all[tp];
          if (!T1.Q.center_child(T1.kappa).contains(all[t].Q)) continue;
          if (intersects(T1.R.box(), big)) {
            r.ok = false;
            r.failure = "separation";
            r.tree_a = static_cast<int>(a);
            r.tree_b = static_cast<int>(b);
            r.tile_a = t;
            r.tile_b = tp;
            return r;
          }
        }
    }
  }
  return verify_plate_separation(all, family);
}

DisjointnessReport verify_plate_separation(const TileSet& all, const std::vector<Tree>& family) {
  DisjointnessReport r;
  std::vector<std::pair<int, int>> members;  // (tree, tile)
  for (size_t a = 0; a < family.size(); ++a)
    for (int t : family[a].tiles) members.emplace_back(static_cast<int>(a), t);
  for (size_t x = 0; x < members.size(); ++x)
    for (size_t y = x + 1; y < members.size(); ++y) {
      const Tile& s = all[members[x].second];
      const Tile& t = all[members[y].second];
      if (members[x].second == members[y].second) continue;
      const TriadicCube cs = s.Q.center_child(s.kappa), ct = t.Q.center_child(t.kappa);
      if (cs.disjoint(ct)) continue;
      if (!plates_intersect(s.R, t.R)) continue;
      r.ok = false;
      r.failure = "plate_overlap";
      r.tree_a = members[x].first;
      r.tree_b = members[y].first;
      r.tile_a = members[x].second;
      r.tile_b = members[y].second;
      return r;
    }
  return r;
}

double model_form(const Indices& idx, const CoefficientTable& c) {
  double s = 0.0;
  for (int i : idx) s += c.F[i] * c.A[i];
  return s;
}

// ---------------------------------------------------------------- generators

TileSet random_tiles(int n, int kappa, int count, int gmin, int gmax, double spread,
                     std::mt19937_64& rng) {
  const int d = n - 1;
  const GridPtr G = TriadicGrid::standard(d);
  std::uniform_real_distribution<double> u01(0.0, 1.0), us(-spread, spread);
  std::uniform_int_distribution<int> gen(gmin, gmax);
  const double top = std::pow(3.0, gmax);
  TileSet out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y(i) = top * u01(rng);
    const TriadicCube Q = TriadicCube::containing(G, gen(rng), y);
    Vec z(n);
    for (int i = 0; i < n; ++i) z(i) = us(rng);
    out.push_back(tile_from_cube(Q, kappa, z));
  }
  return out;
}

TileSet lacunary_tree_tiles(int n, int kappa, const Vec& xi, int gtop, int depth, const Vec& z) {
  const GridPtr G = TriadicGrid::standard(n - 1);
  TileSet out;
  for (int g = gtop; g > gtop - depth; --g) {
    const TriadicCube Q = TriadicCube::containing(G, g, xi);
    if (Q.center_child(kappa).contains(xi)) continue;
    out.push_back(tile_from_cube(Q, kappa, z));
  }
  return out;
}

std::string decomposition_json(const TileSet& all, const Indices& idx, const Decomposition& D) {
  using nlohmann::json;
  json j;
  j["input_size"] = idx.size();
  json trees = json::array();
  for (const Tree& T : D.trees) {
    json t;
    t["top"]["xi"] = std::vector<double>(T.top.xi.data(), T.top.xi.data() + T.top.xi.size());
    t["top"]["plate"] = {{"k", T.top.R.k}, {"q", T.top.R.q}, {"j", T.top.R.j}};
    t["tiles"] = T.tiles;
    t["kind"] = to_string(T.kind);
    t["R_T_measure"] = T.measure();
    trees.push_back(t);
  }
  j["output_trees"] = trees;
  j["small_set"] = D.rest;
  j["measured_constants"] = {{"input_value", D.input_value},
                             {"rest_value", D.rest_value},
                             {"sum_R_T", D.sum_measure},
                             {"carleson_constant", D.carleson_constant},
                             {"selected_trees", D.selected.size()},
                             {"sampled", D.sampled},
                             {"signature_ties", D.signature_ties}};
  (void)all;
  return j.dump(2);
}

}  // namespace grsio
