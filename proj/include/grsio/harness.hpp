/**
 * @file harness.hpp
 * @brief Experiment configuration, run reports and the six CLI commands.
 *
 * Every command takes a resolved ExperimentConfig, runs its checks, and
 * returns a RunReport.  run_command() writes report.json plus one CSV per
 * table into the output directory and maps the outcome to an exit code:
 * 0 when every check passes, 1 on a failed check, 2 on a configuration error.
 */
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "grsio/experiments.hpp"
#include "grsio/trees.hpp"
#include "grsio/wavepackets.hpp"

namespace grsio {

struct ExperimentConfig {
  int n = 2;
  double L = 32.0;
  int M = 256;                   ///< lattice points per axis
  double alpha = 1.0 / 729.0;    ///< cone aperture parameter, desk value 3^-6
  int kappa = 1;                 ///< net refinement for the frame command
  int tree_kappa = 9;            ///< kappa of the tiles used by trees and packets
  int decay_order = 20;          ///< M of chi_M in the density, 10 n by default
  int A = 2;                     ///< Mihlin order
  uint64_t seed = 1;
  int seeds = 10;
  std::vector<int> N_list{8, 16, 32, 64, 128, 256, 512, 1024};
  std::string directions = "equispaced";
  std::string multiplier = "hilbert_smoothed(0.0001)";
  int trials = 4;
  int rotations = 1;
  int tiles = 32;
  double K = 0.0;                ///< tree enlargement constant; 0 means measure it
  std::vector<double> scales{1.0, 3.0, 9.0};
  int samples = 10000;
  int pairs = 10000;
  int functions = 10;
  int field_directions = 16;
  int kmax = 8;
  std::string inject_fault;      ///< "", "orthogonality" or "strong_disjointness"
  std::string out = "grsio_out";

  nlohmann::json to_json() const;
  /// Unknown keys, a d that is not n - 1 and out-of-range values all throw Error("config", ...).
  static ExperimentConfig from_json(const nlohmann::json& j);
  void validate() const;
  TorusSpec torus() const { return TorusSpec(n, L, M); }
  ConeProfile cone() const { return ConeProfile{alpha}; }
};

ExperimentConfig load_config(const std::string& path);

struct Check {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct RunReport {
  std::string command;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json constants = nlohmann::json::object();
  std::map<std::string, std::string> tables;  ///< file stem -> CSV text

  bool passed() const;
  void check(const std::string& name, bool pass, double value = 0.0, double limit = 0.0,
             const std::string& detail = "");
  nlohmann::json to_json() const;
  /// report.json plus <stem>.csv for every table.
  void write(const std::string& dir) const;
};

RunReport cmd_geometry_selftest(const ExperimentConfig& cfg);
RunReport cmd_logn(const ExperimentConfig& cfg);
RunReport cmd_carleson(const ExperimentConfig& cfg);
RunReport cmd_differentiation(const ExperimentConfig& cfg);
RunReport cmd_tiles_trees(const ExperimentConfig& cfg);
RunReport cmd_frame(const ExperimentConfig& cfg);

/// Dispatch by subcommand name, write outputs, return the exit code.
int run_command(const std::string& name, const ExperimentConfig& cfg);

// ---------------------------------------------------------------- shared scenario builders

/// Observed order of a finite-difference error sequence: slope of log e against log h.
double observed_order(const std::vector<double>& h, const std::vector<double>& err);

/// Side of the spatial box [0, b)^n carrying the direction field.
double scenario_box(int n);

/// Tile set near the pole used by the tree commands: frequency generations
/// -5..-2 of the standard grid, plates through random points of the field box.
TileSet scenario_tiles(int n, int kappa, int count, std::mt19937_64& rng);

/// f as a random combination of the canonical packets of about half the tiles.
PacketSum scenario_function(const TileSet& tiles, std::mt19937_64& rng);

/// The peripheral cell used for A: digits (c + 2 3^{kappa-3}, c, ..., c).
int64_t scenario_tau(int d, int kappa);

/// Field on a small box: sigma(x) drawn from the tau-cell centres of the
/// tiles plus a few random directions; E is the central ball of radius 0.4 L.
DirectionField scenario_field(const TileSet& tiles, int64_t tau, std::mt19937_64& rng);

struct LacunaryInstance {
  TileSet tiles;
  TreeTop top;
  int rejected = 0;   ///< xi draws discarded because two kappa-centres met
};
/// Lacunary tree with one tile per generation and pairwise disjoint
/// kappa-centres, all plates through a common point of E.
LacunaryInstance scenario_lacunary_tree(int n, int kappa, int gtop, int depth,
                                        std::mt19937_64& rng);

struct TreeBound {
  double form = 0.0;
  double size = 0.0;
  double dense = 0.0;
  double measure = 0.0;
  double constant = 0.0;   ///< form / (size dense |R_T|), 0 when the denominator vanishes
};
TreeBound single_tree_bound(const TileSet& tiles, const TreeTop& top, const CoefficientTable& c,
                            const DirectionField& field, int M);

}  // namespace grsio
