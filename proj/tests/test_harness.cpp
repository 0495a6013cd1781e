#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "grsio/harness.hpp"

using namespace grsio;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(GRSIO_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 64-bit FNV-1a; stable across compilers, unlike std::hash.
uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> check_names(const RunReport& r, bool passing) {
  std::vector<std::string> out;
  for (const Check& c : r.checks)
    if (c.pass == passing) out.push_back(c.name);
  return out;
}

ExperimentConfig golden_config() {
  ExperimentConfig c;
  c.seed = 1;
  c.tiles = 32;
  return c;
}

}  // namespace

TEST_CASE("config: unknown keys, d mismatch and bad ranges are errors") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"bogus", 1}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"n", 3}, {"d", 1}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"n", 7}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"torus", {{"L", 64.0}, {"M", 128}}}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"directions", "lacunary"}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), Error);
  try {
    ExperimentConfig::from_json(json{{"n", 3}, {"d", 1}});
  } catch (const Error& e) {
    CHECK(e.tag() == "config");
  }
}

TEST_CASE("config round trip through JSON") {
  ExperimentConfig c;
  c.n = 3;
  c.L = 4.0;
  c.M = 32;
  c.N_list = {1, 2, 4};
  c.multiplier = "riesz_component(1)";
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(c.to_json()["d"] == 2);
}

TEST_CASE("CLI exit codes") {
  const std::string dir = std::string(GRSIO_SOURCE_DIR) + "/tests/data";
  CHECK(cli("frame --config " + dir + "/bad_config.json") == 2);
  CHECK(cli("frame --config " + dir + "/does_not_exist.json") == 2);
  CHECK(cli("logn --N-list 8,x") == 2);
  CHECK(cli("no-such-command") == 2);
  CHECK(cli("geometry-selftest --out " + std::string(GRSIO_BINARY_DIR) + "/harness_geom") == 0);
  CHECK(cli("tiles-trees --seed 3 --out " + std::string(GRSIO_BINARY_DIR) + "/harness_tt") == 0);
}

TEST_CASE("geometry self-test: faults are named, seeds do not matter") {
  ExperimentConfig c;
  c.pairs = 500;
  const RunReport ok = cmd_geometry_selftest(c);
  CHECK(ok.passed());
  c.inject_fault = "orthogonality";
  const RunReport bad = cmd_geometry_selftest(c);
  CHECK_FALSE(bad.passed());
  const std::vector<std::string> failed = check_names(bad, false);
  CHECK(std::find(failed.begin(), failed.end(), "rotation_orthogonal") != failed.end());
  c.inject_fault.clear();
  c.seed = 99;
  CHECK(check_names(cmd_geometry_selftest(c), true) == check_names(ok, true));
}

TEST_CASE("tiles-trees: deterministic, fault injection, empty set") {
  ExperimentConfig c;
  c.tiles = 12;
  c.seed = 5;
  const RunReport a = cmd_tiles_trees(c);
  const RunReport b = cmd_tiles_trees(c);
  CHECK(a.tables == b.tables);
  CHECK(a.constants.dump() == b.constants.dump());
  CHECK(a.config == c.to_json());

  c.inject_fault = "strong_disjointness";
  c.tiles = 32;
  c.seed = 1;
  const RunReport f = cmd_tiles_trees(c);
  CHECK_FALSE(f.passed());
  const std::vector<std::string> failed = check_names(f, false);
  CHECK(failed == std::vector<std::string>{"strongly_disjoint"});

  c.inject_fault.clear();
  c.tiles = 0;
  CHECK(cmd_tiles_trees(c).passed());
}

TEST_CASE("tiles-trees golden fixture: 32 tiles, seed 1") {
  const std::string dir = std::string(GRSIO_SOURCE_DIR) + "/tests/data/golden_tiles_trees";
  const json meta = json::parse(slurp(dir + "/meta.json"));
  ExperimentConfig c = golden_config();
  c.out = meta.at("out").get<std::string>();
  CHECK(meta.at("seed").get<uint64_t>() == c.seed);
  CHECK(meta.at("config_fnv1a").get<std::string>() == std::to_string(fnv1a(c.to_json().dump())));
  const RunReport r = cmd_tiles_trees(c);
  CHECK(r.tables.at("coefficients") == slurp(dir + "/coefficients.csv"));
  CHECK(r.tables.at("tiles") == slurp(dir + "/tiles.csv"));
  const json stored = json::parse(slurp(dir + "/report.json"));
  CHECK(r.to_json()["constants"] == stored["constants"]);
  CHECK(r.to_json()["checks"] == stored["checks"]);
}

TEST_CASE("logn with a single direction reports one bounded row") {
  ExperimentConfig c;
  c.L = 16.0;
  c.M = 128;
  c.N_list = {1};
  c.trials = 1;
  const RunReport r = cmd_logn(c);
  CHECK(r.passed());
  CHECK(r.constants["r"].size() == 1);
  bool has_bound = false;
  for (const Check& k : r.checks) has_bound = has_bound || k.name == "single_symbol_bound";
  CHECK(has_bound);
}

TEST_CASE("frame sweep emits one row per admissible scale and seed") {
  ExperimentConfig c;
  c.L = 16.0;
  c.M = 128;
  c.seeds = 2;
  c.samples = 100;
  c.scales = {1.0, 3.0, 2.0};  // 2 is not a power of 3 and is skipped
  const RunReport r = cmd_frame(c);
  CHECK(r.passed());
  CHECK(r.constants["rows"] == 4);
}

TEST_CASE("differentiation: constant input is exact") {
  ExperimentConfig c;
  c.L = 16.0;
  c.M = 128;
  c.functions = 2;
  c.field_directions = 4;
  c.kmax = 4;
  const RunReport r = cmd_differentiation(c);
  for (const Check& k : r.checks)
    if (k.name == "constant_function_exact") CHECK(k.pass);
}
