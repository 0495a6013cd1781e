// grsio command line: one subcommand per experiment, JSON config plus flag overrides.
#include <CLI11.hpp>

#include <iostream>

#include "grsio/harness.hpp"

namespace {

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw grsio::Error("config", "bad N-list entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional maximal operators: geometry, operators, tiles, trees and frames"};
  app.require_subcommand(1);

  std::string config, out, nlist;
  uint64_t seed = 0;
  int n = 0;
  double alpha = 0.0;
  const std::vector<std::string> names{"geometry-selftest", "logn",      "carleson",
                                       "differentiation",   "tiles-trees", "frame"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--n", n, "ambient dimension (2 or 3)");
    sub->add_option("--alpha", alpha, "cone aperture parameter");
    sub->add_option("--N-list", nlist, "comma-separated direction counts");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  grsio::ExperimentConfig cfg;
  try {
    if (!config.empty()) cfg = grsio::load_config(config);
    if (seed != 0) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (n != 0) cfg.n = n;
    if (alpha != 0.0) cfg.alpha = alpha;
    if (!nlist.empty()) cfg.N_list = parse_list(nlist);
    cfg.validate();
  } catch (const grsio::Error& e) {
    std::cerr << "grsio: " << e.what() << '\n';
    return 2;
  }
  return grsio::run_command(cmd, cfg);
}
