#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "singular_cli/experiments.hpp"
#include "singular_cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace singular::cli;

  std::size_t width = 0;
  for (const auto& e : experiments()) width = std::max(width, e.name.size());
  std::string names;
  for (const auto& e : experiments()) {
    names += "\n  " + e.name + std::string(width + 2 - e.name.size(), ' ') + e.description;
  }

  CLI::App app{"Renormalization experiments for singular two-body potentials."};
  app.footer("Experiments:" + names);
  RunRequest req;
  std::string config, out;
  bool list_keys = false;
  app.add_option("experiment", req.experiment, "experiment to run")->required();
  app.add_option("--config", config, "flat key = value configuration file");
  app.add_option("--set", req.overrides, "override one key (key=value), repeatable");
  app.add_option("--out", out, "output directory");
  app.add_flag("--keys", list_keys, "print the experiment's keys and defaults as a config file and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (list_keys) {
    try {
      for (const auto& k : find_experiment(req.experiment).keys) {
        std::cout << "# " << k.help << "\n" << k.key << " = " << k.default_value << "\n";
      }
      return kSuccess;
    } catch (const std::exception& e) {
      std::cerr << "singular-eft: " << e.what() << "\n";
      return kConfigError;
    }
  }
  if (out.empty()) {
    std::cerr << "singular-eft: --out is required\n";
    return kUsageError;
  }
  req.config = config;
  req.out_dir = out;
  return run(req, std::cerr);
}
