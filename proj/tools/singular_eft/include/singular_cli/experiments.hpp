#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "singular_cli/config.hpp"
#include "singular_cli/table.hpp"

namespace singular::cli {

struct ExperimentResult {
  Table table;
  nlohmann::ordered_json summary;
};

struct Experiment {
  std::string name;
  std::string description;
  std::vector<KeySpec> keys;
  ExperimentResult (*run)(const Config&);
};

/// Registered experiments, in a fixed order.
const std::vector<Experiment>& experiments();

/// Throws ConfigError for an unknown name.
const Experiment& find_experiment(std::string_view name);

}  // namespace singular::cli
