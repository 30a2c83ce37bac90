#include "singular_cli/runner.hpp"

#include <fstream>
#include <ostream>
#include <system_error>

#include "singular/errors.hpp"
#include "singular_cli/config.hpp"
#include "singular_cli/experiments.hpp"

namespace singular::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Temporary files that are deleted unless committed.
class Staging {
 public:
  ~Staging() {
    std::error_code ec;
    for (const auto& p : temps_) fs::remove(p, ec);
  }
  fs::path stage(const fs::path& final_path, const std::string& content) {
    fs::path tmp = final_path;
    tmp += ".partial";
    temps_.push_back(tmp);
    finals_.push_back(final_path);
    write_file(tmp, content);
    return tmp;
  }
  void commit() {
    std::size_t done = 0;
    try {
      for (; done < temps_.size(); ++done) fs::rename(temps_[done], finals_[done]);
    } catch (...) {
      std::error_code ec;
      for (std::size_t i = 0; i < done; ++i) fs::remove(finals_[i], ec);
      throw;
    }
    temps_.clear();
  }

 private:
  std::vector<fs::path> temps_;
  std::vector<fs::path> finals_;
};

}  // namespace

int run(const RunRequest& request, std::ostream& err) {
  const Experiment* experiment = nullptr;
  std::unique_ptr<Config> config;
  try {
    experiment = &find_experiment(request.experiment);
    KeyValues file;
    if (!request.config.empty()) file = parse_config_file(request.config);
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : request.overrides) overrides.push_back(parse_assignment(s));
    config = std::make_unique<Config>(experiment->name, experiment->keys, file, overrides);
  } catch (const ConfigError& e) {
    err << "singular-eft: invalid configuration: " << e.what() << "\n";
    return kConfigError;
  }

  ExperimentResult result{Table({}), {}};
  try {
    result = experiment->run(*config);
  } catch (const ConfigError& e) {
    err << "singular-eft: invalid configuration: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "singular-eft: numerical failure in " << experiment->name << ": " << e.what() << "\n";
    return kNumericalError;
  }

  try {
    std::error_code ec;
    fs::create_directories(request.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + request.out_dir.string() + ": " + ec.message());

    const std::string hash = config->hash();
    nlohmann::ordered_json meta;
    meta["experiment"] = experiment->name;
    meta["description"] = experiment->description;
    meta["config_hash"] = hash;
    meta["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config->resolved()) meta["config"][k] = v;
    meta["columns"] = result.table.columns();
    meta["rows"] = result.table.size();
    meta["summary"] = result.summary;

    Staging staging;
    staging.stage(request.out_dir / (experiment->name + ".csv"), result.table.render(hash));
    staging.stage(request.out_dir / (experiment->name + ".meta.json"), meta.dump(2) + "\n");
    staging.commit();
  } catch (const std::exception& e) {
    err << "singular-eft: cannot write outputs: " << e.what() << "\n";
    return kOutputError;
  }
  return kSuccess;
}

}  // namespace singular::cli
