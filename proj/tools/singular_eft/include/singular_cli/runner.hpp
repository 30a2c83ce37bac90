#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace singular::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kOutputError = 4,
};

struct RunRequest {
  std::string experiment;
  std::filesystem::path config;      // empty: schema defaults only
  std::vector<std::string> overrides;  // key=value
  std::filesystem::path out_dir;
};

/// Resolves the configuration, runs the experiment and writes
/// <out>/<experiment>.csv and <out>/<experiment>.meta.json. Both files
/// appear together or not at all. Diagnostics go to `err`.
int run(const RunRequest& request, std::ostream& err);

}  // namespace singular::cli
