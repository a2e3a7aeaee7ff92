#pragma once

#include <string>

#include "config.hpp"

namespace aqec::cli {

struct RunResult {
  std::string csv_path;
  std::string sidecar_path;
  int rows = 0;
};

// Executes the configured experiment and writes the CSV plus the
// <output>.meta.json sidecar. Throws ConfigError, CapacityError, InputError,
// or PreconditionError; the caller maps those to exit codes.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace aqec::cli
