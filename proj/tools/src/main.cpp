#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aqec/types.hpp"
#include "aqec/version.hpp"
#include "config.hpp"
#include "runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw aqec::cli::ConfigError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> max_dim;
};

void apply_overrides(aqec::cli::ExperimentConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.out) cfg.output_path = *ov.out;
  if (ov.max_dim) cfg.limits.max_dim = *ov.max_dim;
}

int do_run(const std::string& path, const Overrides& ov) {
  aqec::cli::ExperimentConfig cfg =
      aqec::cli::parse_config(read_file(path), path);
  apply_overrides(cfg, ov);
  const aqec::cli::RunResult result = aqec::cli::run_experiment(cfg);
  std::cout << result.csv_path << ": " << result.rows << " row"
            << (result.rows == 1 ? "" : "s") << " ("
            << result.sidecar_path << ")\n";
  return 0;
}

int do_validate(const std::string& path, const Overrides& ov) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const aqec::cli::ConfigError& e) {
    std::cout << e.what() << "\n";
    return 0;
  }
  auto diags = aqec::cli::validate_config(text, path);
  if (diags.empty()) {
    // Overrides can lift capacity diagnostics; recheck with them applied.
    try {
      aqec::cli::ExperimentConfig cfg = aqec::cli::parse_config(text, path);
      apply_overrides(cfg, ov);
    } catch (const aqec::cli::ConfigError& e) {
      diags.push_back(e.what());
    }
  }
  for (const std::string& d : diags) std::cout << d << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate quantum error correction workbench"};
  app.set_version_flag("--version", std::string(aqec::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", ov.seed, "override master_seed");
    cmd->add_option("--out", ov.out, "override output_path");
    cmd->add_option("--max-dim", ov.max_dim, "override the dense size cap");
  };

  CLI::App* run = app.add_subcommand("run", "run an experiment to CSV");
  add_common(run);
  CLI::App* validate =
      app.add_subcommand("validate", "check a config without running");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : 0;
  }

  try {
    if (run->parsed()) return do_run(config_path, ov);
    return do_validate(config_path, ov);
  } catch (const aqec::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const aqec::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const aqec::PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << " (residual " << e.residual
              << ")\n";
    return kExitNumerical;
  } catch (const aqec::InputError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const aqec::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitNumerical;
  }
}
