#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/types.hpp"

namespace aqec::cli {

// Invalid or unparseable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelSpec {
  std::string name;  // standard channel name or "random"
  std::map<std::string, double> params;
  int power = 1;
  std::vector<int> keep;  // empty keeps all Kraus operators
  // random channels only
  std::uint64_t seed = 0;
  int m = 0;
  int n = 0;

  std::string label() const;
};

struct CodeSpec {
  enum class Kind { named, random, basis_file };
  Kind kind = Kind::named;
  std::string name;        // named: "three_qubit_repetition"
  int k = 0;               // random
  std::uint64_t seed = 0;  // random
  std::string basis_file;  // basis_file
};

struct EnsembleBlock {
  int k = 0;
  long long samples = 0;
  std::string basis_file;  // optional; empty means the full channel space
};

struct MomentBlock {
  int m = 0;
  int k = 0;
  long long samples = 0;
};

struct TypicalityBlock {
  std::vector<int> n;
  std::vector<double> epsilon;
  std::optional<double> rate;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::optional<ChannelSpec> channel;
  std::optional<CodeSpec> code;
  std::optional<EnsembleBlock> ensemble;
  std::optional<MomentBlock> moment;
  std::optional<TypicalityBlock> typicality;
  Limits limits;

  std::string source_text;  // raw JSON for the sidecar echo
};

extern const std::vector<std::string> kExperiments;

// Throws ConfigError with "<filename>:<line>:" prefixes for parse errors and
// "<filename>: /json/pointer:" prefixes for semantic ones.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& filename);

// Non-throwing schema, range, and capacity diagnostics (one per line).
std::vector<std::string> validate_config(const std::string& text,
                                         const std::string& filename);

// Instantiation helpers; substream indices keep every random object derived
// from the master seed.
KrausChannel build_channel(const ChannelSpec& spec, std::uint64_t master_seed,
                           const Limits& limits);
CodeSpace build_code(const CodeSpec& spec, int ambient_dim,
                     std::uint64_t master_seed);
CMat load_basis_matrix(const std::string& path);

// Loads a basis file and requires orthonormal columns within 1e-8
// (PreconditionError otherwise); near-orthonormal input is QR-polished so
// library-level invariants hold exactly.
CMat load_orthonormal_basis(const std::string& path);

}  // namespace aqec::cli
