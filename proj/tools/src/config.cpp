#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aqec/random.hpp"

namespace aqec::cli {
namespace {

using nlohmann::json;

// Substream indices reserved per random object so every draw derives from
// the master seed alone.
constexpr std::uint64_t kChannelStreamBase = 1000;
constexpr std::uint64_t kCodeStreamBase = 2000;

int line_of_byte(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

[[noreturn]] void fail(const std::string& filename, const std::string& path,
                       const std::string& msg) {
  throw ConfigError(filename + ": " + path + ": " + msg);
}

json parse_json(const std::string& text, const std::string& filename) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(filename + ":" +
                      std::to_string(line_of_byte(text, e.byte)) + ": " +
                      e.what());
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& filename,
                 const std::string& path) {
  if (!v.is_number()) fail(filename, path, "expected a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& filename,
                     const std::string& path) {
  if (!v.is_number_integer()) fail(filename, path, "expected an integer");
  return v.get<long long>();
}

std::string as_string(const json& v, const std::string& filename,
                      const std::string& path) {
  if (!v.is_string()) fail(filename, path, "expected a string");
  return v.get<std::string>();
}

void check_known_keys(const json& obj, const std::string& filename,
                      const std::string& path,
                      std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(filename, path, "unknown key '" + it.key() + "'");
  }
}

ChannelSpec parse_channel(const json& v, const std::string& filename,
                          const std::string& path) {
  if (!v.is_object()) fail(filename, path, "expected an object");
  check_known_keys(v, filename, path,
                   {"name", "params", "power", "keep", "seed", "M", "N"});
  ChannelSpec spec;
  const json* name = find(v, "name");
  if (!name) fail(filename, path, "missing 'name'");
  spec.name = as_string(*name, filename, path + "/name");

  if (spec.name == "random") {
    const json* m = find(v, "M");
    const json* n = find(v, "N");
    if (!m || !n) fail(filename, path, "random channel needs 'M' and 'N'");
    spec.m = int(as_integer(*m, filename, path + "/M"));
    spec.n = int(as_integer(*n, filename, path + "/N"));
    if (spec.m < 1 || spec.n < 1) {
      fail(filename, path, "'M' and 'N' must be positive");
    }
    if (const json* s = find(v, "seed")) {
      spec.seed = std::uint64_t(as_integer(*s, filename, path + "/seed"));
    }
    if (find(v, "params")) {
      fail(filename, path, "'params' does not apply to random channels");
    }
  } else {
    if (const json* params = find(v, "params")) {
      if (!params->is_object()) fail(filename, path + "/params", "expected an object");
      for (auto it = params->begin(); it != params->end(); ++it) {
        spec.params[it.key()] =
            as_number(it.value(), filename, path + "/params/" + it.key());
      }
    }
    for (const char* key : {"p", "gamma"}) {
      auto it = spec.params.find(key);
      if (it != spec.params.end() && !(it->second >= 0.0 && it->second <= 1.0)) {
        fail(filename, path + "/params/" + key, "parameter outside [0, 1]");
      }
    }
    if (find(v, "seed") || find(v, "M") || find(v, "N")) {
      fail(filename, path, "'seed'/'M'/'N' apply only to random channels");
    }
  }

  if (const json* power = find(v, "power")) {
    spec.power = int(as_integer(*power, filename, path + "/power"));
    if (spec.power < 1) fail(filename, path + "/power", "must be >= 1");
  }
  if (const json* keep = find(v, "keep")) {
    if (!keep->is_array()) fail(filename, path + "/keep", "expected an array");
    for (size_t i = 0; i < keep->size(); ++i) {
      spec.keep.push_back(int(as_integer(
          (*keep)[i], filename, path + "/keep/" + std::to_string(i))));
    }
    if (spec.keep.empty()) fail(filename, path + "/keep", "must be non-empty");
  }
  return spec;
}

CodeSpec parse_code(const json& v, const std::string& filename,
                    const std::string& path) {
  if (!v.is_object()) fail(filename, path, "expected an object");
  check_known_keys(v, filename, path, {"name", "random", "basis_file"});
  CodeSpec spec;
  const int given = (find(v, "name") != nullptr) +
                    (find(v, "random") != nullptr) +
                    (find(v, "basis_file") != nullptr);
  if (given != 1) {
    fail(filename, path, "give exactly one of 'name', 'random', 'basis_file'");
  }
  if (const json* name = find(v, "name")) {
    spec.kind = CodeSpec::Kind::named;
    spec.name = as_string(*name, filename, path + "/name");
    if (spec.name != "three_qubit_repetition") {
      fail(filename, path + "/name", "unknown code '" + spec.name + "'");
    }
  } else if (const json* rnd = find(v, "random")) {
    spec.kind = CodeSpec::Kind::random;
    if (!rnd->is_object()) fail(filename, path + "/random", "expected an object");
    check_known_keys(*rnd, filename, path + "/random", {"K", "seed"});
    const json* k = find(*rnd, "K");
    if (!k) fail(filename, path + "/random", "missing 'K'");
    spec.k = int(as_integer(*k, filename, path + "/random/K"));
    if (spec.k < 1) fail(filename, path + "/random/K", "must be >= 1");
    if (const json* s = find(*rnd, "seed")) {
      spec.seed = std::uint64_t(as_integer(*s, filename, path + "/random/seed"));
    }
  } else {
    spec.kind = CodeSpec::Kind::basis_file;
    spec.basis_file =
        as_string(*find(v, "basis_file"), filename, path + "/basis_file");
  }
  return spec;
}

EnsembleBlock parse_ensemble(const json& v, const std::string& filename,
                             const std::string& path) {
  if (!v.is_object()) fail(filename, path, "expected an object");
  check_known_keys(v, filename, path, {"K", "samples", "basis_file"});
  EnsembleBlock block;
  const json* k = find(v, "K");
  const json* samples = find(v, "samples");
  if (!k || !samples) fail(filename, path, "needs 'K' and 'samples'");
  block.k = int(as_integer(*k, filename, path + "/K"));
  block.samples = as_integer(*samples, filename, path + "/samples");
  if (block.k < 1) fail(filename, path + "/K", "must be >= 1");
  if (block.samples < 2) fail(filename, path + "/samples", "must be >= 2");
  if (const json* bf = find(v, "basis_file")) {
    block.basis_file = as_string(*bf, filename, path + "/basis_file");
  }
  return block;
}

MomentBlock parse_moment(const json& v, const std::string& filename,
                         const std::string& path) {
  if (!v.is_object()) fail(filename, path, "expected an object");
  check_known_keys(v, filename, path, {"M", "K", "samples"});
  MomentBlock block;
  const json* m = find(v, "M");
  const json* k = find(v, "K");
  const json* samples = find(v, "samples");
  if (!m || !k || !samples) fail(filename, path, "needs 'M', 'K', 'samples'");
  block.m = int(as_integer(*m, filename, path + "/M"));
  block.k = int(as_integer(*k, filename, path + "/K"));
  block.samples = as_integer(*samples, filename, path + "/samples");
  if (block.m < 1) fail(filename, path + "/M", "must be >= 1");
  if (block.k < 1 || block.k > block.m) {
    fail(filename, path + "/K", "must satisfy 1 <= K <= M");
  }
  if (block.samples < 2) fail(filename, path + "/samples", "must be >= 2");
  return block;
}

TypicalityBlock parse_typicality(const json& v, const std::string& filename,
                                 const std::string& path) {
  if (!v.is_object()) fail(filename, path, "expected an object");
  check_known_keys(v, filename, path, {"n", "epsilon", "rate"});
  TypicalityBlock block;
  const json* n = find(v, "n");
  const json* eps = find(v, "epsilon");
  if (!n || !eps) fail(filename, path, "needs 'n' and 'epsilon'");
  if (!n->is_array() || n->empty()) {
    fail(filename, path + "/n", "expected a non-empty array");
  }
  if (!eps->is_array() || eps->empty()) {
    fail(filename, path + "/epsilon", "expected a non-empty array");
  }
  for (size_t i = 0; i < n->size(); ++i) {
    const int ni =
        int(as_integer((*n)[i], filename, path + "/n/" + std::to_string(i)));
    if (ni < 1) fail(filename, path + "/n/" + std::to_string(i), "must be >= 1");
    block.n.push_back(ni);
  }
  for (size_t i = 0; i < eps->size(); ++i) {
    const double e = as_number((*eps)[i], filename,
                               path + "/epsilon/" + std::to_string(i));
    if (e <= 0.0) {
      fail(filename, path + "/epsilon/" + std::to_string(i),
           "must be positive");
    }
    block.epsilon.push_back(e);
  }
  if (const json* rate = find(v, "rate")) {
    const double r = as_number(*rate, filename, path + "/rate");
    if (r < 0.0) fail(filename, path + "/rate", "must be >= 0");
    block.rate = r;
  }
  return block;
}

ExperimentConfig parse_impl(const std::string& text,
                            const std::string& filename) {
  const json root = parse_json(text, filename);
  if (!root.is_object()) fail(filename, "/", "expected a JSON object");
  check_known_keys(root, filename, "/",
                   {"experiment", "master_seed", "output_path", "channel",
                    "code", "ensemble", "moment", "typicality", "limits"});

  ExperimentConfig cfg;
  cfg.source_text = text;
  const json* exp = find(root, "experiment");
  if (!exp) fail(filename, "/", "missing 'experiment'");
  cfg.experiment = as_string(*exp, filename, "/experiment");
  bool known = false;
  for (const std::string& e : kExperiments) known = known || e == cfg.experiment;
  if (!known) {
    fail(filename, "/experiment", "unknown experiment '" + cfg.experiment + "'");
  }

  if (const json* seed = find(root, "master_seed")) {
    cfg.master_seed =
        std::uint64_t(as_integer(*seed, filename, "/master_seed"));
  }
  if (const json* out = find(root, "output_path")) {
    cfg.output_path = as_string(*out, filename, "/output_path");
  }
  if (const json* v = find(root, "channel")) {
    cfg.channel = parse_channel(*v, filename, "/channel");
  }
  if (const json* v = find(root, "code")) {
    cfg.code = parse_code(*v, filename, "/code");
  }
  if (const json* v = find(root, "ensemble")) {
    cfg.ensemble = parse_ensemble(*v, filename, "/ensemble");
  }
  if (const json* v = find(root, "moment")) {
    cfg.moment = parse_moment(*v, filename, "/moment");
  }
  if (const json* v = find(root, "typicality")) {
    cfg.typicality = parse_typicality(*v, filename, "/typicality");
  }
  if (const json* v = find(root, "limits")) {
    if (!v->is_object()) fail(filename, "/limits", "expected an object");
    check_known_keys(*v, filename, "/limits",
                     {"max_dim", "enum_cap", "entry_cap"});
    if (const json* d = find(*v, "max_dim")) {
      cfg.limits.max_dim = int(as_integer(*d, filename, "/limits/max_dim"));
    }
    if (const json* d = find(*v, "enum_cap")) {
      cfg.limits.enum_cap = as_integer(*d, filename, "/limits/enum_cap");
    }
    if (const json* d = find(*v, "entry_cap")) {
      cfg.limits.entry_cap = as_integer(*d, filename, "/limits/entry_cap");
    }
    if (cfg.limits.max_dim < 1 || cfg.limits.enum_cap < 1 ||
        cfg.limits.entry_cap < 1) {
      fail(filename, "/limits", "limits must be positive");
    }
  }

  const auto need = [&](bool present, const char* block) {
    if (!present) {
      fail(filename, "/",
           "experiment '" + cfg.experiment + "' needs a '" + block + "' block");
    }
  };
  const std::string& e = cfg.experiment;
  if (e == "kl-check" || e == "bound" || e == "recovery-verify") {
    need(cfg.channel.has_value(), "channel");
    need(cfg.code.has_value(), "code");
  } else if (e == "ensemble-moment") {
    need(cfg.moment.has_value(), "moment");
  } else if (e == "ensemble-davg" || e == "ensemble-fidelity") {
    need(cfg.channel.has_value(), "channel");
    need(cfg.ensemble.has_value(), "ensemble");
  } else if (e == "typicality-trend" || e == "rate-report") {
    need(cfg.channel.has_value(), "channel");
    need(cfg.typicality.has_value(), "typicality");
    if (e == "rate-report" && !cfg.typicality->rate.has_value()) {
      fail(filename, "/typicality", "rate-report needs 'rate'");
    }
  } else if (e == "info-report") {
    need(cfg.channel.has_value(), "channel");
  }
  return cfg;
}

struct ChannelShape {
  int dim = 0;    // single-copy dimension, 0 when unknown
  int kraus = 0;  // single-copy Kraus count
};

ChannelShape shape_of(const ChannelSpec& spec) {
  if (spec.name == "random") return {spec.m, spec.n};
  if (spec.name == "identity") {
    auto it = spec.params.find("dim");
    return {it == spec.params.end() ? 2 : int(it->second), 1};
  }
  if (spec.name == "bit_flip" || spec.name == "phase_flip" ||
      spec.name == "amplitude_damping") {
    return {2, 2};
  }
  if (spec.name == "depolarizing") return {2, 4};
  if (spec.name == "three_qubit_bitflip_noise") return {8, 4};
  return {0, 0};
}

}  // namespace

const std::vector<std::string> kExperiments = {
    "kl-check",        "bound",           "recovery-verify",
    "ensemble-moment", "ensemble-davg",   "ensemble-fidelity",
    "typicality-trend", "rate-report",    "info-report"};

std::string ChannelSpec::label() const {
  std::ostringstream out;
  out << name;
  if (name == "random") {
    out << "(M=" << m << ";N=" << n << ";seed=" << seed << ")";
  } else if (!params.empty()) {
    out << "(";
    bool first = true;
    for (const auto& [key, value] : params) {
      if (!first) out << ";";
      first = false;
      out << key << "=" << value;
    }
    out << ")";
  }
  if (power > 1) out << "^" << power;
  if (!keep.empty()) out << "|keep=" << keep.size();
  return out.str();
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& filename) {
  return parse_impl(text, filename);
}

std::vector<std::string> validate_config(const std::string& text,
                                         const std::string& filename) {
  std::vector<std::string> diags;
  ExperimentConfig cfg;
  try {
    cfg = parse_impl(text, filename);
  } catch (const ConfigError& e) {
    diags.push_back(e.what());
    return diags;
  }

  // Capacity pre-checks; estimates only, the run enforces the hard caps.
  if (cfg.channel) {
    const ChannelShape shape = shape_of(*cfg.channel);
    if (shape.dim > 0) {
      const double dim =
          std::pow(double(shape.dim), double(cfg.channel->power));
      if (dim > cfg.limits.max_dim) {
        diags.push_back("capacity: channel dimension " +
                        std::to_string((long long)dim) + " exceeds max_dim " +
                        std::to_string(cfg.limits.max_dim));
      }
      if (cfg.typicality) {
        for (int n : cfg.typicality->n) {
          if (std::pow(dim, double(n)) > cfg.limits.max_dim) {
            diags.push_back(
                "capacity: typical-space dimension at n=" + std::to_string(n) +
                " exceeds max_dim; reduce n or raise limits");
            break;
          }
        }
        const int kraus = shape.kraus * cfg.channel->power;
        for (int n : cfg.typicality->n) {
          if (std::pow(double(kraus), double(n)) >
              double(cfg.limits.enum_cap)) {
            diags.push_back(
                "capacity: Kraus sequence count at n=" + std::to_string(n) +
                " exceeds enum_cap; prefer sampled typicality estimates");
            break;
          }
        }
      }
      if (cfg.ensemble && cfg.channel->name == "random") {
        const long long kn = (long long)cfg.ensemble->k * cfg.channel->n;
        if (kn > cfg.limits.max_dim) {
          diags.push_back("capacity: K*N = " + std::to_string(kn) +
                          " exceeds max_dim");
        }
      }
    }
  }
  return diags;
}

KrausChannel build_channel(const ChannelSpec& spec, std::uint64_t master_seed,
                           const Limits& limits) {
  KrausChannel ch = [&] {
    if (spec.name == "random") {
      RandomStream rng =
          RandomStream(master_seed).substream(kChannelStreamBase + spec.seed);
      return random_channel(spec.m, spec.n, rng);
    }
    return make_standard(spec.name, spec.params);
  }();
  if (spec.power > 1) ch = tensor_power(ch, spec.power, limits);
  if (!spec.keep.empty()) ch = restrict_kraus(ch, spec.keep);
  return ch;
}

CodeSpace build_code(const CodeSpec& spec, int ambient_dim,
                     std::uint64_t master_seed) {
  switch (spec.kind) {
    case CodeSpec::Kind::named: {
      CodeSpace code = repetition_code();
      if (code.ambient_dim() != ambient_dim) {
        throw InputError("code: three_qubit_repetition needs ambient dim 8");
      }
      return code;
    }
    case CodeSpec::Kind::random: {
      if (spec.k > ambient_dim) {
        throw InputError("code: K exceeds the channel dimension");
      }
      RandomStream rng =
          RandomStream(master_seed).substream(kCodeStreamBase + spec.seed);
      return random_code(ambient_dim, spec.k, rng);
    }
    case CodeSpec::Kind::basis_file: {
      CMat basis = load_orthonormal_basis(spec.basis_file);
      if (basis.rows() != ambient_dim) {
        throw InputError("code: basis rows do not match the channel dimension");
      }
      return CodeSpace::make(std::move(basis));
    }
  }
  throw InputError("code: unreachable kind");
}

CMat load_basis_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open basis file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json root;
  try {
    root = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw InputError("basis file " + path + ": " + e.what());
  }
  if (!root.is_array() || root.empty()) {
    throw InputError("basis file " + path + ": expected an array of columns");
  }
  const size_t k = root.size();
  size_t m = 0;
  CMat basis;
  for (size_t j = 0; j < k; ++j) {
    const json& col = root[j];
    if (!col.is_array() || col.empty()) {
      throw InputError("basis file " + path + ": column " + std::to_string(j) +
                       " must be a non-empty array");
    }
    if (j == 0) {
      m = col.size();
      basis = CMat::Zero(Eigen::Index(m), Eigen::Index(k));
    } else if (col.size() != m) {
      throw InputError("basis file " + path + ": columns differ in length");
    }
    for (size_t i = 0; i < m; ++i) {
      const json& entry = col[i];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw InputError("basis file " + path +
                         ": entries must be [re, im] pairs");
      }
      basis(Eigen::Index(i), Eigen::Index(j)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return basis;
}

CMat load_orthonormal_basis(const std::string& path) {
  CMat basis = load_basis_matrix(path);
  const CMat gram = basis.adjoint() * basis;
  const double residual =
      (gram - CMat::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw PreconditionError("basis file columns are not orthonormal", residual);
  }
  // Polish near-orthonormal input so library invariants hold exactly; the
  // diagonal phase fix keeps the polished columns close to the originals.
  Eigen::HouseholderQR<CMat> qr(basis);
  CMat q = qr.householderQ() * CMat::Identity(basis.rows(), basis.cols());
  const CMat r = qr.matrixQR().topRows(basis.cols());
  for (int j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace aqec::cli

