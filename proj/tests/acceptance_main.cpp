// Acceptance suite: one line per criterion, nonzero exit if any fails.
// argv[1] is the path to the aqec CLI binary (used by the determinism check).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/ensemble.hpp"
#include "aqec/info.hpp"
#include "aqec/linalg.hpp"
#include "aqec/qec.hpp"
#include "aqec/random.hpp"
#include "aqec/typicality.hpp"
#include "aqec/types.hpp"
#include "oracles.hpp"

using namespace aqec;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// budget_s <= 0 means no runtime requirement for the criterion.
bool run_criterion(int id, const char* slug, double budget_s,
                   const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  bool pass = out.pass;
  std::string details = out.details;
  if (budget_s > 0.0 && dt >= budget_s) {
    pass = false;
    details += "; over " + fmt(budget_s) + " s budget";
  }
  std::printf("criterion %2d [%s]: %s (%s; %.2f s)\n", id, slug,
              pass ? "PASS" : "FAIL", details.c_str(), dt);
  std::fflush(stdout);
  return pass;
}

DensityMatrix gaussian_state(int dim, RandomStream& rng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  }
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::checked(rho);
}

KrausChannel tensor2(const KrausChannel& a, const KrausChannel& b) {
  std::vector<CMat> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const CMat& x : a.kraus) {
    for (const CMat& y : b.kraus) ops.push_back(kron(x, y));
  }
  return KrausChannel::make(std::move(ops));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome projector_moment() {
  const int grid[3][2] = {{2, 1}, {4, 2}, {8, 3}};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const MCEstimate est =
        mc_projector_moment(grid[i][0], grid[i][1], 20000, 100 + i);
    if (!est.sigmas.has_value()) return {false, "missing closed form"};
    worst = std::max(worst, *est.sigmas);
  }
  return {worst <= 3.0, "3 size pairs, 2e4 samples, max sigmas " + fmt(worst)};
}

Outcome ensemble_defect_moment() {
  const RandomStream base(7);
  double worst = 0.0;
  int idx = 0;
  for (int m : {4, 8}) {
    for (int n : {2, 3}) {
      for (int k : {2, 3}) {
        RandomStream rng = base.substream(200 + idx);
        const KrausChannel ch = random_channel(m, n, rng);
        const EnsembleSpec spec = full_space_ensemble(m, k, 5000, 400 + idx);
        const MCEstimate est = mc_avg_d_frobenius_sq(ch, spec);
        if (!est.sigmas.has_value()) return {false, "missing closed form"};
        worst = std::max(worst, *est.sigmas);
        ++idx;
      }
    }
  }
  return {worst <= 3.0, "12 grid points, 5e3 samples, max sigmas " + fmt(worst)};
}

Outcome exact_code_zero_defect() {
  const CodeSpace code = repetition_code();
  double worst_res = 0.0, worst_tn = 0.0, worst_fe = 1.0;
  for (double p : {0.05, 0.2, 0.5}) {
    const KrausChannel ch = three_qubit_bitflip_noise(p);
    const KLReport kl = kl_check(ch, code);
    if (!kl.exact) return {false, "correctability not flagged at p=" + fmt(p)};
    worst_res = std::max(worst_res, kl.residual);
    const DReport d = build_D(ch, code);
    worst_tn = std::max(worst_tn, d.trace_norm_D);
    const KrausChannel rec = exact_recovery(ch, code);
    const double fe =
        entanglement_fidelity(compose(rec, ch), code.uniform_state());
    worst_fe = std::min(worst_fe, fe);
  }
  const bool pass =
      worst_res <= 1e-10 && worst_tn <= 1e-9 && worst_fe >= 1.0 - 1e-8;
  return {pass, "residual " + fmt(worst_res) + ", |D|_tr " + fmt(worst_tn) +
                    ", recovered F_e " + fmt(worst_fe)};
}

Outcome near_optimal_recovery() {
  const RandomStream base(11);
  double worst_margin = 1.0;
  int idx = 0, checked = 0;
  const auto check = [&](const KrausChannel& ch, const CodeSpace& code) {
    const DReport d = build_D(ch, code);
    const KrausChannel rec = uhlmann_recovery(ch, code);
    const double fe =
        entanglement_fidelity(compose(rec, ch), code.uniform_state());
    const double guarantee =
        d.selection_probability - d.trace_norm_D - 1e-6;
    worst_margin = std::min(worst_margin, fe - guarantee);
    ++checked;
  };
  for (int m : {4, 8}) {
    for (int n : {2, 3}) {
      for (int s = 0; s < 5; ++s) {
        RandomStream rng = base.substream(idx++);
        const KrausChannel ch = random_channel(m, n, rng);
        check(ch, random_code(m, 2, rng));
      }
    }
  }
  for (int s = 0; s < 5; ++s) {
    RandomStream rng = base.substream(100 + s);
    const KrausChannel full = random_channel(4, 3, rng);
    check(restrict_kraus(full, {0, 1}), random_code(4, 2, rng));
  }
  return {worst_margin >= 0.0, std::to_string(checked) +
                                   " instances incl. 5 selective, worst "
                                   "margin over guarantee " +
                                   fmt(worst_margin)};
}

Outcome representation_independence() {
  const RandomStream base(13);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    RandomStream rng = base.substream(i);
    const int m = (i % 2 == 0) ? 4 : 8;
    const int n = (i % 3 == 0) ? 3 : 2;
    const KrausChannel ch = random_channel(m, n, rng);
    const CodeSpace code = random_code(m, 2, rng);
    const double before = build_D(ch, code).trace_norm_D;
    const KrausChannel rotated = diagonalize_kraus(ch, code.projector());
    const double after = build_D(rotated, code).trace_norm_D;
    worst = std::max(worst, std::abs(before - after));
  }
  return {worst <= 1e-9, "10 instances, max |D|_tr shift " + fmt(worst)};
}

Outcome entropy_exchange_agreement() {
  const RandomStream base(17);
  double worst_se = 0.0;
  for (int i = 0; i < 10; ++i) {
    RandomStream rng = base.substream(i);
    const KrausChannel ch = random_channel(4, 2 + (i % 2), rng);
    const DensityMatrix rho = gaussian_state(4, rng);
    const double se = entropy_exchange(ch, rho);
    const double ref = oracle::purification_entropy(ch, rho);
    worst_se = std::max(worst_se, std::abs(se - ref));
  }
  if (worst_se > 1e-8) {
    return {false, "purification mismatch " + fmt(worst_se)};
  }

  double worst_pf = 0.0;
  for (double p : {0.1, 0.3, 0.5}) {
    const double info = coherent_information(phase_flip(p), max_mixed(2));
    worst_pf = std::max(worst_pf, std::abs(info - (1.0 - binary_entropy(p))));
  }
  if (worst_pf > 1e-9) {
    return {false, "dephasing coherent info off by " + fmt(worst_pf)};
  }

  for (int i = 0; i < 10; ++i) {
    RandomStream rng = base.substream(50 + i);
    const KrausChannel ch1 = random_channel(4, 2, rng);
    const KrausChannel ch2 = random_channel(4, 2, rng);
    const DensityMatrix rho = gaussian_state(4, rng);
    const DataProcessingReport rep = data_processing_check(ch1, ch2, rho);
    if (!rep.pass) {
      return {false, "data processing violated at instance " +
                         std::to_string(i)};
    }
  }
  return {true, "purification gap " + fmt(worst_se) + ", dephasing gap " +
                    fmt(worst_pf) + ", 10 composed chains ordered"};
}

Outcome typical_set_counts() {
  KrausDistribution dist;
  dist.probs = {0.9, 0.1};
  dist.entropy_bits = binary_entropy(0.1);
  CMat diag = CMat::Zero(2, 2);
  diag(0, 0) = 0.9;
  diag(1, 1) = 0.1;
  const DensityMatrix sigma = DensityMatrix::checked(diag);
  double worst_mass = 0.0;
  for (double eps : {0.1, 0.2}) {
    const TypicalSetSummary en = typical_set_enumerate(dist, 10, eps);
    const oracle::TypicalCounts ref =
        oracle::exhaustive_typical(dist.probs, 10, eps);
    if (static_cast<long long>(en.count) != ref.count) {
      return {false, "count " + fmt(en.count) + " vs exhaustive " +
                         std::to_string(ref.count) + " at eps=" + fmt(eps)};
    }
    worst_mass = std::max(worst_mass, std::abs(en.mass - ref.mass));
    if (en.count > std::exp2(en.log2_upper) * (1.0 + 1e-12)) {
      return {false, "count exceeds 2^{n(H+eps)} at eps=" + fmt(eps)};
    }
    const TypicalSubspace sub = typical_subspace_projector(sigma, 10, eps);
    if (sub.dim != static_cast<long long>(en.count)) {
      return {false, "subspace dim " + std::to_string(sub.dim) +
                         " != sequence count at eps=" + fmt(eps)};
    }
    const double dim_cap = 10.0 * (binary_entropy(0.1) + eps);
    if (sub.dim > std::exp2(dim_cap) * (1.0 + 1e-12)) {
      return {false, "subspace dim exceeds 2^{n(S+eps)} at eps=" + fmt(eps)};
    }
  }
  return {worst_mass <= 1e-13,
          "counts exact vs exhaustive, mass gap " + fmt(worst_mass)};
}

Outcome typical_reduction_trend() {
  const KrausChannel ch = phase_flip(0.1);
  const CMat v = CMat::Identity(2, 2);
  std::vector<double> masses, frobs, entropies;
  for (int n : {2, 4, 6, 8}) {
    const TypicalReduction red = reduced_operation(ch, v, n, 0.15);
    masses.push_back(red.selection_prob);
    frobs.push_back(red.frobenius_sq);
    entropies.push_back(red.entropy_s);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < masses.size(); ++i) {
    monotone = monotone && masses[i] >= masses[i - 1] - 1e-12;
  }
  bool decay_ok = true;
  const int ns[4] = {2, 4, 6, 8};
  for (std::size_t i = 0; i < frobs.size(); ++i) {
    const double cap = std::exp2(-ns[i] * (entropies[i] - 3.0 * 0.15));
    decay_ok = decay_ok && frobs[i] <= cap * (1.0 + 1e-12);
  }
  const bool mass_target = masses.back() >= 0.5;
  const bool pass = monotone && decay_ok && mass_target;
  std::string details = "selection " + fmt(masses.front()) + " -> " +
                        fmt(masses.back()) +
                        (monotone ? ", non-decreasing" : ", NOT monotone") +
                        (decay_ok ? ", frobenius decay ok" : ", decay broken");
  if (!mass_target) {
    details += ", final selection " + fmt(masses.back()) +
               " < 0.5 (window at eps=0.15 keeps only the single dominant "
               "type class for n <= 8)";
  }
  return {pass, details};
}

Outcome rate_bound_trend() {
  const KrausChannel ch = phase_flip(0.1);
  const CMat v = CMat::Identity(2, 2);
  std::vector<double> low_bounds, high_betas;
  for (int n : {4, 6, 8, 10}) {
    low_bounds.push_back(rate_bound_report(ch, v, n, 0.1, 0.2).bound);
    high_betas.push_back(rate_bound_report(ch, v, n, 0.1, 0.9).beta_n);
  }
  const auto trending_up = [](const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i] < xs[i - 1] - 1e-12) return false;
    }
    return xs.back() > xs.front() + 1e-12;
  };
  const bool low_ok = trending_up(low_bounds);
  const bool high_ok = trending_up(high_betas);
  return {low_ok && high_ok,
          "below-capacity bound " + fmt(low_bounds.front()) + " -> " +
              fmt(low_bounds.back()) + ", above-capacity beta " +
              fmt(high_betas.front()) + " -> " + fmt(high_betas.back())};
}

Outcome fidelity_ordering_and_subcode() {
  const RandomStream base(23);
  double worst_gap = -1.0;
  for (int i = 0; i < 10; ++i) {
    RandomStream rng = base.substream(i);
    const KrausChannel ch = random_channel(4, 2, rng);
    const CodeSpace code = random_code(4, 2, rng);
    const double fe = entanglement_fidelity(ch, code.uniform_state());
    const MCEstimate fav = average_channel_fidelity_mc(ch, code, 2000, rng);
    const double slack = fav.mean + 3.0 * fav.std_error - fe;
    worst_gap = std::max(worst_gap, -slack);
  }
  if (worst_gap > 0.0) {
    return {false, "entanglement fidelity exceeded average by " +
                       fmt(worst_gap)};
  }

  const std::vector<KrausChannel> noises = {
      tensor2(bit_flip(0.01), bit_flip(0.01)),
      tensor2(phase_flip(0.02), phase_flip(0.02)),
      tensor2(depolarizing(0.03), identity_channel(2)),
      tensor2(amplitude_damping(0.05), identity_channel(2)),
      tensor2(bit_flip(0.015), phase_flip(0.015))};
  const CodeSpace full4 = CodeSpace::make(CMat::Identity(4, 4));
  double worst_min = 1.0, worst_need = 0.0;
  for (std::size_t i = 0; i < noises.size(); ++i) {
    const KrausChannel& ch = noises[i];
    const double eps =
        1.0 - entanglement_fidelity(ch, full4.uniform_state());
    if (eps > 0.05) {
      return {false, "noise instance " + std::to_string(i) +
                         " too strong: eps=" + fmt(eps)};
    }
    RandomStream rng = base.substream(100 + static_cast<int>(i));
    const SubcodeResult sub = extract_subcode(ch, full4, 2, rng);
    double min_fid = 1.0;
    for (int probe = 0; probe < 200; ++probe) {
      const CVec psi = sub.subcode.basis * random_pure_state(2, rng);
      const CMat out = apply(ch, pure_state(psi)).output.mat;
      min_fid = std::min(min_fid, (psi.adjoint() * out * psi)(0, 0).real());
    }
    const double need = 1.0 - 2.0 * eps - 0.01;
    if (min_fid < need) {
      return {false, "subcode " + std::to_string(i) + " min fidelity " +
                         fmt(min_fid) + " < " + fmt(need)};
    }
    worst_min = std::min(worst_min, min_fid);
    worst_need = std::max(worst_need, 1.0 - 2.0 * eps - 0.01);
  }
  return {true, "F_e <= F_avg on 10 instances, 5 halved codes with min "
                "fidelity >= " +
                    fmt(worst_min) + " (needed " + fmt(worst_need) + ")"};
}

Outcome cli_determinism(const std::string& binary) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "aqec_acceptance";
  fs::create_directories(dir);

  const std::pair<const char*, const char*> configs[2] = {
      {"davg.json", R"({
        "experiment": "ensemble-davg",
        "master_seed": 5,
        "channel": {"name": "random", "M": 6, "N": 2, "seed": 3},
        "ensemble": {"K": 2, "samples": 400}
      })"},
      {"rate.json", R"({
        "experiment": "rate-report",
        "master_seed": 1,
        "channel": {"name": "phase_flip", "params": {"p": 0.1}},
        "typicality": {"n": [4, 6], "epsilon": [0.1], "rate": 0.5}
      })"}};

  for (const auto& [name, text] : configs) {
    const fs::path cfg = dir / name;
    std::ofstream(cfg, std::ios::binary) << text;
    const fs::path out_a = dir / (std::string(name) + ".a.csv");
    const fs::path out_b = dir / (std::string(name) + ".b.csv");
    for (const fs::path& out : {out_a, out_b}) {
      const std::string cmd = "\"" + binary + "\" run \"" + cfg.string() +
                              "\" --out \"" + out.string() +
                              "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        return {false, std::string("run failed for ") + name};
      }
    }
    const std::string a = slurp(out_a);
    if (a.empty() || a != slurp(out_b)) {
      return {false, std::string("reruns differ for ") + name};
    }
  }
  return {true, "2 experiments rerun byte-identically through the binary"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-aqec-binary>\n", argv[0]);
    return 2;
  }
  const std::string binary = argv[1];

  bool all = true;
  all &= run_criterion(1, "random-code-projector-moment", 30.0,
                       projector_moment);
  all &= run_criterion(2, "ensemble-defect-moment", 120.0,
                       ensemble_defect_moment);
  all &= run_criterion(3, "exact-code-zero-defect", 5.0,
                       exact_code_zero_defect);
  all &= run_criterion(4, "transfer-recovery-guarantee", 120.0,
                       near_optimal_recovery);
  all &= run_criterion(5, "representation-independence", 0.0,
                       representation_independence);
  all &= run_criterion(6, "entropy-exchange-coherent-info", 0.0,
                       entropy_exchange_agreement);
  all &= run_criterion(7, "typical-set-counts", 0.0, typical_set_counts);
  all &= run_criterion(8, "typical-reduction-trend", 60.0,
                       typical_reduction_trend);
  all &= run_criterion(9, "rate-bound-trend", 60.0, rate_bound_trend);
  all &= run_criterion(10, "fidelity-ordering-and-subcode", 0.0,
                       fidelity_ordering_and_subcode);
  all &= run_criterion(11, "cli-determinism", 0.0,
                       [&] { return cli_determinism(binary); });

  if (!all) {
    std::printf("acceptance: FAIL\n");
    return 1;
  }
  std::printf("acceptance: PASS\n");
  return 0;
}
