#include "runner.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "aqec/ensemble.hpp"
#include "aqec/info.hpp"
#include "aqec/qec.hpp"
#include "aqec/typicality.hpp"
#include "aqec/version.hpp"
#include "csv.hpp"

namespace aqec::cli {
namespace {

using nlohmann::json;

EnsembleSpec make_ensemble_spec(const ExperimentConfig& cfg,
                                const KrausChannel& ch) {
  const EnsembleBlock& block = *cfg.ensemble;
  EnsembleSpec spec;
  if (block.basis_file.empty()) {
    spec.v_basis = CMat::Identity(ch.in_dim, ch.in_dim);
  } else {
    spec.v_basis = load_orthonormal_basis(block.basis_file);
    if (spec.v_basis.rows() != ch.in_dim) {
      throw InputError("ensemble: basis rows do not match the channel");
    }
  }
  spec.code_dim = block.k;
  spec.samples = block.samples;
  spec.master_seed = cfg.master_seed;
  return spec;
}

double display_sigmas(const MCEstimate& est, double reference) {
  if (est.sigmas) return *est.sigmas;
  if (est.std_error <= 0.0) return 0.0;
  return (est.mean - reference) / est.std_error;
}

CsvTable run_kl_check(const ExperimentConfig& cfg, const KrausChannel& ch,
                      const CodeSpace& code) {
  const KLReport kl = kl_check(ch, code);
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("K", code.dim())
      .col("residual", kl.residual)
      .col("exact", kl.exact)
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_bound(const ExperimentConfig& cfg, const KrausChannel& ch,
                   const CodeSpace& code) {
  const DReport d = build_D(ch, code, cfg.limits);
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("K", code.dim())
      .col("selection_prob", d.selection_probability)
      .col("trace_norm_d", d.trace_norm_D)
      .col("frobenius_sq_d", d.frobenius_sq_D)
      .col("fidelity_lower_bound", d.fidelity_lower_bound)
      .col("clamped_bound", d.clamped_bound())
      .col("max_abs_eigenvalue", d.max_abs_eigenvalue)
      .col("eigen_spread", d.eigen_spread)
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_recovery_verify(const ExperimentConfig& cfg,
                             const KrausChannel& ch, const CodeSpace& code) {
  const KLReport kl = kl_check(ch, code);
  const DReport d = build_D(ch, code, cfg.limits);
  const KrausChannel recovery = kl.exact
                                    ? exact_recovery(ch, code)
                                    : uhlmann_recovery(ch, code, cfg.limits);
  const KrausChannel composed = compose(recovery, ch, cfg.limits);
  const double achieved = entanglement_fidelity(composed, code.uniform_state());
  const double guarantee =
      d.selection_probability - d.trace_norm_D - 1e-6;
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("K", code.dim())
      .col("method", std::string(kl.exact ? "exact" : "uhlmann"))
      .col("residual", kl.residual)
      .col("selection_prob", d.selection_probability)
      .col("trace_norm_d", d.trace_norm_D)
      .col("guarantee", guarantee)
      .col("achieved_fe", achieved)
      .col("pass", achieved >= guarantee)
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_ensemble_moment(const ExperimentConfig& cfg) {
  const MomentBlock& block = *cfg.moment;
  const MCEstimate est = mc_projector_moment(block.m, block.k, block.samples,
                                             cfg.master_seed);
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("M", block.m)
      .col("K", block.k)
      .col("samples", est.samples)
      .col("mean", est.mean)
      .col("std_error", est.std_error)
      .col("closed_form", est.closed_form.value())
      .col("sigmas", est.sigmas.value())
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_ensemble_davg(const ExperimentConfig& cfg,
                           const KrausChannel& ch) {
  const EnsembleSpec spec = make_ensemble_spec(cfg, ch);
  const MCEstimate est = mc_avg_d_frobenius_sq(ch, spec);
  const double reference =
      est.closed_form ? *est.closed_form : est.upper_bound.value();
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("N", ch.kraus_count())
      .col("K", spec.code_dim)
      .col("samples", est.samples)
      .col("mean", est.mean)
      .col("std_error", est.std_error)
      .col("reference", reference)
      .col("reference_is_exact", est.closed_form.has_value())
      .col("sigmas", display_sigmas(est, reference))
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_ensemble_fidelity(const ExperimentConfig& cfg,
                               const KrausChannel& ch) {
  const EnsembleSpec spec = make_ensemble_spec(cfg, ch);
  const EnsembleFidelityReport report = mc_ensemble_fidelity(ch, spec);
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("N", ch.kraus_count())
      .col("K", spec.code_dim)
      .col("samples", report.per_code_bound.samples)
      .col("mean_bound", report.per_code_bound.mean)
      .col("std_error", report.per_code_bound.std_error)
      .col("analytic_bound", report.analytic_bound)
      .col("mean_trace_norm_d", report.mean_trace_norm_d)
      .col("mean_frobenius_sq_d", report.mean_frobenius_sq_d)
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable run_typicality_trend(const ExperimentConfig& cfg,
                              const KrausChannel& ch) {
  if (!ch.square()) throw InputError("typicality: channel must be square");
  const CMat v = CMat::Identity(ch.in_dim, ch.in_dim);
  CsvTable table;
  for (double eps : cfg.typicality->epsilon) {
    for (int n : cfg.typicality->n) {
      const TypicalReduction red = reduced_operation(ch, v, n, eps, cfg.limits);
      table.row()
          .col("experiment", cfg.experiment)
          .col("channel", cfg.channel->label())
          .col("n", n)
          .col("epsilon", eps)
          .col("kraus_count", red.kraus_count)
          .col("nonzero_kraus_count", red.nonzero_kraus_count)
          .col("subspace_dim", red.typical_subspace_dim)
          .col("kraus_mass", red.kraus_mass)
          .col("subspace_mass", red.subspace_mass)
          .col("selection_prob", red.selection_prob)
          .col("frobenius_sq", red.frobenius_sq)
          .col("entropy_h", red.entropy_h)
          .col("entropy_s", red.entropy_s)
          .col("seed", cfg.master_seed)
          .done();
    }
  }
  return table;
}

CsvTable run_rate_report(const ExperimentConfig& cfg, const KrausChannel& ch) {
  if (!ch.square()) throw InputError("typicality: channel must be square");
  const CMat v = CMat::Identity(ch.in_dim, ch.in_dim);
  const double rate = cfg.typicality->rate.value();
  CsvTable table;
  for (double eps : cfg.typicality->epsilon) {
    for (int n : cfg.typicality->n) {
      const RateBoundReport rep =
          rate_bound_report(ch, v, n, eps, rate, cfg.limits);
      table.row()
          .col("experiment", cfg.experiment)
          .col("channel", cfg.channel->label())
          .col("n", n)
          .col("epsilon", eps)
          .col("rate", rate)
          .col("code_dim", rep.code_dim)
          .col("kraus_count", rep.kraus_count)
          .col("nonzero_kraus_count", rep.nonzero_kraus_count)
          .col("alpha_n", rep.alpha_n)
          .col("beta_n", rep.beta_n)
          .col("bound", rep.bound)
          .col("coherent_info", rep.coherent_info)
          .col("beta_exponent", rep.beta_exponent)
          .col("seed", cfg.master_seed)
          .done();
    }
  }
  return table;
}

CsvTable run_info_report(const ExperimentConfig& cfg, const KrausChannel& ch) {
  DensityMatrix rho = max_mixed(ch.in_dim);
  int support = ch.in_dim;
  if (cfg.code) {
    const CodeSpace code = build_code(*cfg.code, ch.in_dim, cfg.master_seed);
    rho = code.uniform_state();
    support = code.dim();
  }
  const CMat output = apply(ch, rho).output.mat;
  const double s_out = spectrum_entropy(output);
  const double s_e = entropy_exchange(ch, rho);
  const double coherent = s_out - s_e;
  const UnitalRateReport unital = unital_rate_report(ch);
  CsvTable table;
  table.row()
      .col("experiment", cfg.experiment)
      .col("channel", cfg.channel->label())
      .col("M", ch.in_dim)
      .col("K", support)
      .col("entropy_output", s_out)
      .col("entropy_exchange", s_e)
      .col("coherent_info", coherent)
      .col("unital", unital.unital)
      .col("nonzero_kraus", unital.nonzero_kraus)
      .col("rate_log", unital.rate_log)
      .col("rates_coincide", unital.rates_coincide)
      .col("seed", cfg.master_seed)
      .done();
  return table;
}

CsvTable dispatch(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "ensemble-moment") return run_ensemble_moment(cfg);

  const KrausChannel ch =
      build_channel(*cfg.channel, cfg.master_seed, cfg.limits);
  if (e == "ensemble-davg") return run_ensemble_davg(cfg, ch);
  if (e == "ensemble-fidelity") return run_ensemble_fidelity(cfg, ch);
  if (e == "typicality-trend") return run_typicality_trend(cfg, ch);
  if (e == "rate-report") return run_rate_report(cfg, ch);
  if (e == "info-report") return run_info_report(cfg, ch);

  const CodeSpace code = build_code(*cfg.code, ch.in_dim, cfg.master_seed);
  if (e == "kl-check") return run_kl_check(cfg, ch, code);
  if (e == "bound") return run_bound(cfg, ch, code);
  if (e == "recovery-verify") return run_recovery_verify(cfg, ch, code);
  throw ConfigError("unknown experiment: " + e);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << text;
  if (!out) throw InputError("failed writing output file: " + path);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const CsvTable table = dispatch(cfg);
  const std::string csv = table.text();
  const double wall_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();

  RunResult result;
  result.csv_path = cfg.output_path.empty() ? "aqec_out.csv" : cfg.output_path;
  result.sidecar_path = result.csv_path + ".meta.json";
  result.rows = int(std::count(csv.begin(), csv.end(), '\n')) - 1;

  json sidecar;
  sidecar["version"] = kVersion;
  sidecar["experiment"] = cfg.experiment;
  sidecar["wall_time_ms"] = wall_ms;
  sidecar["rows"] = result.rows;
  sidecar["config"] = json::parse(cfg.source_text);
  sidecar["effective"] = {
      {"master_seed", cfg.master_seed},
      {"output_path", result.csv_path},
      {"max_dim", cfg.limits.max_dim},
      {"enum_cap", cfg.limits.enum_cap},
      {"entry_cap", cfg.limits.entry_cap},
  };

  write_file(result.csv_path, csv);
  write_file(result.sidecar_path, sidecar.dump(2) + "\n");
  return result;
}

}  // namespace aqec::cli
