#include "aqec/ensemble.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "aqec/qec.hpp"

namespace aqec {
namespace {

void validate_spec(const EnsembleSpec& spec) {
  if (spec.v_basis.rows() < 1 || spec.v_basis.cols() < 1) {
    throw InputError("ensemble: empty subspace basis");
  }
  const CMat gram = spec.v_basis.adjoint() * spec.v_basis;
  if ((gram - CMat::Identity(spec.v_dim(), spec.v_dim()))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw InputError("ensemble: subspace basis is not orthonormal");
  }
  if (spec.code_dim < 1 || spec.code_dim > spec.v_dim()) {
    throw InputError("ensemble: code_dim outside [1, dim V]");
  }
  if (spec.samples < 2) throw InputError("ensemble: need at least 2 samples");
}

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  long long n = 0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / double(n);
    m2 += delta * (x - mean);
  }
  double std_error() const {
    return n > 1 ? std::sqrt(m2 / double(n - 1) / double(n)) : 0.0;
  }
};

void attach_reference(MCEstimate& est, double reference) {
  est.closed_form = reference;
  const double diff = std::abs(est.mean - reference);
  est.sigmas = diff == 0.0 ? 0.0 : diff / est.std_error;
}

// N(pi_V) for pi_V = V V^dagger / L.
CMat channel_on_uniform_v(const KrausChannel& ch, const CMat& v_basis) {
  const double l = double(v_basis.cols());
  CMat out = CMat::Zero(ch.out_dim, ch.out_dim);
  for (const CMat& a : ch.kraus) {
    const CMat av = a * v_basis;
    out += av * av.adjoint() / l;
  }
  return out;
}

// Count of Kraus operators surviving diagonalization over the full space.
int nonzero_kraus_count(const KrausChannel& ch, const Tols& tols) {
  const KrausChannel diag =
      diagonalize_kraus(ch, CMat::Identity(ch.in_dim, ch.in_dim), tols);
  int count = 0;
  for (const CMat& a : diag.kraus) {
    if (a.norm() > tols.prune) ++count;
  }
  return count;
}

}  // namespace

EnsembleSpec full_space_ensemble(int M, int K, long long samples,
                                 std::uint64_t master_seed) {
  EnsembleSpec spec;
  spec.v_basis = CMat::Identity(M, M);
  spec.code_dim = K;
  spec.samples = samples;
  spec.master_seed = master_seed;
  return spec;
}

CodeSpace sample_code(const EnsembleSpec& spec, RandomStream& rng) {
  validate_spec(spec);
  const CodeSpace inner = random_code(spec.v_dim(), spec.code_dim, rng);
  CodeSpace code;
  code.basis = spec.v_basis * inner.basis;
  return code;
}

MCEstimate mc_projector_moment(int M, int K, long long samples,
                               std::uint64_t master_seed) {
  EnsembleSpec spec = full_space_ensemble(M, K, samples, master_seed);
  validate_spec(spec);
  const CVec psi = CVec::Unit(M, 0);
  RandomStream master(master_seed);
  Welford acc;
  for (long long s = 0; s < samples; ++s) {
    RandomStream task = master.substream(std::uint64_t(s));
    const CodeSpace code = sample_code(spec, task);
    const double overlap = (code.basis.adjoint() * psi).squaredNorm();
    acc.add(overlap * overlap);
  }
  MCEstimate est;
  est.mean = acc.mean;
  est.std_error = acc.std_error();
  est.samples = samples;
  attach_reference(est, double(K) * (K + 1) / (double(M) * (M + 1)));
  return est;
}

double closed_form_avg_d_frobenius_sq(const KrausChannel& ch, int K) {
  if (!ch.square()) {
    throw InputError("closed_form_avg_d_frobenius_sq: channel must be square");
  }
  const int M = ch.in_dim;
  if (K < 1 || K > M) {
    throw InputError("closed_form_avg_d_frobenius_sq: K outside [1, M]");
  }
  if (M < 2) {
    throw InputError("closed_form_avg_d_frobenius_sq: need M >= 2");
  }
  double sum = 0.0;
  for (const CMat& ai : ch.kraus) {
    for (const CMat& aj : ch.kraus) {
      const CMat w = ai.adjoint() * aj;
      sum += w.squaredNorm() - std::norm(w.trace()) / double(M);
    }
  }
  const double k2 = double(K) * K;
  return (1.0 - 1.0 / k2) / (double(M) * M - 1.0) * sum;
}

double avg_d_frobenius_sq_upper_bound(const KrausChannel& ch,
                                      const CMat& v_basis) {
  return channel_on_uniform_v(ch, v_basis).squaredNorm();
}

MCEstimate mc_avg_d_frobenius_sq(const KrausChannel& ch,
                                 const EnsembleSpec& spec) {
  validate_spec(spec);
  if (ch.in_dim != spec.ambient_dim()) {
    throw InputError("mc_avg_d_frobenius_sq: dimension mismatch");
  }
  RandomStream master(spec.master_seed);
  Welford acc;
  for (long long s = 0; s < spec.samples; ++s) {
    RandomStream task = master.substream(std::uint64_t(s));
    const CodeSpace code = sample_code(spec, task);
    acc.add(build_D(ch, code).frobenius_sq_D);
  }
  MCEstimate est;
  est.mean = acc.mean;
  est.std_error = acc.std_error();
  est.samples = spec.samples;
  if (spec.v_dim() == spec.ambient_dim()) {
    attach_reference(est, closed_form_avg_d_frobenius_sq(ch, spec.code_dim));
  } else {
    est.upper_bound = avg_d_frobenius_sq_upper_bound(ch, spec.v_basis);
  }
  return est;
}

double ensemble_fidelity_bound(const KrausChannel& ch, int K,
                               const CMat& v_basis, const Tols& tols) {
  if (!ch.square() || ch.in_dim != v_basis.rows()) {
    throw InputError("ensemble_fidelity_bound: dimension mismatch");
  }
  const CMat sigma = channel_on_uniform_v(ch, v_basis);
  const int n_eff = nonzero_kraus_count(ch, tols);
  return sigma.trace().real() -
         std::sqrt(double(K) * n_eff) * sigma.norm();
}

MCEstimate mc_trace_identity(const KrausChannel& ch, const EnsembleSpec& spec) {
  validate_spec(spec);
  if (ch.in_dim != spec.ambient_dim()) {
    throw InputError("mc_trace_identity: dimension mismatch");
  }
  RandomStream master(spec.master_seed);
  Welford acc;
  for (long long s = 0; s < spec.samples; ++s) {
    RandomStream task = master.substream(std::uint64_t(s));
    const CodeSpace code = sample_code(spec, task);
    acc.add(apply(ch, code.uniform_state()).output.trace);
  }
  MCEstimate est;
  est.mean = acc.mean;
  est.std_error = acc.std_error();
  est.samples = spec.samples;
  attach_reference(est,
                   channel_on_uniform_v(ch, spec.v_basis).trace().real());
  return est;
}

EnsembleFidelityReport mc_ensemble_fidelity(const KrausChannel& ch,
                                            const EnsembleSpec& spec) {
  validate_spec(spec);
  if (ch.in_dim != spec.ambient_dim()) {
    throw InputError("mc_ensemble_fidelity: dimension mismatch");
  }
  RandomStream master(spec.master_seed);
  Welford bound_acc, tn_acc, fs_acc;
  for (long long s = 0; s < spec.samples; ++s) {
    RandomStream task = master.substream(std::uint64_t(s));
    const CodeSpace code = sample_code(spec, task);
    const DReport d = build_D(ch, code);
    bound_acc.add(d.fidelity_lower_bound);
    tn_acc.add(d.trace_norm_D);
    fs_acc.add(d.frobenius_sq_D);
  }

  EnsembleFidelityReport rep;
  rep.per_code_bound.mean = bound_acc.mean;
  rep.per_code_bound.std_error = bound_acc.std_error();
  rep.per_code_bound.samples = spec.samples;
  rep.mean_trace_norm_d = tn_acc.mean;
  rep.mean_frobenius_sq_d = fs_acc.mean;

  // Jensen chain: <||D||_tr> <= sqrt(K N' <||D||_F^2>), so the ensemble
  // fidelity is at least <tr N(pi_C)> minus that root.
  const int K = spec.code_dim;
  const int n_eff = nonzero_kraus_count(ch, {});
  const double avg_f2 =
      spec.v_dim() == spec.ambient_dim()
          ? closed_form_avg_d_frobenius_sq(ch, K)
          : avg_d_frobenius_sq_upper_bound(ch, spec.v_basis);
  const double mean_trace =
      channel_on_uniform_v(ch, spec.v_basis).trace().real();
  rep.analytic_bound =
      mean_trace - std::sqrt(double(K) * n_eff * avg_f2);
  return rep;
}

}  // namespace aqec
