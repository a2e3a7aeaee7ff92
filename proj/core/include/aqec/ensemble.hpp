#pragma once

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/types.hpp"

namespace aqec {

// Random-code ensemble: Haar-random K-dimensional subspaces of the subspace
// spanned by v_basis (M x L, orthonormal columns; identity for full space).
// All randomness derives from master_seed via per-sample substreams.
struct EnsembleSpec {
  CMat v_basis;
  int code_dim = 1;
  long long samples = 0;
  std::uint64_t master_seed = 0;

  int ambient_dim() const { return static_cast<int>(v_basis.rows()); }
  int v_dim() const { return static_cast<int>(v_basis.cols()); }
};

EnsembleSpec full_space_ensemble(int M, int K, long long samples,
                                 std::uint64_t master_seed);

// One Haar-random code of the ensemble.
CodeSpace sample_code(const EnsembleSpec& spec, RandomStream& rng);

// Monte Carlo mean of <psi|P_C|psi>^2 for a fixed pure state against random
// K-dim codes in dim M; closed form (K^2 + K) / (M^2 + M).
MCEstimate mc_projector_moment(int M, int K, long long samples,
                               std::uint64_t master_seed);

// Ensemble average of ||D||_F^2 over Haar-random K-dim codes of the full
// space: (1 - 1/K^2) / (M^2 - 1) * sum_ij (tr W_ij^dagger W_ij
// - |tr W_ij|^2 / M), with W_ij = A_i^dagger A_j.
double closed_form_avg_d_frobenius_sq(const KrausChannel& ch, int K);

// Upper bound || N(pi_V) ||_F^2 on the ensemble average of ||D||_F^2 for
// codes drawn inside V.
double avg_d_frobenius_sq_upper_bound(const KrausChannel& ch,
                                      const CMat& v_basis);

// Monte Carlo estimate of <||D||_F^2>; attaches the closed form (full space)
// or the upper bound (proper subspace V).
MCEstimate mc_avg_d_frobenius_sq(const KrausChannel& ch,
                                 const EnsembleSpec& spec);

// Analytic ensemble fidelity lower bound
//   tr N(pi_V) - sqrt(K * N') * || N(pi_V) ||_F,
// N' counting Kraus operators that stay nonzero after diagonalization.
double ensemble_fidelity_bound(const KrausChannel& ch, int K,
                               const CMat& v_basis, const Tols& tols = {});

// Monte Carlo check of <tr N(pi_C)> = tr N(pi_V).
MCEstimate mc_trace_identity(const KrausChannel& ch, const EnsembleSpec& spec);

struct EnsembleFidelityReport {
  // Per-code fidelity bound tr N(pi_C) - ||D||_tr averaged over the ensemble.
  MCEstimate per_code_bound;
  double analytic_bound = 0.0;  // Jensen-chained bound from <||D||_F^2>
  double mean_trace_norm_d = 0.0;
  double mean_frobenius_sq_d = 0.0;
};

EnsembleFidelityReport mc_ensemble_fidelity(const KrausChannel& ch,
                                            const EnsembleSpec& spec);

}  // namespace aqec
