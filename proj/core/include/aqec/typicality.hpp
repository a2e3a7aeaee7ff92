#pragma once

#include <vector>

#include "aqec/channel.hpp"
#include "aqec/types.hpp"

namespace aqec {

// Probability weights p_i = tr(P_V A_i^dagger A_i P_V) / dim V of a Kraus
// family that is diagonal with respect to V, plus their Shannon entropy in
// bits. For diagonal families this entropy equals the entropy exchange of the
// uniform state on V.
struct KrausDistribution {
  std::vector<double> probs;
  double entropy_bits = 0.0;
};

// Requires the off-diagonal Gram residual max_{i != j} |tr(P_V A_i^dagger
// A_j P_V)| / dim V to stay within 1e-8 (diagonalize_kraus first), and trace
// preservation on V.
KrausDistribution kraus_distribution(const KrausChannel& ch,
                                     const CMat& v_basis,
                                     const Tols& tols = {});

// A length-n sequence is eps-typical when 2^{-n(H+eps)} <= p <= 2^{-n(H-eps)}
// with boundaries inclusive up to 1e-12 in the log2 domain.
struct TypicalSetSummary {
  double count = 0.0;  // exact while representable in a double
  double mass = 0.0;
  double log2_lower = 0.0;  // n (H - eps)
  double log2_upper = 0.0;  // n (H + eps)
};

// Exact count and mass by aggregating over symbol-count classes (multinomial
// grouping); cost grows with n^(N-1), not N^n.
TypicalSetSummary typical_set_enumerate(const KrausDistribution& dist, int n,
                                        double eps, const Limits& limits = {});

struct TypicalSetSample {
  double mass_estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

// Monte Carlo estimate of the typical mass; log-domain, usable at large n.
TypicalSetSample typical_set_sample(const KrausDistribution& dist, int n,
                                    double eps, long long samples,
                                    std::uint64_t seed);

// Explicit typical index sequences in lexicographic order (leftmost position
// most significant). Guarded by limits.enum_cap.
std::vector<std::vector<int>> typical_indices(const KrausDistribution& dist,
                                              int n, double eps,
                                              const Limits& limits = {});

// n-fold channel restricted to typical Kraus products. When no sequence is
// typical the result holds a single zero operator.
KrausChannel typical_channel(const KrausChannel& ch, const CMat& v_basis,
                             int n, double eps, const Limits& limits = {});

struct TypicalSubspace {
  CMat projector;       // on the n-fold output space
  long long dim = 0;    // number of typical product eigenvectors
  double mass = 0.0;    // tr(projector sigma^{(x) n})
};

// Projector onto the span of eps-typical eigenvector products of sigma.
TypicalSubspace typical_subspace_projector(const DensityMatrix& sigma, int n,
                                           double eps,
                                           const Limits& limits = {});

// Typical-subspace projection composed after the typical channel.
struct TypicalReduction {
  int n = 0;
  double eps = 0.0;
  KrausChannel reduced;
  long long kraus_count = 0;          // typical sequences (pre-pruning)
  long long nonzero_kraus_count = 0;  // operators with norm > prune_tol
  long long typical_subspace_dim = 0;
  double kraus_mass = 0.0;     // tr N_typ(pi_V^n) before projecting
  double subspace_mass = 0.0;  // tr(Pi sigma^{(x) n})
  double selection_prob = 0.0; // tr of the reduced operation on pi_V^n
  double frobenius_sq = 0.0;   // ||reduced(pi_V^n)||_F^2
  double entropy_h = 0.0;      // Kraus distribution entropy
  double entropy_s = 0.0;      // S(N(pi_V))
};

TypicalReduction reduced_operation(const KrausChannel& ch, const CMat& v_basis,
                                   int n, double eps,
                                   const Limits& limits = {});

// Fidelity bound 1 - alpha_n - beta_n for floor(2^{nR})-dimensional random
// codes inside the typical reduction, with the coherent information target.
struct RateBoundReport {
  int n = 0;
  double eps = 0.0;
  double rate = 0.0;
  long long code_dim = 0;  // floor(2^{n R}), at least 1
  long long kraus_count = 0;
  long long nonzero_kraus_count = 0;
  double alpha_n = 0.0;  // 1 - selection_prob
  double beta_n = 0.0;   // sqrt(code_dim * kraus_count * frobenius_sq)
  double bound = 0.0;    // 1 - alpha_n - beta_n
  double coherent_info = 0.0;  // I(pi_V, N), the achievable-rate target
  double beta_exponent = 0.0;  // (R + S_e - S + 4 eps) / 2 per copy
};

RateBoundReport rate_bound_report(const KrausChannel& ch, const CMat& v_basis,
                                  int n, double eps, double rate,
                                  const Limits& limits = {});

// I(rho^{(x) m}, N^{(x) m}) / m.
double finite_m_coherent_rate(const KrausChannel& ch, const DensityMatrix& rho,
                              int m, const Limits& limits = {});

}  // namespace aqec
