#pragma once

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/types.hpp"

namespace aqec {

struct KLReport {
  // max_ij || P A_i^dagger A_j P - (tr P A_i^dagger A_j P / K) P ||_F
  double residual = 0.0;
  bool exact = false;
};

// Exact-correctability conditions for a code under a channel: every projected
// error product must be proportional to the code projector.
KLReport kl_check(const KrausChannel& ch, const CodeSpace& code,
                  const Tols& tols = {});

// Decoupling defect operator on (code) x (environment), dimension K*N. Block
// (i, j) of D is (1/K)(B^dagger A_i^dagger A_j B - (tr / K) 1_K); D vanishes
// exactly when the code is exactly correctable.
struct DReport {
  CMat D;
  double trace_norm_D = 0.0;
  double frobenius_sq_D = 0.0;
  double selection_probability = 1.0;  // tr N(pi_C); exactly 1 when TP
  // selection_probability - trace_norm_D, stored unclamped.
  double fidelity_lower_bound = 0.0;
  double max_abs_eigenvalue = 0.0;
  // max |eigenvalue| / mean |eigenvalue|; 1 when D = 0. Diagnostic only.
  double eigen_spread = 1.0;

  double clamped_bound() const {
    return fidelity_lower_bound > 0.0 ? fidelity_lower_bound : 0.0;
  }
};

DReport build_D(const KrausChannel& ch, const CodeSpace& code,
                const Limits& limits = {});

// Recovery channel for an exactly correctable code: orthogonalize the errors
// against the code, polar-decompose each projected error into an isometry,
// take adjoints, and complete on the orthogonal complement. The composition
// recovery . channel acts as the identity on code states.
KrausChannel exact_recovery(const KrausChannel& ch, const CodeSpace& code,
                            const Tols& tols = {});

// Transfer-matrix recovery built from the purification overlap: the unitary
// on (output) x (reference copy) achieving the fidelity between the joint
// reference-environment state and its decoupled product. Guarantees
//   F_e(pi_C, R . N) >= tr N(pi_C) - trace_norm(D) - 1e-6.
KrausChannel uhlmann_recovery(const KrausChannel& ch, const CodeSpace& code,
                              const Limits& limits = {});

// F_e(rho, E) = sum_i |tr(rho A_i)|^2.
double entanglement_fidelity(const KrausChannel& ch, const DensityMatrix& rho);

// Monte Carlo mean of the channel fidelity <psi| E(psi) |psi> over
// Haar-random pure states of the code.
MCEstimate average_channel_fidelity_mc(const KrausChannel& ch,
                                       const CodeSpace& code,
                                       long long samples, RandomStream& rng);

struct SubcodeSearchOptions {
  int restarts = 20;
  int brute_samples = 5000;  // extra screening when subspace dim <= 4
  int max_iterations = 300;
};

struct SubcodeResult {
  CodeSpace subcode;
  // Minimum channel fidelity found by the search inside the final subcode.
  double achieved_min = 0.0;
};

// Iteratively removes the minimum-fidelity state from the code until
// target_dim remains. With F_e(pi_C, E) = 1 - eps, a subcode of dimension
// floor(K/2) keeps minimum fidelity >= 1 - 2 eps (up to search slack).
SubcodeResult extract_subcode(const KrausChannel& ch_with_recovery,
                              const CodeSpace& code, int target_dim,
                              RandomStream& rng,
                              const SubcodeSearchOptions& opts = {});

// Entropy-difference fidelity bound 1 - 2 sqrt(S(pi_C) - I(pi_C, N)),
// clamped into [0, 1]; differences within 1e-10 of zero are treated as 0.
double sw_bound(const KrausChannel& ch, const CodeSpace& code);

}  // namespace aqec
