#pragma once

#include "aqec/channel.hpp"
#include "aqec/types.hpp"

namespace aqec {

// W_ij = tr(A_i rho A_j^dagger); Hermitian PSD with tr W = tr N(rho). Its
// spectrum is the environment state after the channel acts on a purification.
CMat w_matrix(const KrausChannel& ch, const DensityMatrix& rho);

// Entropy exchange S_e(rho, N) = S(W) in bits (trace-preserving channel,
// normalized rho). Invariant under Kraus representation changes.
double entropy_exchange(const KrausChannel& ch, const DensityMatrix& rho,
                        const Tols& tols = {});

// I(rho, N) = S(N(rho)) - S_e(rho, N), in bits.
double coherent_information(const KrausChannel& ch, const DensityMatrix& rho,
                            const Tols& tols = {});

struct DataProcessingReport {
  double entropy_rho = 0.0;
  double coherent_first = 0.0;     // I(rho, ch1)
  double coherent_composed = 0.0;  // I(rho, ch2 . ch1)
  double tolerance = 1e-7;
  bool pass = false;  // entropy_rho >= coherent_first >= coherent_composed
};

DataProcessingReport data_processing_check(const KrausChannel& ch1,
                                           const KrausChannel& ch2,
                                           const DensityMatrix& rho,
                                           const Tols& tols = {});

// Compares the subspace-counting rate log2 M - log2 N' (N' = nonzero Kraus
// operators after diagonalization) with I(pi_M, N). The two coincide for
// unital channels whose diagonalized Kraus operators carry equal probability
// weight 1/N'.
struct UnitalRateReport {
  int nonzero_kraus = 0;
  double rate_log = 0.0;       // log2 M - log2 N'
  double coherent_info = 0.0;  // I(pi_M, N)
  bool unital = false;
  bool equal_probs = false;
  bool rates_coincide = false;
};

UnitalRateReport unital_rate_report(const KrausChannel& ch,
                                    const Tols& tols = {});

}  // namespace aqec
