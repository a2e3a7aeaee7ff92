#include "aqec/info.hpp"

#include <cmath>

#include "aqec/linalg.hpp"

namespace aqec {

CMat w_matrix(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.in_dim) {
    throw InputError("w_matrix: state dimension does not match channel");
  }
  const int N = ch.kraus_count();
  std::vector<CMat> ar(N);
  for (int i = 0; i < N; ++i) ar[i] = ch.kraus[i] * rho.mat;
  CMat w(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      w(i, j) = (ar[i] * ch.kraus[j].adjoint()).trace();
      w(j, i) = std::conj(w(i, j));
    }
  }
  return w;
}

double entropy_exchange(const KrausChannel& ch, const DensityMatrix& rho,
                        const Tols& tols) {
  if (ch.kind != ChannelKind::trace_preserving) {
    throw PreconditionError("entropy_exchange: channel must be trace-preserving",
                            0.0);
  }
  if (std::abs(rho.trace - 1.0) > tols.trace) {
    throw InputError("entropy_exchange: state is not normalized");
  }
  return spectrum_entropy(w_matrix(ch, rho), tols.psd);
}

double coherent_information(const KrausChannel& ch, const DensityMatrix& rho,
                            const Tols& tols) {
  const ChannelApplyResult out = apply(ch, rho);
  return spectrum_entropy(out.output.mat, tols.psd) -
         entropy_exchange(ch, rho, tols);
}

DataProcessingReport data_processing_check(const KrausChannel& ch1,
                                           const KrausChannel& ch2,
                                           const DensityMatrix& rho,
                                           const Tols& tols) {
  DataProcessingReport rep;
  rep.entropy_rho = von_neumann_entropy(rho, tols);
  rep.coherent_first = coherent_information(ch1, rho, tols);
  rep.coherent_composed = coherent_information(compose(ch2, ch1), rho, tols);
  rep.pass = rep.entropy_rho >= rep.coherent_first - rep.tolerance &&
             rep.coherent_first >= rep.coherent_composed - rep.tolerance;
  return rep;
}

UnitalRateReport unital_rate_report(const KrausChannel& ch, const Tols& tols) {
  if (!ch.square()) {
    throw InputError("unital_rate_report: channel must be square");
  }
  const int M = ch.in_dim;
  const KrausChannel diag =
      diagonalize_kraus(ch, CMat::Identity(M, M), tols);

  UnitalRateReport rep;
  std::vector<double> probs;
  for (const CMat& a : diag.kraus) {
    const double norm_sq = a.squaredNorm();
    if (std::sqrt(norm_sq) > tols.prune) probs.push_back(norm_sq / M);
  }
  rep.nonzero_kraus = static_cast<int>(probs.size());
  rep.rate_log = std::log2(double(M)) - std::log2(double(rep.nonzero_kraus));
  rep.coherent_info = coherent_information(ch, max_mixed(M), tols);
  rep.unital = is_unital(ch, tols);
  rep.equal_probs = true;
  for (double p : probs) {
    if (std::abs(p - 1.0 / rep.nonzero_kraus) > 1e-8) rep.equal_probs = false;
  }
  rep.rates_coincide = std::abs(rep.rate_log - rep.coherent_info) <= 1e-8;
  return rep;
}

}  // namespace aqec
