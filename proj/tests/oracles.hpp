#pragma once

// Brute-force reference implementations; slow but independent of the library
// code paths they pin down.

#include <cmath>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/linalg.hpp"
#include "aqec/types.hpp"

namespace aqec::oracle {

// Entropy exchange via an explicit purification: S_e equals the entropy of
// the joint output (N (x) 1)(|phi><phi|) with |phi| = vec(sqrt(rho)).
inline double purification_entropy(const KrausChannel& ch,
                                   const DensityMatrix& rho) {
  const int m = rho.dim();
  const CMat s = hermitian_sqrt(rho.mat);
  CVec phi(m * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) phi(a * m + b) = s(a, b);
  }
  const CMat id = CMat::Identity(m, m);
  Limits wide;
  wide.max_dim = 1 << 20;
  CMat out = CMat::Zero(ch.out_dim * m, ch.out_dim * m);
  for (const CMat& a : ch.kraus) {
    const CVec v = kron(a, id, wide) * phi;
    out += v * v.adjoint();
  }
  return spectrum_entropy(out);
}

struct TypicalCounts {
  long long count = 0;
  double mass = 0.0;
};

// Exhaustive walk over all N^n sequences.
inline TypicalCounts exhaustive_typical(const std::vector<double>& probs,
                                        int n, double eps) {
  double entropy = 0.0;
  for (double p : probs) {
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  const double lo = n * (entropy - eps) - 1e-12;
  const double hi = n * (entropy + eps) + 1e-12;
  const int symbols = static_cast<int>(probs.size());

  TypicalCounts counts;
  std::vector<int> idx(n, 0);
  while (true) {
    double mlp = 0.0;
    bool zero = false;
    for (int k = 0; k < n; ++k) {
      if (probs[idx[k]] <= 0.0) {
        zero = true;
        break;
      }
      mlp -= std::log2(probs[idx[k]]);
    }
    if (!zero && mlp >= lo && mlp <= hi) {
      ++counts.count;
      counts.mass += std::exp2(-mlp);
    }
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == symbols) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return counts;
}

}  // namespace aqec::oracle
