#pragma once

#include <map>
#include <string>
#include <vector>

#include "aqec/linalg.hpp"
#include "aqec/random.hpp"
#include "aqec/types.hpp"

namespace aqec {

enum class ChannelKind { trace_preserving, trace_decreasing };

// Quantum operation rho -> sum_i A_i rho A_i^dagger. Trace-preserving when
// sum_i A_i^dagger A_i = 1; trace-decreasing (selective) when the sum is <= 1.
struct KrausChannel {
  std::vector<CMat> kraus;
  int in_dim = 0;
  int out_dim = 0;
  ChannelKind kind = ChannelKind::trace_preserving;

  // Validates a non-empty family of equal-shaped operators and classifies the
  // kind from sum A^dagger A (InputError if the sum exceeds identity).
  static KrausChannel make(std::vector<CMat> ops, const Tols& tols = {});

  int kraus_count() const { return static_cast<int>(kraus.size()); }
  bool square() const { return in_dim == out_dim; }

  // sum_i A_i^dagger A_i (in_dim x in_dim).
  CMat completeness_sum() const;
};

struct ChannelApplyResult {
  DensityMatrix output;  // unnormalized for trace-decreasing channels
  double selection_probability = 0.0;
};

ChannelApplyResult apply(const KrausChannel& ch, const DensityMatrix& rho);

// n-fold tensor power with N^n Kraus products ordered lexicographically in
// the factor indices, leftmost factor most significant.
KrausChannel tensor_power(const KrausChannel& ch, int n,
                          const Limits& limits = {});

// Rotates the Kraus family so the Gram matrix tr(V A_i^dagger A_j V) becomes
// diagonal; the channel action is unchanged. Already-diagonal families are
// returned as-is.
KrausChannel diagonalize_kraus(const KrausChannel& ch, const CMat& projector,
                               const Tols& tols = {});

KrausChannel identity_channel(int dim);
KrausChannel bit_flip(double p);
KrausChannel phase_flip(double p);
KrausChannel depolarizing(double p);
KrausChannel amplitude_damping(double gamma);
// sqrt(1-p) 1 plus sqrt(p/3) X on each of the three qubits (dim 8).
KrausChannel three_qubit_bitflip_noise(double p);

// Factory by name with a parameter map; names: identity, bit_flip,
// phase_flip, depolarizing, amplitude_damping, three_qubit_bitflip_noise.
KrausChannel make_standard(const std::string& name,
                           const std::map<std::string, double>& params);

// Stinespring dilation of a Haar unitary on dim M*N: Kraus blocks of a
// uniformly random isometry H_M -> H_M (x) H_N.
KrausChannel random_channel(int M, int N, RandomStream& rng);

// Keeps the listed Kraus indices; the result is generally trace-decreasing.
KrausChannel restrict_kraus(const KrausChannel& ch,
                            const std::vector<int>& keep);

// compose(outer, inner): rho -> outer(inner(rho)), Kraus {B_j A_i} ordered
// outer-major.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner,
                     const Limits& limits = {});

bool is_unital(const KrausChannel& ch, const Tols& tols = {});

KrausChannel prune_zero_kraus(const KrausChannel& ch,
                              double prune_tol = Tols{}.prune);

}  // namespace aqec
