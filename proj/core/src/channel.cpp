#include "aqec/channel.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace aqec {
namespace {

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback,
                 bool required = false) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (required) throw InputError("missing channel parameter: " + key);
  return fallback;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string(name) + ": parameter outside [0, 1]");
  }
}

CMat pauli_x() {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

CMat pauli_y() {
  CMat y(2, 2);
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return y;
}

CMat pauli_z() {
  CMat z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace

KrausChannel KrausChannel::make(std::vector<CMat> ops, const Tols& tols) {
  if (ops.empty()) throw InputError("Kraus family must be non-empty");
  const Eigen::Index rows = ops[0].rows();
  const Eigen::Index cols = ops[0].cols();
  if (rows == 0 || cols == 0) throw InputError("Kraus operators must be non-empty");
  for (const CMat& a : ops) {
    if (a.rows() != rows || a.cols() != cols) {
      throw InputError("Kraus operators must share one shape");
    }
  }
  KrausChannel ch;
  ch.kraus = std::move(ops);
  ch.in_dim = static_cast<int>(cols);
  ch.out_dim = static_cast<int>(rows);

  const CMat sum = ch.completeness_sum();
  const CMat defect = CMat::Identity(cols, cols) - sum;
  if (defect.cwiseAbs().maxCoeff() <= tols.tp) {
    ch.kind = ChannelKind::trace_preserving;
    return ch;
  }
  // Selective operation: identity - sum must stay PSD.
  Eigen::SelfAdjointEigenSolver<CMat> es(defect, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tols.psd) {
    throw InputError("Kraus completeness sum exceeds identity");
  }
  ch.kind = ChannelKind::trace_decreasing;
  return ch;
}

CMat KrausChannel::completeness_sum() const {
  CMat sum = CMat::Zero(in_dim, in_dim);
  for (const CMat& a : kraus) sum += a.adjoint() * a;
  return sum;
}

ChannelApplyResult apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.in_dim) {
    throw InputError("apply: state dimension does not match channel");
  }
  CMat out = CMat::Zero(ch.out_dim, ch.out_dim);
  for (const CMat& a : ch.kraus) out += a * rho.mat * a.adjoint();
  ChannelApplyResult res{DensityMatrix::trusted(std::move(out)), 0.0};
  res.selection_probability =
      ch.kind == ChannelKind::trace_preserving ? rho.trace : res.output.trace;
  return res;
}

KrausChannel tensor_power(const KrausChannel& ch, int n, const Limits& limits) {
  if (n < 1) throw InputError("tensor_power: n must be >= 1");
  if (n == 1) return ch;
  const double out_pow = std::pow(double(ch.out_dim), n);
  const double in_pow = std::pow(double(ch.in_dim), n);
  const double count = std::pow(double(ch.kraus_count()), n);
  if (out_pow > limits.max_dim || in_pow > limits.max_dim) {
    throw CapacityError("tensor_power: dimension exceeds max_dim");
  }
  if (count > double(limits.enum_cap)) {
    throw CapacityError("tensor_power: Kraus count exceeds enum_cap");
  }
  if (count * out_pow * in_pow > double(limits.entry_cap)) {
    throw CapacityError("tensor_power: dense entries exceed entry_cap");
  }

  std::vector<CMat> ops;
  ops.reserve(size_t(count));
  std::vector<int> idx(n, 0);
  const int N = ch.kraus_count();
  while (true) {
    CMat a = ch.kraus[idx[0]];
    for (int k = 1; k < n; ++k) a = kron(a, ch.kraus[idx[k]], limits);
    ops.push_back(std::move(a));
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == N) idx[pos--] = 0;
    if (pos < 0) break;
  }
  KrausChannel out;
  out.kraus = std::move(ops);
  out.in_dim = int(in_pow);
  out.out_dim = int(out_pow);
  out.kind = ch.kind;
  return out;
}

KrausChannel diagonalize_kraus(const KrausChannel& ch, const CMat& projector,
                               const Tols& tols) {
  if (!ch.square()) {
    throw InputError("diagonalize_kraus: channel must be square");
  }
  if (projector.rows() != ch.in_dim || projector.cols() != ch.in_dim) {
    throw InputError("diagonalize_kraus: projector dimension mismatch");
  }
  if (hermiticity_residual(projector) > tols.hermitian ||
      (projector * projector - projector).cwiseAbs().maxCoeff() > 1e-9) {
    throw InputError("diagonalize_kraus: argument is not a projector");
  }

  const int N = ch.kraus_count();
  CMat gram(N, N);
  std::vector<CMat> pa(N);
  for (int i = 0; i < N; ++i) pa[i] = ch.kraus[i] * projector;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) gram(i, j) = (pa[i].adjoint() * pa[j]).trace();
  }

  double off = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i != j) off = std::max(off, std::abs(gram(i, j)));
    }
  }
  if (off <= 1e-10 * std::max(1.0, gram.cwiseAbs().maxCoeff())) {
    return ch;  // already diagonal
  }

  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  const CMat u = es.eigenvectors();  // u^dagger gram u is diagonal
  std::vector<CMat> ops(N);
  for (int m = 0; m < N; ++m) {
    CMat a = CMat::Zero(ch.out_dim, ch.in_dim);
    for (int j = 0; j < N; ++j) a += u(j, m) * ch.kraus[j];
    ops[m] = std::move(a);
  }
  KrausChannel out;
  out.kraus = std::move(ops);
  out.in_dim = ch.in_dim;
  out.out_dim = ch.out_dim;
  out.kind = ch.kind;
  return out;
}

KrausChannel identity_channel(int dim) {
  if (dim < 1) throw InputError("identity_channel: dim must be positive");
  return KrausChannel::make({CMat::Identity(dim, dim)});
}

KrausChannel bit_flip(double p) {
  check_probability(p, "bit_flip");
  return KrausChannel::make(
      {std::sqrt(1.0 - p) * CMat::Identity(2, 2), std::sqrt(p) * pauli_x()});
}

KrausChannel phase_flip(double p) {
  check_probability(p, "phase_flip");
  return KrausChannel::make(
      {std::sqrt(1.0 - p) * CMat::Identity(2, 2), std::sqrt(p) * pauli_z()});
}

KrausChannel depolarizing(double p) {
  check_probability(p, "depolarizing");
  return KrausChannel::make({std::sqrt(1.0 - 0.75 * p) * CMat::Identity(2, 2),
                             std::sqrt(0.25 * p) * pauli_x(),
                             std::sqrt(0.25 * p) * pauli_y(),
                             std::sqrt(0.25 * p) * pauli_z()});
}

KrausChannel amplitude_damping(double gamma) {
  check_probability(gamma, "amplitude_damping");
  CMat a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  a1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel::make({a0, a1});
}

KrausChannel three_qubit_bitflip_noise(double p) {
  check_probability(p, "three_qubit_bitflip_noise");
  const CMat id2 = CMat::Identity(2, 2);
  const CMat x = pauli_x();
  const CMat x1 = kron(kron(x, id2), id2);
  const CMat x2 = kron(kron(id2, x), id2);
  const CMat x3 = kron(kron(id2, id2), x);
  const double w = std::sqrt(p / 3.0);
  return KrausChannel::make({std::sqrt(1.0 - p) * CMat::Identity(8, 8), w * x1,
                             w * x2, w * x3});
}

KrausChannel make_standard(const std::string& name,
                           const std::map<std::string, double>& params) {
  if (name == "identity") {
    return identity_channel(int(get_param(params, "dim", 2.0)));
  }
  if (name == "bit_flip") return bit_flip(get_param(params, "p", 0, true));
  if (name == "phase_flip") return phase_flip(get_param(params, "p", 0, true));
  if (name == "depolarizing") {
    return depolarizing(get_param(params, "p", 0, true));
  }
  if (name == "amplitude_damping") {
    return amplitude_damping(get_param(params, "gamma", 0, true));
  }
  if (name == "three_qubit_bitflip_noise") {
    return three_qubit_bitflip_noise(get_param(params, "p", 0, true));
  }
  throw InputError("unknown standard channel: " + name);
}

KrausChannel random_channel(int M, int N, RandomStream& rng) {
  if (M < 1 || N < 1) throw InputError("random_channel: M, N must be positive");
  const CMat u = haar_unitary(M * N, rng);
  // Columns 0..M-1 form an isometry H_M -> H_M (x) H_N; row (q, e) = q*N + e.
  std::vector<CMat> ops(N, CMat::Zero(M, M));
  for (int q = 0; q < M; ++q) {
    for (int e = 0; e < N; ++e) {
      for (int c = 0; c < M; ++c) ops[e](q, c) = u(q * N + e, c);
    }
  }
  return KrausChannel::make(std::move(ops));
}

KrausChannel restrict_kraus(const KrausChannel& ch,
                            const std::vector<int>& keep) {
  if (keep.empty()) throw InputError("restrict_kraus: keep set is empty");
  std::vector<CMat> ops;
  ops.reserve(keep.size());
  for (int idx : keep) {
    if (idx < 0 || idx >= ch.kraus_count()) {
      throw InputError("restrict_kraus: index out of range");
    }
    ops.push_back(ch.kraus[idx]);
  }
  return KrausChannel::make(std::move(ops));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner,
                     const Limits& limits) {
  if (outer.in_dim != inner.out_dim) {
    throw InputError("compose: inner output dim does not match outer input");
  }
  const long long count =
      (long long)(outer.kraus_count()) * inner.kraus_count();
  if (count * outer.out_dim * inner.in_dim > limits.entry_cap) {
    throw CapacityError("compose: dense entries exceed entry_cap");
  }
  std::vector<CMat> ops;
  ops.reserve(size_t(count));
  for (const CMat& b : outer.kraus) {
    for (const CMat& a : inner.kraus) ops.push_back(b * a);
  }
  return KrausChannel::make(std::move(ops));
}

bool is_unital(const KrausChannel& ch, const Tols& tols) {
  if (!ch.square()) return false;
  CMat sum = CMat::Zero(ch.out_dim, ch.out_dim);
  for (const CMat& a : ch.kraus) sum += a * a.adjoint();
  return (sum - CMat::Identity(ch.out_dim, ch.out_dim)).cwiseAbs().maxCoeff() <=
         tols.tp;
}

KrausChannel prune_zero_kraus(const KrausChannel& ch, double prune_tol) {
  std::vector<CMat> ops;
  for (const CMat& a : ch.kraus) {
    if (a.norm() > prune_tol) ops.push_back(a);
  }
  if (ops.empty()) ops.push_back(CMat::Zero(ch.out_dim, ch.in_dim));
  KrausChannel out;
  out.kraus = std::move(ops);
  out.in_dim = ch.in_dim;
  out.out_dim = ch.out_dim;
  out.kind = ch.kind;
  return out;
}

}  // namespace aqec
