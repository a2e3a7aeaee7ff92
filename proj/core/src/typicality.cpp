#include "aqec/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "aqec/info.hpp"
#include "aqec/linalg.hpp"
#include "aqec/random.hpp"

namespace aqec {
namespace {

constexpr double kBoundaryTol = 1e-12;

struct Window {
  double lo = 0.0;  // n (H - eps)
  double hi = 0.0;  // n (H + eps)

  bool contains(double minus_log2_p) const {
    return minus_log2_p >= lo - kBoundaryTol &&
           minus_log2_p <= hi + kBoundaryTol;
  }
};

std::vector<double> minus_log2(const std::vector<double>& probs) {
  std::vector<double> out(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] > 0.0 ? -std::log2(probs[i])
                            : std::numeric_limits<double>::infinity();
  }
  return out;
}

double shannon_entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// Exact binomial coefficient while it fits a double's integer range.
double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  b = std::min(b, a - b);
  double c = 1.0;
  for (int i = 1; i <= b; ++i) c = c * double(a - b + i) / double(i);
  return std::round(c);
}

double compositions_count(int n, int parts) {
  return binomial(n + parts - 1, parts - 1);
}

// Visits every split of n draws among `parts` symbols.
template <typename Fn>
void for_each_composition(int n, int parts, Fn&& fn) {
  std::vector<int> counts(parts, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == parts - 1) {
      counts[pos] = remaining;
      fn(counts);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  rec(rec, 0, n);
}

double multinomial(int n, const std::vector<int>& counts) {
  double result = 1.0;
  int remaining = n;
  for (int k : counts) {
    result *= binomial(remaining, k);
    remaining -= k;
  }
  return result;
}

// Minus log2 probability of a class; NaN-free for zero-probability symbols.
double class_minus_log2(const std::vector<int>& counts,
                        const std::vector<double>& mlog) {
  double sum = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (std::isinf(mlog[i])) return std::numeric_limits<double>::infinity();
    sum += counts[i] * mlog[i];
  }
  return sum;
}

Window make_window(const KrausDistribution& dist, int n, double eps) {
  if (n < 1) throw InputError("typicality: n must be >= 1");
  if (eps <= 0.0) throw InputError("typicality: eps must be positive");
  return Window{n * (dist.entropy_bits - eps), n * (dist.entropy_bits + eps)};
}

void check_distribution(const KrausDistribution& dist) {
  if (dist.probs.empty()) throw InputError("typicality: empty distribution");
  double sum = 0.0;
  for (double p : dist.probs) {
    if (p < -1e-12) throw InputError("typicality: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InputError("typicality: probabilities do not sum to 1");
  }
}

CMat projector_of(const CMat& v_basis) { return v_basis * v_basis.adjoint(); }

CMat kron_power(const CMat& a, int n, const Limits& limits) {
  CMat out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a, limits);
  return out;
}

}  // namespace

KrausDistribution kraus_distribution(const KrausChannel& ch,
                                     const CMat& v_basis, const Tols& tols) {
  if (!ch.square() || ch.in_dim != v_basis.rows()) {
    throw InputError("kraus_distribution: dimension mismatch");
  }
  const int N = ch.kraus_count();
  const double l = double(v_basis.cols());
  std::vector<CMat> av(N);
  for (int i = 0; i < N; ++i) av[i] = ch.kraus[i] * v_basis;

  double off = 0.0;
  KrausDistribution dist;
  dist.probs.resize(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const Complex g = (av[i].adjoint() * av[j]).trace() / l;
      if (i == j) {
        dist.probs[i] = std::max(0.0, g.real());
      } else {
        off = std::max(off, std::abs(g));
      }
    }
  }
  if (off > 1e-8) {
    throw PreconditionError(
        "kraus_distribution: Kraus family is not diagonal on V", off);
  }
  double sum = 0.0;
  for (double p : dist.probs) sum += p;
  if (std::abs(sum - 1.0) > tols.trace) {
    throw InputError("kraus_distribution: channel is not trace-preserving on V");
  }
  dist.entropy_bits = shannon_entropy(dist.probs);
  return dist;
}

TypicalSetSummary typical_set_enumerate(const KrausDistribution& dist, int n,
                                        double eps, const Limits& limits) {
  check_distribution(dist);
  const Window window = make_window(dist, n, eps);
  const int N = static_cast<int>(dist.probs.size());
  if (compositions_count(n, N) > double(limits.enum_cap)) {
    throw CapacityError("typical_set_enumerate: too many symbol-count classes");
  }
  const std::vector<double> mlog = minus_log2(dist.probs);

  TypicalSetSummary summary;
  summary.log2_lower = window.lo;
  summary.log2_upper = window.hi;
  for_each_composition(n, N, [&](const std::vector<int>& counts) {
    const double mlp = class_minus_log2(counts, mlog);
    if (!window.contains(mlp)) return;
    const double cnt = multinomial(n, counts);
    summary.count += cnt;
    summary.mass += cnt * std::exp2(-mlp);
  });
  return summary;
}

TypicalSetSample typical_set_sample(const KrausDistribution& dist, int n,
                                    double eps, long long samples,
                                    std::uint64_t seed) {
  check_distribution(dist);
  if (samples < 2) throw InputError("typical_set_sample: samples < 2");
  const Window window = make_window(dist, n, eps);
  const std::vector<double> mlog = minus_log2(dist.probs);
  const int N = static_cast<int>(dist.probs.size());

  std::vector<double> cdf(N);
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    acc += dist.probs[i];
    cdf[i] = acc;
  }

  RandomStream master(seed);
  long long hits = 0;
  for (long long s = 0; s < samples; ++s) {
    RandomStream task = master.substream(std::uint64_t(s));
    double mlp = 0.0;
    for (int pos = 0; pos < n; ++pos) {
      const double u = task.uniform() * acc;
      const int sym = int(std::lower_bound(cdf.begin(), cdf.end(), u) -
                          cdf.begin());
      mlp += mlog[std::min(sym, N - 1)];
    }
    if (window.contains(mlp)) ++hits;
  }
  TypicalSetSample out;
  out.samples = samples;
  out.mass_estimate = double(hits) / double(samples);
  out.std_error = std::sqrt(out.mass_estimate * (1.0 - out.mass_estimate) /
                            double(samples));
  return out;
}

std::vector<std::vector<int>> typical_indices(const KrausDistribution& dist,
                                              int n, double eps,
                                              const Limits& limits) {
  const TypicalSetSummary summary = typical_set_enumerate(dist, n, eps, limits);
  if (summary.count > double(limits.enum_cap)) {
    throw CapacityError("typical_indices: typical set exceeds enum_cap");
  }
  const Window window = make_window(dist, n, eps);
  const int N = static_cast<int>(dist.probs.size());
  const std::vector<double> mlog = minus_log2(dist.probs);

  std::vector<std::vector<int>> indices;
  indices.reserve(size_t(summary.count));
  for_each_composition(n, N, [&](const std::vector<int>& counts) {
    if (!window.contains(class_minus_log2(counts, mlog))) return;
    std::vector<int> seq;
    seq.reserve(n);
    for (int sym = 0; sym < N; ++sym) {
      seq.insert(seq.end(), counts[sym], sym);
    }
    do {
      indices.push_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
  });
  std::sort(indices.begin(), indices.end());
  return indices;
}

KrausChannel typical_channel(const KrausChannel& ch, const CMat& v_basis,
                             int n, double eps, const Limits& limits) {
  const KrausChannel diag =
      diagonalize_kraus(ch, projector_of(v_basis));
  const KrausDistribution dist = kraus_distribution(diag, v_basis);
  const auto indices = typical_indices(dist, n, eps, limits);

  const double dim_pow = std::pow(double(ch.in_dim), n);
  if (dim_pow > limits.max_dim) {
    throw CapacityError("typical_channel: dimension exceeds max_dim");
  }
  if (double(indices.size()) * dim_pow * dim_pow > double(limits.entry_cap)) {
    throw CapacityError("typical_channel: dense entries exceed entry_cap");
  }

  const int dim_n = int(dim_pow);
  std::vector<CMat> ops;
  ops.reserve(indices.size());
  for (const std::vector<int>& seq : indices) {
    CMat a = diag.kraus[seq[0]];
    for (int k = 1; k < n; ++k) a = kron(a, diag.kraus[seq[k]], limits);
    ops.push_back(std::move(a));
  }
  const bool full_family =
      double(indices.size()) == std::pow(double(diag.kraus_count()), n);
  if (ops.empty()) ops.push_back(CMat::Zero(dim_n, dim_n));

  // Subfamily of a tensor power, so the completeness sum stays below
  // identity by construction; skip the dense re-validation of make().
  KrausChannel out;
  out.kraus = std::move(ops);
  out.in_dim = dim_n;
  out.out_dim = dim_n;
  out.kind = full_family && ch.kind == ChannelKind::trace_preserving
                 ? ChannelKind::trace_preserving
                 : ChannelKind::trace_decreasing;
  return out;
}

TypicalSubspace typical_subspace_projector(const DensityMatrix& sigma, int n,
                                           double eps, const Limits& limits) {
  if (std::abs(sigma.trace - 1.0) > Tols{}.trace) {
    throw InputError("typical_subspace_projector: state is not normalized");
  }
  const int m = sigma.dim();
  const double dim_pow = std::pow(double(m), n);
  if (dim_pow > limits.max_dim) {
    throw CapacityError("typical_subspace_projector: dimension exceeds max_dim");
  }
  const int dim_n = int(dim_pow);

  Eigen::SelfAdjointEigenSolver<CMat> es(sigma.mat);
  Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> probs(m);
  for (int i = 0; i < m; ++i) {
    if (ev(i) < -Tols{}.psd) {
      throw InputError("typical_subspace_projector: state is not PSD");
    }
    probs[i] = std::max(0.0, ev(i));
  }
  KrausDistribution eig_dist;
  eig_dist.probs = probs;
  eig_dist.entropy_bits = shannon_entropy(probs);
  const Window window = make_window(eig_dist, n, eps);
  const std::vector<double> mlog = minus_log2(probs);

  // Indicator over product eigenvectors; the projector is diagonal in the
  // product eigenbasis.
  std::vector<char> typical(size_t(dim_n), 0);
  TypicalSubspace out;
  std::vector<int> idx(n, 0);
  for (long long flat = 0;; ) {
    double mlp = 0.0;
    for (int k = 0; k < n; ++k) mlp += mlog[idx[k]];
    if (window.contains(mlp)) {
      typical[size_t(flat)] = 1;
      ++out.dim;
      out.mass += std::exp2(-mlp);
    }
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == m) idx[pos--] = 0;
    if (pos < 0) break;
    flat = 0;
    for (int k = 0; k < n; ++k) flat = flat * m + idx[k];
  }

  if (out.dim == dim_n) {
    out.projector = CMat::Identity(dim_n, dim_n);
    return out;
  }
  if (out.dim == 0) {
    out.projector = CMat::Zero(dim_n, dim_n);
    return out;
  }
  const CMat w = kron_power(es.eigenvectors(), n, limits);
  CMat sel = CMat::Zero(dim_n, out.dim);
  long long col = 0;
  for (long long l = 0; l < dim_n; ++l) {
    if (typical[size_t(l)]) sel.col(col++) = w.col(l);
  }
  out.projector = sel * sel.adjoint();
  return out;
}

TypicalReduction reduced_operation(const KrausChannel& ch, const CMat& v_basis,
                                   int n, double eps, const Limits& limits) {
  if (ch.kind != ChannelKind::trace_preserving) {
    throw PreconditionError("reduced_operation: channel must be trace-preserving",
                            0.0);
  }
  const KrausChannel diag = diagonalize_kraus(ch, projector_of(v_basis));
  const KrausDistribution dist = kraus_distribution(diag, v_basis);
  const TypicalSetSummary kraus_summary =
      typical_set_enumerate(dist, n, eps, limits);

  TypicalReduction red;
  red.n = n;
  red.eps = eps;
  red.entropy_h = dist.entropy_bits;
  red.kraus_count = (long long)std::llround(kraus_summary.count);
  red.kraus_mass = kraus_summary.mass;

  // Output state of the full channel on the uniform V state.
  const double l = double(v_basis.cols());
  CMat sigma = CMat::Zero(ch.out_dim, ch.out_dim);
  for (const CMat& a : diag.kraus) {
    const CMat av = a * v_basis;
    sigma += av * av.adjoint() / l;
  }
  const DensityMatrix sigma_dm = DensityMatrix::trusted(sigma);
  red.entropy_s = spectrum_entropy(sigma_dm.mat);

  const TypicalSubspace subspace =
      typical_subspace_projector(sigma_dm, n, eps, limits);
  red.typical_subspace_dim = subspace.dim;
  red.subspace_mass = subspace.mass;

  KrausChannel typ = typical_channel(diag, v_basis, n, eps, limits);
  const bool empty_typical = red.kraus_count == 0;
  const int dim_n = typ.in_dim;

  const bool projector_is_identity = subspace.dim == dim_n;

  // Typical output state before projecting: each n-fold operator is a kron
  // of single-copy factors, so A pi_{V^n} A^dagger is a kron of the M x M
  // blocks q_s = A_s P_V A_s^dagger / L. Summing those krons over typical
  // sequences sidesteps dense products at the n-fold dimension.
  CMat out = CMat::Zero(dim_n, dim_n);
  if (!empty_typical) {
    const CMat p_v = projector_of(v_basis);
    std::vector<CMat> blocks(diag.kraus.size());
    for (size_t s = 0; s < diag.kraus.size(); ++s) {
      blocks[s] = diag.kraus[s] * p_v * diag.kraus[s].adjoint() / l;
    }
    const auto indices = typical_indices(dist, n, eps, limits);
    for (const std::vector<int>& seq : indices) {
      CMat term = blocks[seq[0]];
      for (int k = 1; k < n; ++k) term = kron(term, blocks[seq[k]], limits);
      out += term;
    }
  }
  if (!projector_is_identity) {
    out = subspace.projector * out * subspace.projector;
    for (CMat& a : typ.kraus) a = subspace.projector * a;
    typ.kind = ChannelKind::trace_decreasing;
  }
  red.selection_prob = out.trace().real();
  red.frobenius_sq = out.squaredNorm();

  red.nonzero_kraus_count = 0;
  if (!empty_typical) {
    for (const CMat& a : typ.kraus) {
      if (a.norm() > Tols{}.prune) ++red.nonzero_kraus_count;
    }
  }
  red.reduced = std::move(typ);
  return red;
}

RateBoundReport rate_bound_report(const KrausChannel& ch, const CMat& v_basis,
                                  int n, double eps, double rate,
                                  const Limits& limits) {
  if (rate < 0.0) throw InputError("rate_bound_report: rate must be >= 0");
  const double k_real = std::floor(std::exp2(double(n) * rate));
  if (k_real > 4.6e18) throw CapacityError("rate_bound_report: 2^{nR} overflow");

  const TypicalReduction red = reduced_operation(ch, v_basis, n, eps, limits);

  RateBoundReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.rate = rate;
  rep.code_dim = std::max(1LL, (long long)k_real);
  rep.kraus_count = red.kraus_count;
  rep.nonzero_kraus_count = red.nonzero_kraus_count;
  rep.alpha_n = 1.0 - red.selection_prob;
  rep.beta_n = std::sqrt(double(rep.code_dim) * double(red.kraus_count) *
                         red.frobenius_sq);
  rep.bound = 1.0 - rep.alpha_n - rep.beta_n;

  const double l = double(v_basis.cols());
  const DensityMatrix pi_v =
      DensityMatrix::trusted(projector_of(v_basis) / l);
  const double s_e = entropy_exchange(ch, pi_v);
  rep.coherent_info = coherent_information(ch, pi_v);
  rep.beta_exponent = 0.5 * (rate + s_e - red.entropy_s + 4.0 * eps);
  return rep;
}

double finite_m_coherent_rate(const KrausChannel& ch, const DensityMatrix& rho,
                              int m, const Limits& limits) {
  if (m < 1) throw InputError("finite_m_coherent_rate: m must be >= 1");
  if (m == 1) return coherent_information(ch, rho);
  const KrausChannel chm = tensor_power(ch, m, limits);
  CMat rho_m = rho.mat;
  for (int k = 1; k < m; ++k) rho_m = kron(rho_m, rho.mat, limits);
  return coherent_information(chm, DensityMatrix::trusted(rho_m)) / double(m);
}

}  // namespace aqec
