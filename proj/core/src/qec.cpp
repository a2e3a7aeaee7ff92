#include "aqec/qec.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "aqec/info.hpp"

namespace aqec {
namespace {

void require_square_matching(const KrausChannel& ch, const CodeSpace& code,
                             const char* what) {
  if (!ch.square()) {
    throw InputError(std::string(what) + ": channel must be square");
  }
  if (ch.in_dim != code.ambient_dim()) {
    throw InputError(std::string(what) + ": code ambient dim mismatch");
  }
}

// B^dagger A_i^dagger A_j B for all pairs.
std::vector<std::vector<CMat>> code_gram_blocks(const KrausChannel& ch,
                                                const CodeSpace& code) {
  const int N = ch.kraus_count();
  std::vector<CMat> ab(N);
  for (int i = 0; i < N; ++i) ab[i] = ch.kraus[i] * code.basis;
  std::vector<std::vector<CMat>> g(N, std::vector<CMat>(N));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) g[i][j] = ab[i].adjoint() * ab[j];
  }
  return g;
}

// Square root of a PSD matrix whose negative eigenvalue dust (from upstream
// tolerances) is clamped instead of rejected.
CMat clamped_sqrt(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

struct MinFidResult {
  CVec state;     // in subspace coordinates
  double value = 1.0;
};

double channel_fidelity_in_coords(const std::vector<CMat>& ops_sub,
                                  const CVec& x) {
  double f = 0.0;
  for (const CMat& a : ops_sub) {
    f += std::norm(Complex(x.adjoint() * a * x));
  }
  return f;
}

// Projected gradient descent for min_x sum_i |x^dagger A_i x|^2 on the unit
// sphere, multi-start plus random screening on small subspaces.
MinFidResult min_fidelity_search(const std::vector<CMat>& ops_sub,
                                 RandomStream& rng,
                                 const SubcodeSearchOptions& opts) {
  const int d = static_cast<int>(ops_sub[0].rows());
  MinFidResult best;
  best.state = CVec::Unit(d, 0);
  best.value = channel_fidelity_in_coords(ops_sub, best.state);

  std::vector<CVec> starts;
  for (int r = 0; r < opts.restarts; ++r) {
    starts.push_back(random_pure_state(d, rng));
  }
  if (d <= 4) {
    CVec screened;
    double screened_val = best.value + 1.0;
    for (int s = 0; s < opts.brute_samples; ++s) {
      const CVec x = random_pure_state(d, rng);
      const double f = channel_fidelity_in_coords(ops_sub, x);
      if (f < screened_val) {
        screened_val = f;
        screened = x;
      }
    }
    if (screened.size() > 0) starts.push_back(screened);
    if (screened_val < best.value) {
      best.value = screened_val;
      best.state = screened;
    }
  }

  for (const CVec& start : starts) {
    CVec x = start;
    double f = channel_fidelity_in_coords(ops_sub, x);
    for (int it = 0; it < opts.max_iterations; ++it) {
      CVec g = CVec::Zero(d);
      for (const CMat& a : ops_sub) {
        const Complex c = Complex(x.adjoint() * a * x);
        g += std::conj(c) * (a * x) + c * (a.adjoint() * x);
      }
      const CVec tangent = g - x * Complex(x.dot(g));
      const double gnorm = tangent.norm();
      if (gnorm < 1e-10) break;
      double step = 0.5;
      bool moved = false;
      while (step > 1e-12) {
        CVec cand = x - step * tangent;
        cand /= cand.norm();
        const double fc = channel_fidelity_in_coords(ops_sub, cand);
        if (fc < f - 1e-12) {
          x = std::move(cand);
          f = fc;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (f < best.value) {
      best.value = f;
      best.state = x;
    }
  }
  return best;
}

}  // namespace

KLReport kl_check(const KrausChannel& ch, const CodeSpace& code,
                  const Tols& tols) {
  require_square_matching(ch, code, "kl_check");
  const int K = code.dim();
  const auto gram = code_gram_blocks(ch, code);
  double residual = 0.0;
  const CMat id = CMat::Identity(K, K);
  for (const auto& row : gram) {
    for (const CMat& g : row) {
      const CMat centered = g - (g.trace() / double(K)) * id;
      residual = std::max(residual, centered.norm());
    }
  }
  return KLReport{residual, residual <= tols.kl};
}

DReport build_D(const KrausChannel& ch, const CodeSpace& code,
                const Limits& limits) {
  require_square_matching(ch, code, "build_D");
  const int K = code.dim();
  const int N = ch.kraus_count();
  if (static_cast<long long>(K) * N > limits.max_dim) {
    throw CapacityError("build_D: K*N exceeds max_dim");
  }
  const auto gram = code_gram_blocks(ch, code);
  const CMat id = CMat::Identity(K, K);

  DReport rep;
  rep.D = CMat::Zero(K * N, K * N);
  double selection = 0.0;
  for (int i = 0; i < N; ++i) {
    selection += gram[i][i].trace().real();
    for (int j = 0; j < N; ++j) {
      const CMat block =
          (gram[i][j] - (gram[i][j].trace() / double(K)) * id) / double(K);
      for (int l = 0; l < K; ++l) {
        for (int m = 0; m < K; ++m) {
          rep.D(l * N + i, m * N + j) = block(l, m);
        }
      }
    }
  }
  selection /= double(K);
  rep.selection_probability =
      ch.kind == ChannelKind::trace_preserving ? 1.0 : selection;

  Eigen::SelfAdjointEigenSolver<CMat> es(rep.D, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  rep.trace_norm_D = ev.cwiseAbs().sum();
  rep.frobenius_sq_D = rep.D.squaredNorm();
  rep.fidelity_lower_bound = rep.selection_probability - rep.trace_norm_D;
  rep.max_abs_eigenvalue = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
  rep.eigen_spread =
      rep.trace_norm_D > 0.0
          ? rep.max_abs_eigenvalue * double(ev.size()) / rep.trace_norm_D
          : 1.0;
  return rep;
}

KrausChannel exact_recovery(const KrausChannel& ch, const CodeSpace& code,
                            const Tols& tols) {
  require_square_matching(ch, code, "exact_recovery");
  const KLReport kl = kl_check(ch, code, tols);
  if (!kl.exact) {
    throw PreconditionError("exact_recovery: code is not exactly correctable",
                            kl.residual);
  }
  const KrausChannel diag = diagonalize_kraus(ch, code.projector(), tols);
  const int M = ch.in_dim;
  const int K = code.dim();

  std::vector<CMat> recovery;
  CMat corrected = CMat::Zero(M, M);  // sum of recovered-range projectors
  for (const CMat& e : diag.kraus) {
    const CMat eb = e * code.basis;  // M x K, Gram d_k * 1_K
    const double d_k = eb.squaredNorm() / double(K);
    if (d_k <= tols.prune) continue;
    const CMat isometry = eb / std::sqrt(d_k);
    recovery.push_back(code.basis * isometry.adjoint());
    corrected += isometry * isometry.adjoint();
  }
  recovery.push_back(clamped_sqrt(CMat::Identity(M, M) - corrected));
  return KrausChannel::make(std::move(recovery), tols);
}

KrausChannel uhlmann_recovery(const KrausChannel& ch, const CodeSpace& code,
                              const Limits& limits) {
  require_square_matching(ch, code, "uhlmann_recovery");
  const int M = ch.in_dim;
  const int K = code.dim();
  const int N = ch.kraus_count();
  const int d_s = K * M;       // reference copy carried through the recovery
  const int d_qs = M * d_s;    // the recovered system plus its copy
  const int d_re = K * N;
  if (d_qs > limits.max_dim) {
    throw CapacityError("uhlmann_recovery: M*K*M exceeds max_dim");
  }

  const CMat& b = code.basis;
  double p = 1.0;
  if (ch.kind == ChannelKind::trace_decreasing) {
    p = 0.0;
    for (const CMat& a : ch.kraus) p += (a * b).squaredNorm();
    p /= double(K);
    if (p <= 1e-12) {
      throw InputError("uhlmann_recovery: selection probability vanishes");
    }
  }

  // Joint reference-output-environment vector after the channel isometry,
  // psi'[(r, q, e)] = sum_{q'} A_e(q, q') B(q', r) / sqrt(p K).
  CVec psi_p = CVec::Zero(Eigen::Index(K) * M * N);
  const double norm = 1.0 / std::sqrt(p * double(K));
  for (int e = 0; e < N; ++e) {
    const CMat ab = ch.kraus[e] * b;  // M x K
    for (int r = 0; r < K; ++r) {
      for (int q = 0; q < M; ++q) {
        psi_p((Eigen::Index(r) * M + q) * N + e) = norm * ab(q, r);
      }
    }
  }

  // Purification overlap across the (reference, environment) | (output, copy)
  // cut: rows (r, e), columns (q, s).
  CMat t_prime = CMat::Zero(d_re, d_qs);   // psi' (x) |0> on the copy
  CMat t_tilde = CMat::Zero(d_re, d_qs);   // psi_RQ (x) psi' relabeled to copy
  for (int r = 0; r < K; ++r) {
    for (int q = 0; q < M; ++q) {
      for (int e = 0; e < N; ++e) {
        t_prime(r * N + e, Eigen::Index(q) * d_s + 0) =
            psi_p((Eigen::Index(r) * M + q) * N + e);
        for (int s = 0; s < d_s; ++s) {
          t_tilde(r * N + e, Eigen::Index(q) * d_s + s) =
              (b(q, r) / std::sqrt(double(K))) *
              psi_p(Eigen::Index(s) * N + e);
        }
      }
    }
  }

  const CMat overlap = (t_tilde.adjoint() * t_prime).transpose();
  Eigen::JacobiSVD<CMat> svd(overlap,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMat u_qs = svd.matrixV() * svd.matrixU().adjoint();

  std::vector<CMat> recovery(d_s);
  for (int k = 0; k < d_s; ++k) {
    CMat rk(M, M);
    for (int q = 0; q < M; ++q) {
      for (int qp = 0; qp < M; ++qp) {
        rk(q, qp) = u_qs(Eigen::Index(q) * d_s + k, Eigen::Index(qp) * d_s);
      }
    }
    recovery[k] = std::move(rk);
  }
  return KrausChannel::make(std::move(recovery));
}

double entanglement_fidelity(const KrausChannel& ch, const DensityMatrix& rho) {
  if (!ch.square() || rho.dim() != ch.in_dim) {
    throw InputError("entanglement_fidelity: dimension mismatch");
  }
  double f = 0.0;
  for (const CMat& a : ch.kraus) f += std::norm((rho.mat * a).trace());
  return f;
}

MCEstimate average_channel_fidelity_mc(const KrausChannel& ch,
                                       const CodeSpace& code,
                                       long long samples, RandomStream& rng) {
  require_square_matching(ch, code, "average_channel_fidelity_mc");
  if (samples < 2) throw InputError("average_channel_fidelity_mc: samples < 2");
  const int K = code.dim();
  std::vector<CMat> ops_sub(ch.kraus.size());
  for (size_t i = 0; i < ch.kraus.size(); ++i) {
    ops_sub[i] = code.basis.adjoint() * ch.kraus[i] * code.basis;
  }
  double mean = 0.0, m2 = 0.0;
  for (long long s = 0; s < samples; ++s) {
    RandomStream task = rng.substream(std::uint64_t(s));
    const CVec x = random_pure_state(K, task);
    const double f = channel_fidelity_in_coords(ops_sub, x);
    const double delta = f - mean;
    mean += delta / double(s + 1);
    m2 += delta * (f - mean);
  }
  MCEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.std_error = std::sqrt(m2 / double(samples - 1) / double(samples));
  return est;
}

SubcodeResult extract_subcode(const KrausChannel& ch_with_recovery,
                              const CodeSpace& code, int target_dim,
                              RandomStream& rng,
                              const SubcodeSearchOptions& opts) {
  require_square_matching(ch_with_recovery, code, "extract_subcode");
  if (target_dim < 1 || target_dim > code.dim()) {
    throw InputError("extract_subcode: target_dim outside [1, K]");
  }

  CMat basis = code.basis;
  std::uint64_t task = 0;
  while (basis.cols() > target_dim) {
    const int d = static_cast<int>(basis.cols());
    std::vector<CMat> ops_sub(ch_with_recovery.kraus.size());
    for (size_t i = 0; i < ch_with_recovery.kraus.size(); ++i) {
      ops_sub[i] = basis.adjoint() * ch_with_recovery.kraus[i] * basis;
    }
    RandomStream search_rng = rng.substream(task++);
    const MinFidResult worst = min_fidelity_search(ops_sub, search_rng, opts);

    // Drop the worst state: columns 2..d of a unitary with first column
    // worst.state span its orthogonal complement inside the subspace.
    Eigen::HouseholderQR<CMat> qr(worst.state);
    const CMat q = qr.householderQ() * CMat::Identity(d, d);
    basis = basis * q.rightCols(d - 1);
  }

  SubcodeResult res;
  res.subcode = CodeSpace::make(std::move(basis));
  std::vector<CMat> ops_sub(ch_with_recovery.kraus.size());
  for (size_t i = 0; i < ch_with_recovery.kraus.size(); ++i) {
    ops_sub[i] = res.subcode.basis.adjoint() * ch_with_recovery.kraus[i] *
                 res.subcode.basis;
  }
  RandomStream final_rng = rng.substream(task);
  res.achieved_min = min_fidelity_search(ops_sub, final_rng, opts).value;
  return res;
}

double sw_bound(const KrausChannel& ch, const CodeSpace& code) {
  require_square_matching(ch, code, "sw_bound");
  if (ch.kind != ChannelKind::trace_preserving) {
    throw PreconditionError("sw_bound: channel must be trace-preserving", 0.0);
  }
  const double s = std::log2(double(code.dim()));
  const double info = coherent_information(ch, code.uniform_state());
  double diff = s - info;
  if (std::abs(diff) <= 1e-10) diff = 0.0;
  if (diff < 0.0) diff = 0.0;
  const double bound = 1.0 - 2.0 * std::sqrt(diff);
  return bound < 0.0 ? 0.0 : (bound > 1.0 ? 1.0 : bound);
}

}  // namespace aqec
