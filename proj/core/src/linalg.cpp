#include "aqec/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace aqec {

DensityMatrix DensityMatrix::checked(CMat m, const Tols& tols) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InputError("density matrix must be square and non-empty");
  }
  if (hermiticity_residual(m) > tols.hermitian) {
    throw InputError("density matrix is not Hermitian within tolerance");
  }
  psd_eigenvalues(m, tols.psd, "density matrix");
  const double tr = m.trace().real();
  if (tr <= 0.0 || tr > 1.0 + tols.trace) {
    throw InputError("density matrix trace outside (0, 1]");
  }
  DensityMatrix rho;
  rho.mat = std::move(m);
  rho.trace = tr;
  return rho;
}

DensityMatrix DensityMatrix::trusted(CMat m) {
  DensityMatrix rho;
  rho.trace = m.trace().real();
  rho.mat = std::move(m);
  return rho;
}

DensityMatrix max_mixed(int dim) {
  return DensityMatrix::trusted(CMat::Identity(dim, dim) / double(dim));
}

DensityMatrix pure_state(const CVec& psi) {
  return DensityMatrix::trusted(psi * psi.adjoint());
}

bool is_hermitian(const CMat& a, double tol) {
  return a.rows() == a.cols() && hermiticity_residual(a) <= tol;
}

double hermiticity_residual(const CMat& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double trace_norm(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().sum();
}

double frobenius_norm(const CMat& a) { return a.norm(); }

double frobenius_norm_sq(const CMat& a) { return a.squaredNorm(); }

CMat kron(const CMat& a, const CMat& b, const Limits& limits) {
  const long long rows = a.rows() * b.rows();
  const long long cols = a.cols() * b.cols();
  if (rows > limits.max_dim || cols > limits.max_dim) {
    throw CapacityError("kron product dimension exceeds max_dim");
  }
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat partial_trace(const CMat& a, int d1, int d2, Keep keep) {
  if (a.rows() != a.cols() || a.rows() != Eigen::Index(d1) * d2) {
    throw InputError("partial_trace: operator dimension is not d1*d2");
  }
  if (keep == Keep::first) {
    CMat out = CMat::Zero(d1, d1);
    for (int i = 0; i < d1; ++i) {
      for (int j = 0; j < d1; ++j) {
        for (int k = 0; k < d2; ++k) {
          out(i, j) += a(Eigen::Index(i) * d2 + k, Eigen::Index(j) * d2 + k);
        }
      }
    }
    return out;
  }
  CMat out = CMat::Zero(d2, d2);
  for (int i = 0; i < d2; ++i) {
    for (int j = 0; j < d2; ++j) {
      for (int k = 0; k < d1; ++k) {
        out(i, j) += a(Eigen::Index(k) * d2 + i, Eigen::Index(k) * d2 + j);
      }
    }
  }
  return out;
}

Eigen::VectorXd psd_eigenvalues(const CMat& a, double psd_tol,
                                const char* what) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -psd_tol) {
      throw InputError(std::string(what) + " has eigenvalue below -psd_tol");
    }
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

CMat hermitian_sqrt(const CMat& a, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -psd_tol) {
      throw InputError("hermitian_sqrt: eigenvalue below -psd_tol");
    }
    ev(i) = ev(i) < 0.0 ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double von_neumann_entropy(const DensityMatrix& rho, const Tols& tols) {
  if (std::abs(rho.trace - 1.0) > tols.trace) {
    throw InputError("von_neumann_entropy: state is not normalized");
  }
  if (hermiticity_residual(rho.mat) > tols.hermitian) {
    throw InputError("von_neumann_entropy: state is not Hermitian");
  }
  return spectrum_entropy(rho.mat, tols.psd);
}

double spectrum_entropy(const CMat& hermitian_psd, double psd_tol) {
  const Eigen::VectorXd ev =
      psd_eigenvalues(hermitian_psd, psd_tol, "spectrum_entropy argument");
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
  }
  return s;
}

double state_fidelity(const DensityMatrix& a, const DensityMatrix& b,
                      const Tols& tols) {
  if (a.dim() != b.dim()) {
    throw InputError("state_fidelity: dimension mismatch");
  }
  const CMat sa = hermitian_sqrt(a.mat, tols.psd);
  const CMat sb = hermitian_sqrt(b.mat, tols.psd);
  const double tn = trace_norm(sa * sb);
  return tn * tn;
}

double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

}  // namespace aqec
