#pragma once

#include "aqec/types.hpp"

namespace aqec {

// Normalized density operator: Hermitian, PSD within Tols::psd, trace in
// (0, 1 + Tols::trace]. checked() validates, trusted() skips validation for
// matrices that are PSD by construction.
struct DensityMatrix {
  CMat mat;
  double trace = 0.0;

  static DensityMatrix checked(CMat m, const Tols& tols = {});
  static DensityMatrix trusted(CMat m);

  int dim() const { return static_cast<int>(mat.rows()); }
};

DensityMatrix max_mixed(int dim);
DensityMatrix pure_state(const CVec& psi);

bool is_hermitian(const CMat& a, double tol);

// Largest absolute entry of a - a_dagger; 0 for exactly Hermitian input.
double hermiticity_residual(const CMat& a);

// Sum of singular values.
double trace_norm(const CMat& a);

double frobenius_norm(const CMat& a);
double frobenius_norm_sq(const CMat& a);

// Kronecker product, row index = i_a * rows_b + i_b (left factor most
// significant). Guarded by limits.max_dim on the product dimensions.
CMat kron(const CMat& a, const CMat& b, const Limits& limits = {});

enum class Keep { first, second };

// Partial trace of an operator on a (d1*d2)-dimensional bipartite space.
CMat partial_trace(const CMat& a, int d1, int d2, Keep keep);

// Eigenvalues of a Hermitian matrix, ascending. Values in [-psd_tol, 0) are
// clamped to 0; values below -psd_tol raise InputError.
Eigen::VectorXd psd_eigenvalues(const CMat& a, double psd_tol,
                                const char* what);

// Principal square root of a PSD Hermitian matrix (clamping as above).
CMat hermitian_sqrt(const CMat& a, double psd_tol = Tols{}.psd);

// Von Neumann entropy in bits of a normalized density operator.
double von_neumann_entropy(const DensityMatrix& rho, const Tols& tols = {});

// -sum_i lambda_i log2 lambda_i over the clamped spectrum; no trace check.
double spectrum_entropy(const CMat& hermitian_psd, double psd_tol = Tols{}.psd);

// Squared-overlap fidelity F(a, b) = (tr sqrt(sqrt(a) b sqrt(a)))^2 computed
// as trace_norm(sqrt(a) sqrt(b))^2. Symmetric; F(rho, rho) = 1.
double state_fidelity(const DensityMatrix& a, const DensityMatrix& b,
                      const Tols& tols = {});

// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

}  // namespace aqec
