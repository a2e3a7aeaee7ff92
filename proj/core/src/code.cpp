#include "aqec/code.hpp"

#include <Eigen/QR>

namespace aqec {

CodeSpace CodeSpace::make(CMat basis, const Tols& tols) {
  if (basis.rows() < 1 || basis.cols() < 1 || basis.cols() > basis.rows()) {
    throw InputError("code basis must be M x K with 1 <= K <= M");
  }
  CodeSpace code;
  code.basis = std::move(basis);
  if (code.orthonormality_residual() > 1e-10) {
    throw InputError("code basis columns are not orthonormal");
  }
  (void)tols;
  return code;
}

double CodeSpace::orthonormality_residual() const {
  const CMat gram = basis.adjoint() * basis;
  return (gram - CMat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

CodeSpace repetition_code() {
  CMat basis = CMat::Zero(8, 2);
  basis(0, 0) = 1.0;  // |000>
  basis(7, 1) = 1.0;  // |111>
  return CodeSpace::make(std::move(basis));
}

CodeSpace random_code(int M, int K, RandomStream& rng) {
  if (K < 1 || K > M) throw InputError("random_code: need 1 <= K <= M");
  CMat g(M, K);
  for (int j = 0; j < K; ++j) {
    for (int i = 0; i < M; ++i) g(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(M, K);
  CodeSpace code;
  code.basis = std::move(q);
  return code;
}

}  // namespace aqec
