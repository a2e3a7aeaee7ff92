#pragma once

#include "aqec/linalg.hpp"
#include "aqec/random.hpp"
#include "aqec/types.hpp"

namespace aqec {

// K-dimensional code subspace of an M-dimensional space, stored as an M x K
// matrix with orthonormal columns.
struct CodeSpace {
  CMat basis;

  static CodeSpace make(CMat basis, const Tols& tols = {});

  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }

  // B B^dagger.
  CMat projector() const { return basis * basis.adjoint(); }

  // Uniform code state pi_C = P_C / K.
  DensityMatrix uniform_state() const {
    return DensityMatrix::trusted(projector() / double(dim()));
  }

  double orthonormality_residual() const;
};

// span{|000>, |111>} inside dim 8.
CodeSpace repetition_code();

// Haar-random K-dimensional subspace of dim M (orthonormalized Gaussian
// columns; the induced subspace measure is unitarily invariant).
CodeSpace random_code(int M, int K, RandomStream& rng);

}  // namespace aqec
