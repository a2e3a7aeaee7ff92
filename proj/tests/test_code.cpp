#include <doctest.h>

#include "aqec/code.hpp"

using namespace aqec;

TEST_CASE("repetition code spans |000> and |111>") {
  const CodeSpace code = repetition_code();
  CHECK(code.ambient_dim() == 8);
  CHECK(code.dim() == 2);
  CHECK(code.basis(0, 0) == Complex(1, 0));
  CHECK(code.basis(7, 1) == Complex(1, 0));
  CHECK(code.orthonormality_residual() == 0.0);
  CHECK(code.uniform_state().trace == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(code.projector().trace().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("make rejects non-orthonormal bases") {
  CMat basis = CMat::Zero(3, 2);
  basis(0, 0) = 1.0;
  basis(0, 1) = 1.0;  // same column twice
  CHECK_THROWS_AS(CodeSpace::make(basis), InputError);

  CMat scaled = CMat::Zero(3, 1);
  scaled(0, 0) = 2.0;
  CHECK_THROWS_AS(CodeSpace::make(scaled), InputError);

  CHECK_THROWS_AS(CodeSpace::make(CMat::Zero(3, 0)), InputError);
}

TEST_CASE("random codes are orthonormal subspaces") {
  RandomStream rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const CodeSpace code = random_code(7, 3, rng);
    CHECK(code.orthonormality_residual() <= 1e-12);
    const CMat proj = code.projector();
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(proj.trace().real() == doctest::Approx(3.0).epsilon(1e-12));
  }
}
