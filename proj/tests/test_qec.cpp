#include <doctest.h>

#include <cmath>

#include "aqec/channel.hpp"
#include "aqec/code.hpp"
#include "aqec/qec.hpp"

using namespace aqec;

namespace {

KrausChannel fixed_random_channel(int m, int n, std::uint64_t seed) {
  RandomStream rng = RandomStream(seed).substream(1);
  return random_channel(m, n, rng);
}

CodeSpace fixed_random_code(int m, int k, std::uint64_t seed) {
  RandomStream rng = RandomStream(seed).substream(2);
  return random_code(m, k, rng);
}

}  // namespace

TEST_CASE("repetition code corrects single-flip noise exactly") {
  const CodeSpace code = repetition_code();
  for (double p : {0.05, 0.2, 0.5}) {
    const KrausChannel noise = three_qubit_bitflip_noise(p);
    const KLReport kl = kl_check(noise, code);
    CHECK(kl.exact);
    CHECK(kl.residual <= 1e-12);

    const DReport d = build_D(noise, code);
    CHECK(d.trace_norm_D <= 1e-12);
    CHECK(d.selection_probability == doctest::Approx(1.0));
    CHECK(d.fidelity_lower_bound >= 1.0 - 1e-10);
  }
}

TEST_CASE("independent flips break exact correctability by a known residual") {
  // Triple and double flips leak out of the correctable error set; the
  // largest off-proportionality block has Frobenius norm
  // sqrt(2) (p (1-p))^{3/2}.
  const CodeSpace code = repetition_code();
  const double p = 0.3;
  const KrausChannel noise = tensor_power(bit_flip(p), 3);
  const KLReport kl = kl_check(noise, code);
  CHECK_FALSE(kl.exact);
  const double expected = std::sqrt(2.0) * std::pow(p * (1 - p), 1.5);
  CHECK(kl.residual == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("D operator structure") {
  const KrausChannel ch = fixed_random_channel(6, 2, 31);
  const CodeSpace code = fixed_random_code(6, 2, 31);
  const DReport d = build_D(ch, code);

  CHECK(d.D.rows() == code.dim() * ch.kraus_count());
  CHECK(std::abs(d.D.trace()) <= 1e-12);
  CHECK((d.D - d.D.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(d.fidelity_lower_bound ==
        doctest::Approx(d.selection_probability - d.trace_norm_D)
            .epsilon(1e-12));
  CHECK(d.frobenius_sq_D == doctest::Approx(d.D.squaredNorm()).epsilon(1e-10));

  // ||D||_tr <= N^2 residual / sqrt(K).
  const KLReport kl = kl_check(ch, code);
  const double n = ch.kraus_count();
  CHECK(d.trace_norm_D <=
        n * n * kl.residual / std::sqrt(double(code.dim())) + 1e-12);
}

TEST_CASE("trace norm of D is representation independent") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const KrausChannel ch = fixed_random_channel(5, 3, seed);
    const CodeSpace code = fixed_random_code(5, 2, seed);
    const KrausChannel diag = diagonalize_kraus(ch, code.projector());
    const double before = build_D(ch, code).trace_norm_D;
    const double after = build_D(diag, code).trace_norm_D;
    CHECK(std::abs(before - after) <= 1e-9);
  }
}

TEST_CASE("exact recovery restores code states") {
  const CodeSpace code = repetition_code();
  const KrausChannel noise = three_qubit_bitflip_noise(0.2);
  const KrausChannel recovery = exact_recovery(noise, code);
  CHECK(recovery.kind == ChannelKind::trace_preserving);

  const KrausChannel round_trip = compose(recovery, noise);
  const double fe = entanglement_fidelity(round_trip, code.uniform_state());
  CHECK(fe >= 1.0 - 1e-10);

  // Not exactly correctable: refuse rather than return a wrong recovery.
  const KrausChannel bad = tensor_power(bit_flip(0.3), 3);
  CHECK_THROWS_AS(exact_recovery(bad, code), PreconditionError);
}

TEST_CASE("uhlmann recovery meets the decoupling bound") {
  for (std::uint64_t seed : {10, 11, 12}) {
    const KrausChannel ch = fixed_random_channel(6, 3, seed);
    const CodeSpace code = fixed_random_code(6, 2, seed);
    const DReport d = build_D(ch, code);
    const KrausChannel recovery = uhlmann_recovery(ch, code);
    CHECK((recovery.completeness_sum() -
           CMat::Identity(recovery.in_dim, recovery.in_dim))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);

    const double fe = entanglement_fidelity(compose(recovery, ch),
                                            code.uniform_state());
    CHECK(fe >= d.selection_probability - d.trace_norm_D - 1e-6);
  }
}

TEST_CASE("uhlmann recovery handles selective operations") {
  const KrausChannel full = fixed_random_channel(4, 3, 21);
  const KrausChannel part = restrict_kraus(full, {0, 1});
  const CodeSpace code = fixed_random_code(4, 2, 21);
  const DReport d = build_D(part, code);
  CHECK(d.selection_probability < 1.0);

  const KrausChannel recovery = uhlmann_recovery(part, code);
  const double fe =
      entanglement_fidelity(compose(recovery, part), code.uniform_state());
  CHECK(fe >= d.selection_probability - d.trace_norm_D - 1e-6);
}

TEST_CASE("entanglement fidelity closed forms") {
  const DensityMatrix pi = max_mixed(2);
  for (double p : {0.0, 0.25, 0.8}) {
    CHECK(entanglement_fidelity(phase_flip(p), pi) ==
          doctest::Approx(1.0 - p).epsilon(1e-12));
    CHECK(entanglement_fidelity(depolarizing(p), pi) ==
          doctest::Approx(1.0 - 0.75 * p).epsilon(1e-12));
  }
}

TEST_CASE("entanglement fidelity lower-bounds average fidelity") {
  const KrausChannel ch = fixed_random_channel(4, 2, 77);
  const CodeSpace code = fixed_random_code(4, 2, 77);
  const double fe = entanglement_fidelity(ch, code.uniform_state());

  RandomStream rng = RandomStream(77).substream(3);
  const MCEstimate av = average_channel_fidelity_mc(ch, code, 2000, rng);
  CHECK(fe <= av.mean + 3.0 * av.std_error);
}

TEST_CASE("average fidelity of the depolarizing channel has zero variance") {
  // <psi| E(psi) |psi> = 1 - p/2 for every qubit state.
  CMat id = CMat::Identity(2, 2);
  const CodeSpace full = CodeSpace::make(id);
  RandomStream rng(8);
  const MCEstimate av = average_channel_fidelity_mc(depolarizing(0.4), full,
                                                    200, rng);
  CHECK(av.mean == doctest::Approx(1.0 - 0.2).epsilon(1e-10));
  CHECK(av.std_error <= 1e-12);
}

TEST_CASE("subcode extraction keeps high-fidelity states") {
  const KrausChannel ch =
      compose(depolarizing(0.03), identity_channel(2));  // still a qubit map
  const KrausChannel two = tensor_power(ch, 2);
  const CodeSpace full = CodeSpace::make(CMat::Identity(4, 4));

  const double fe = entanglement_fidelity(two, full.uniform_state());
  const double eps = 1.0 - fe;
  REQUIRE(eps <= 0.05);

  RandomStream rng(4242);
  const SubcodeResult result = extract_subcode(two, full, 2, rng);
  CHECK(result.subcode.dim() == 2);
  CHECK(result.subcode.orthonormality_residual() <= 1e-10);
  CHECK(result.achieved_min >= 1.0 - 2.0 * eps - 0.01);
}

TEST_CASE("entropy-difference bound") {
  const CodeSpace code = repetition_code();
  CHECK(sw_bound(three_qubit_bitflip_noise(0.1), code) ==
        doctest::Approx(1.0).epsilon(1e-9));

  const CodeSpace qubit = CodeSpace::make(CMat::Identity(2, 2));
  CHECK(sw_bound(phase_flip(0.1), qubit) == 0.0);  // clamped at zero

  CHECK_THROWS_AS(sw_bound(restrict_kraus(phase_flip(0.1), {0}), qubit),
                  PreconditionError);
}
