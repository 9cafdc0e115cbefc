// LOCC simulation: local measurements with transcripts, single- and two-copy
// discrimination, teleportation, and the locality audit.

#include "doctest.h"
#include "test_util.hpp"

#include "qdistill/linalg.hpp"
#include "qdistill/locc.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace qdistill;

namespace {

int count_measurements(const LoccTranscript& t) {
  int n = 0;
  for (const auto& e : t.events)
    if (e.kind == TranscriptEvent::Kind::Measurement) ++n;
  return n;
}

int count_broadcasts(const LoccTranscript& t) {
  int n = 0;
  for (const auto& e : t.events)
    if (e.kind == TranscriptEvent::Kind::Broadcast) ++n;
  return n;
}

// Independent Born oracle: probability of Fourier outcome a on the first
// qudit of a two-qudit ket, by direct amplitude summation.  No shared code
// with the library's projection machinery.
double fourier_outcome_probability_oracle(const CVector& psi, int d, int a) {
  double p = 0.0;
  for (int b = 0; b < d; ++b) {
    Complex amp = 0.0;
    for (int j = 0; j < d; ++j) {
      // <f_a| carries the conjugate of e^{-2 pi i j a / d}.
      amp += std::polar(1.0 / std::sqrt(double(d)), 2.0 * std::numbers::pi * j * a / d) *
             psi(j * d + b);
    }
    p += std::norm(amp);
  }
  return p;
}

}  // namespace

TEST_CASE("measure_local: deterministic and Schmidt-correlated outcomes") {
  // |0> measured in the computational basis: outcome 0 with probability 1.
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  Ket single = make_ket(zero, SubsystemLayout::single_qudit(2));
  Rng rng(1);
  LoccTranscript t;
  auto outcome = measure_local(single, "A", computational_basis(2), "computational", rng, t);
  CHECK(outcome.outcome == 0);
  CHECK(outcome.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.audit().empty());

  // One side of psi_00 (d=2): both outcomes carry probability 1/2 and the
  // post-state collapses the far side to the matching basis vector.
  Ket psi = bell_state({0, 0, 2});
  auto branches = measurement_branches(psi, "A", computational_basis(2));
  REQUIRE(branches.size() == 2);
  for (const auto& branch : branches) {
    CHECK(branch.probability == doctest::Approx(0.5).epsilon(1e-12));
    // Post-state is |k>|k> for outcome k.
    CVector expect = CVector::Zero(4);
    expect(branch.outcome * 2 + branch.outcome) = 1.0;
    CHECK((branch.post_state.amps - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  // collapse_remainder projects out the measured side.
  Ket rest = collapse_remainder(psi, "A", computational_basis(2)[1]);
  CHECK(rest.layout.num_qudits() == 1);
  CHECK(std::abs(rest.amps(1) - Complex(1.0)) < 1e-12);
}

TEST_CASE("measure_local: Fourier statistics on psi_12 match the Born oracle") {
  Ket psi = bell_state({1, 2, 3});
  auto branches = measurement_branches(psi, "A", fourier_basis(3));
  REQUIRE(branches.size() == 3);
  for (const auto& branch : branches) {
    double oracle = fourier_outcome_probability_oracle(psi.amps, 3, branch.outcome);
    CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(branch.probability == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("measure_local: error paths") {
  Ket psi = bell_state({0, 0, 2});
  Rng rng(2);
  LoccTranscript t;

  // Non-orthonormal basis.
  CVector v = CVector::Zero(2);
  v(0) = 1.0;
  std::vector<Ket> bad = {make_ket(v, SubsystemLayout::single_qudit(2)),
                          make_ket(v, SubsystemLayout::single_qudit(2))};
  CHECK_THROWS_AS(measure_local(psi, "A", bad, "broken", rng, t), std::invalid_argument);

  // Unknown party.
  CHECK_THROWS_AS(measure_local(psi, "Z", computational_basis(2), "computational", rng, t),
                  std::invalid_argument);

  // Basis too small for the local space.
  CHECK_THROWS_AS(measure_local(psi, "A", {computational_basis(2)[0]}, "half", rng, t),
                  std::invalid_argument);
}

TEST_CASE("apply_local_unitary: locality and validation") {
  Ket psi = bell_state({0, 0, 2});
  // (I (x) W_11) maps psi_00 to psi_11.
  Ket twisted = apply_local_unitary(psi, 1, weyl_operator({1, 1, 2}));
  CHECK(fidelity(twisted, bell_state({1, 1, 2})) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(apply_local_unitary(psi, 2, weyl_operator({0, 0, 2})), std::out_of_range);
  Matrix not_unitary = Matrix::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(apply_local_unitary(psi, 0, not_unitary), std::invalid_argument);
}

TEST_CASE("classical inference rules") {
  // Shift index from computational outcomes: m = (b - a) mod d.
  CHECK(infer_shift_index(0, 1, 2) == 1);
  CHECK(infer_shift_index(2, 0, 3) == 1);
  // Phase index from Fourier outcomes: the joint amplitude vanishes unless
  // n + a + b = 0 (mod d), so n = (-(a+b)) mod d.
  CHECK(infer_phase_index(0, 0, 3) == 0);
  CHECK(infer_phase_index(1, 1, 3) == 1);
  CHECK(infer_phase_index(2, 0, 3) == 1);

  MesFamily shift = MesFamily::shift(3, 2);
  BellLabel li = infer_family_member(shift, 1, 2);
  CHECK(li.n == 2);
  CHECK(li.m == 1);
}

TEST_CASE("single-copy discrimination: exhaustive branch enumeration, d <= 5") {
  for (int d = 2; d <= 5; ++d) {
    for (int fixed = 0; fixed < d; ++fixed) {
      for (auto family : {MesFamily::shift(d, fixed), MesFamily::phase(d, fixed)}) {
        CAPTURE(family.describe());
        ExhaustiveCheck check = verify_single_copy_exhaustive(family);
        CHECK(check.all_correct);
        CHECK(check.branches_checked > 0);
        CHECK(check.diagnostic.empty());
      }
    }
  }
}

TEST_CASE("single-copy discrimination: outcome support follows the label") {
  // Shift family at d=2 with hidden m=1: computational outcomes are always
  // (j, j xor 1).
  Ket psi = bell_state({0, 1, 2});
  for (const auto& branch_a : measurement_branches(psi, "A", computational_basis(2))) {
    for (const auto& branch_b :
         measurement_branches(branch_a.post_state, "B", computational_basis(2))) {
      CHECK(branch_b.outcome == (branch_a.outcome ^ 1));
    }
  }

  // Phase family at d=3 with hidden n=2: Fourier outcomes obey
  // a + b = -2 = 1 (mod 3) on every reachable branch.
  Ket psi3 = bell_state({2, 0, 3});
  for (const auto& branch_a : measurement_branches(psi3, "A", fourier_basis(3))) {
    for (const auto& branch_b :
         measurement_branches(branch_a.post_state, "B", fourier_basis(3))) {
      CHECK((branch_a.outcome + branch_b.outcome) % 3 == 1);
      CHECK(infer_phase_index(branch_a.outcome, branch_b.outcome, 3) == 2);
    }
  }
}

TEST_CASE("single-copy discrimination: sampled runs and transcript shape") {
  MesFamily family = MesFamily::phase(3, 0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    BellLabel hidden{static_cast<int>(seed % 3), 0, 3};
    auto result = discriminate_single_copy(family, hidden, seed);
    CHECK(result.correct);
    CHECK(result.inferred == hidden);
    CHECK(count_measurements(result.transcript) == 2);
    CHECK(count_broadcasts(result.transcript) == 2);
    CHECK(result.transcript.audit().empty());
    CHECK(result.transcript.seed == seed);
  }

  // Hidden labels outside the family are rejected with a diagnostic.
  CHECK_THROWS_AS(discriminate_single_copy(family, {0, 1, 3}, 0), std::invalid_argument);
}

TEST_CASE("two-copy discrimination: exhaustive at d <= 5, sampled at d = 3") {
  for (int d = 2; d <= 5; ++d) {
    CAPTURE(d);
    ExhaustiveCheck check = verify_two_copy_exhaustive(d);
    CHECK(check.all_correct);
    CHECK(check.diagnostic.empty());
  }

  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        BellLabel hidden{n, m, 3};
        auto result = discriminate_two_copy(hidden, seed);
        REQUIRE(result.correct);
        CHECK(result.inferred == hidden);
      }
    }
  }

  // Transcript shape: 4 measurements, 4 broadcasts, audit-clean.
  auto result = discriminate_two_copy({1, 1, 2}, 7);
  CHECK(result.correct);
  CHECK(count_measurements(result.transcript) == 4);
  CHECK(count_broadcasts(result.transcript) == 4);
  CHECK(result.transcript.audit().empty());
}

TEST_CASE("transcript audit: detects tampered records") {
  auto result = discriminate_two_copy({0, 1, 2}, 3);
  REQUIRE(result.transcript.audit().empty());

  // Born vector no longer sums to one.
  LoccTranscript broken = result.transcript;
  for (auto& e : broken.events) {
    if (e.kind == TranscriptEvent::Kind::Measurement) {
      e.outcome_probabilities[0] += 0.5;
      break;
    }
  }
  CHECK_FALSE(broken.audit().empty());

  // Sampled outcome outside the Born vector.
  LoccTranscript outside = result.transcript;
  for (auto& e : outside.events) {
    if (e.kind == TranscriptEvent::Kind::Measurement) {
      e.outcome = 99;
      break;
    }
  }
  CHECK_FALSE(outside.audit().empty());

  // Anonymous measurement.
  LoccTranscript anonymous = result.transcript;
  anonymous.events.front().party.clear();
  CHECK_FALSE(anonymous.audit().empty());

  // Empty broadcast payload.
  LoccTranscript silent;
  silent.add_broadcast("A", "");
  CHECK_FALSE(silent.audit().empty());
}

TEST_CASE("Born statistics: sampled frequencies within 5 sigma over 2*10^4 trials") {
  // Measuring one side of psi_00 (d=2) in the computational basis: p(0)=1/2.
  Ket psi = bell_state({0, 0, 2});
  const int trials = 20000;
  int zeros = 0;
  Rng rng(424242);
  for (int i = 0; i < trials; ++i) {
    LoccTranscript t;
    auto outcome = measure_local(psi, "A", computational_basis(2), "computational", rng, t);
    if (outcome.outcome == 0) ++zeros;
  }
  const double phat = static_cast<double>(zeros) / trials;
  const double sigma = std::sqrt(0.5 * 0.5 / trials);
  CHECK(std::abs(phat - 0.5) < 5.0 * sigma);

  // Fourier outcomes of psi_12 (d=3): each probability 1/3.
  Ket psi3 = bell_state({1, 2, 3});
  std::vector<int> counts(3, 0);
  Rng rng3(77);
  for (int i = 0; i < trials; ++i) {
    LoccTranscript t;
    auto outcome = measure_local(psi3, "A", fourier_basis(3), "fourier", rng3, t);
    ++counts[outcome.outcome];
  }
  const double sigma3 = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / trials);
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(static_cast<double>(counts[a]) / trials - 1.0 / 3.0) < 5.0 * sigma3);
  }
}

TEST_CASE("teleport: matched corrections reproduce the input") {
  std::mt19937 gen(51);
  for (int d = 2; d <= 5; ++d) {
    CAPTURE(d);
    for (int trial = 0; trial < 20; ++trial) {
      Ket input = make_ket(testutil::random_unit_vector(d, gen),
                           SubsystemLayout::single_qudit(d));
      auto result = teleport(input, {0, 0, d}, {0, 0, d},
                             static_cast<std::uint64_t>(trial));
      CHECK(fidelity(result.output, input) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(result.transcript.audit().empty());
    }
  }

  // |0> through psi_00 comes out as |0>.
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  Ket basis0 = make_ket(zero, SubsystemLayout::single_qudit(2));
  auto result = teleport(basis0, {0, 0, 2}, {0, 0, 2}, 9);
  CHECK(fidelity(result.output, basis0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("teleport: mismatched corrections give an outcome-independent Weyl twist") {
  std::mt19937 gen(52);
  const int d = 3;
  Ket input = make_ket(testutil::random_unit_vector(d, gen), SubsystemLayout::single_qudit(d));
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      BellLabel channel{n, m, d};
      ExhaustiveCheck check = verify_teleport_exhaustive(input, channel, {0, 0, d});
      CHECK(check.all_correct);
      CHECK(check.diagnostic.empty());

      // Spot-check the advertised twist on one sampled run: the output must
      // match W_{n,m} applied to the input, up to global phase.
      auto run = teleport(input, channel, {0, 0, d}, 17);
      Ket twisted = make_ket(weyl_operator(channel) * input.amps, input.layout);
      CHECK(fidelity(run.output, twisted) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("teleport: dimension mismatch is rejected") {
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  Ket qubit = make_ket(zero, SubsystemLayout::single_qudit(2));
  CHECK_THROWS_AS(teleport(qubit, {0, 0, 3}, {0, 0, 3}, 0), std::invalid_argument);
}
