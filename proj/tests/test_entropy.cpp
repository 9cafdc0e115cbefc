// Entropic quantities: von Neumann entropy, quantum relative entropy with
// first-class INFINITE, the classical label-space KL fast path, support
// containment with witnesses, and the counting bound.

#include "doctest.h"
#include "test_util.hpp"

#include "qdistill/entropy.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/mixtures.hpp"
#include "qdistill/qudit_states.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace qdistill;

namespace {

DensityOperator pure(const Ket& psi) {
  return make_density(psi.amps * psi.amps.adjoint(), psi.layout);
}

const double kLog2_3 = std::log2(3.0);

}  // namespace

TEST_CASE("von_neumann_entropy: pure states, flat mixtures, additivity") {
  CHECK(von_neumann_entropy(pure(bell_state({0, 0, 2}))) == doctest::Approx(0.0).epsilon(1e-12));

  for (int d : {2, 3, 4}) {
    DensityOperator mixed =
        make_density(Matrix::Identity(d, d) / d, SubsystemLayout::single_qudit(d));
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log2(d)).epsilon(1e-12));
  }

  // The four-party correlated mixture has d flat eigenvalues 1/d.
  for (int d : {2, 3}) {
    auto state = four_party_state(FourPartyDescriptor::standard(d));
    CHECK(von_neumann_entropy(*state.dense) == doctest::Approx(std::log2(d)).epsilon(1e-9));
  }

  // Additivity over tensor products.
  std::mt19937 gen(31);
  Matrix a = testutil::random_density_matrix(3, gen);
  Matrix b = testutil::random_density_matrix(4, gen);
  DensityOperator rho_a = make_density(a, SubsystemLayout::single_qudit(3));
  DensityOperator rho_b = make_density(b, SubsystemLayout::single_qudit(4));
  DensityOperator joint =
      make_density(tensor_product(a, b), SubsystemLayout{{3, 4}, {"A", "B"}});
  CHECK(von_neumann_entropy(joint) ==
        doctest::Approx(von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b))
            .epsilon(1e-9));
}

TEST_CASE("von_neumann_entropy: rejects non-PSD operators") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  DensityOperator rho{m, SubsystemLayout::single_qudit(2)};  // bypass make_density
  CHECK_THROWS_AS(von_neumann_entropy(rho), std::domain_error);
}

TEST_CASE("relative_entropy: identity, the log2 d reproduction, orthogonal supports") {
  auto full2 = uniform_full_mixture(2);
  CHECK(relative_entropy(*full2.dense, *full2.dense).value_bits ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int d : {2, 3}) {
    CAPTURE(d);
    auto rho = four_party_state(FourPartyDescriptor::standard(d));
    auto sigma = uniform_full_mixture(d);
    EntropyResult r = relative_entropy(*rho.dense, *sigma.dense);
    REQUIRE_FALSE(r.infinite);
    CHECK(r.support_contained);
    CHECK(r.method == EntropyResult::Method::Dense);
    CHECK(r.value_bits == doctest::Approx(std::log2(d)).epsilon(1e-9));
  }

  // Orthogonal pure states: INFINITE, never a float overflow.
  EntropyResult inf =
      relative_entropy(pure(bell_state({0, 0, 2})), pure(bell_state({0, 1, 2})));
  CHECK(inf.infinite);
  CHECK_FALSE(inf.support_contained);

  // Dimension mismatch.
  CHECK_THROWS_AS(relative_entropy(*full2.dense, pure(bell_state({0, 0, 2}))),
                  std::invalid_argument);
}

TEST_CASE("relative_entropy: nonnegative and zero only at equality") {
  std::mt19937 gen(32);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = testutil::random_density_matrix(4, gen);
    // Full-rank sigma keeps the value finite.
    Matrix b = testutil::random_density_matrix(4, gen);
    b = 0.9 * b + 0.1 * Matrix::Identity(4, 4) / 4.0;
    SubsystemLayout layout = SubsystemLayout::single_qudit(4);
    EntropyResult r = relative_entropy(make_density(a, layout), make_density(b, layout));
    REQUIRE_FALSE(r.infinite);
    CHECK(r.value_bits > -1e-9);
  }
}

TEST_CASE("kl_label: the closed-form values") {
  // Four-party against the full mixture: log2 d.
  for (int d : {2, 3, 5}) {
    CAPTURE(d);
    auto p = four_party_state(FourPartyDescriptor::standard(d)).labels;
    auto q = uniform_full_mixture(d).labels;
    EntropyResult r = kl_label(p, q);
    REQUIRE_FALSE(r.infinite);
    CHECK(r.method == EntropyResult::Method::Label);
    CHECK(r.value_bits == doctest::Approx(std::log2(d)).epsilon(1e-12));
  }

  // Even-copy mixtures against consecutive pairings: (2m-2) log2 d.
  struct Pin {
    int d, m;
  };
  for (auto [d, m] : {Pin{2, 2}, Pin{2, 3}, Pin{3, 2}}) {
    CAPTURE(d);
    CAPTURE(m);
    auto p = multi_copy_state(d, 2 * m).labels;
    auto q = pairing_product(d, consecutive_pairing(2 * m));
    EntropyResult r = kl_label(p, q);
    REQUIRE_FALSE(r.infinite);
    CHECK(r.value_bits == doctest::Approx((2 * m - 2) * std::log2(d)).epsilon(1e-12));
  }

  // Identical distributions.
  auto same = multi_copy_state(2, 2).labels;
  CHECK(kl_label(same, same).value_bits == doctest::Approx(0.0).epsilon(1e-15));

  // INFINITE when p charges a string q does not support: the full mixture
  // leaks outside the d-member four-party support.
  auto leaky = kl_label(uniform_full_mixture(2).labels,
                        four_party_state(FourPartyDescriptor::standard(2)).labels);
  CHECK(leaky.infinite);
  CHECK_FALSE(leaky.support_contained);

  // Shape mismatch.
  CHECK_THROWS_AS(kl_label(multi_copy_state(2, 2).labels, multi_copy_state(2, 3).labels),
                  std::invalid_argument);
  CHECK_THROWS_AS(kl_label(multi_copy_state(2, 2).labels, multi_copy_state(3, 2).labels),
                  std::invalid_argument);
}

TEST_CASE("kl_label agrees with dense relative entropy on builder states") {
  auto combos = {
      std::pair{StateDescriptor::four_party(2), StateDescriptor::full_mixture(2)},
      std::pair{StateDescriptor::four_party(3), StateDescriptor::full_mixture(3)},
      std::pair{StateDescriptor::multi_copy(2, 2), StateDescriptor::multi_copy(2, 1, 2)},
  };
  for (const auto& [pd, qd] : combos) {
    CAPTURE(pd.describe());
    CAPTURE(qd.describe());
    EntropyResult label = kl_label(pd.resolve_labels(), qd.resolve_labels());
    auto pdense = pd.resolve_dense();
    auto qdense = qd.resolve_dense();
    REQUIRE(pdense.has_value());
    REQUIRE(qdense.has_value());
    EntropyResult dense = relative_entropy(*pdense, *qdense);
    REQUIRE(label.infinite == dense.infinite);
    if (!label.infinite) {
      CHECK(label.value_bits == doctest::Approx(dense.value_bits).epsilon(1e-9));
    }
  }
}

TEST_CASE("support_contained: label-space witnesses") {
  auto four = four_party_state(FourPartyDescriptor::standard(2)).labels;
  auto full = uniform_full_mixture(2).labels;

  CHECK(support_contained(four, full).contained);
  CHECK(support_contained(four, four).contained);

  SupportWitness w = support_contained(full, four);
  CHECK_FALSE(w.contained);
  CHECK(w.leakage > 0.0);
  REQUIRE(w.violating_string.has_value());
  CHECK(full.support.count(*w.violating_string) == 1);
  CHECK(four.support.count(*w.violating_string) == 0);
}

TEST_CASE("support_contained: two odd copies leak outside every even pairing") {
  // rho_3^{(x)2} versus rho_2^{(x)3} at d=2: every one of the 15 perfect
  // matchings of the 6 biparties fails containment with a concrete witness of
  // the shape (i,i,i,j,j,j), i != j.
  auto p = multi_copy_state(2, 3).labels.power(2);
  for (const auto& matching : perfect_matchings(6)) {
    auto q = pairing_product(2, matching);
    SupportWitness w = support_contained(p, q);
    CHECK_FALSE(w.contained);
    REQUIRE(w.violating_string.has_value());
    const LabelString& s = *w.violating_string;
    REQUIRE(s.size() == 6);
    CHECK(s[0] == s[1]);
    CHECK(s[1] == s[2]);
    CHECK(s[3] == s[4]);
    CHECK(s[4] == s[5]);
    CHECK(s[0] != s[3]);
    CHECK(p.support.count(s) == 1);
    CHECK(q.support.count(s) == 0);
  }
}

TEST_CASE("support_contained: dense-space witnesses") {
  auto psi00 = pure(bell_state({0, 0, 2}));
  auto psi01 = pure(bell_state({0, 1, 2}));
  auto full = uniform_full_mixture(2);

  SupportWitness ok = support_contained(
      psi00, make_density(partial_trace(*full.dense, {0, 1}).mat,
                          SubsystemLayout::bipartite(2)));
  CHECK(ok.contained);

  SupportWitness leak = support_contained(psi00, psi01);
  CHECK_FALSE(leak.contained);
  REQUIRE(leak.leaked_vector.has_value());
  // The leaked vector lies in rho's support but is annihilated by sigma's.
  CVector v = *leak.leaked_vector;
  CHECK(std::abs((v.adjoint() * psi00.mat * v)(0).real()) > 1e-6);
  CHECK(std::abs((v.adjoint() * psi01.mat * v)(0).real()) < 1e-10);
}

TEST_CASE("formal_count_bound: uniform support counting") {
  auto four = four_party_state(FourPartyDescriptor::standard(2)).labels;
  auto full = uniform_full_mixture(2).labels;
  CHECK(formal_count_bound(four, full) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(formal_count_bound(four, four) == doctest::Approx(0.0).epsilon(1e-12));

  // Two odd copies against three pairs: log2(64/16) = 2 bits at d=2.
  auto p = multi_copy_state(2, 3).labels.power(2);
  auto q = pairing_product(2, consecutive_pairing(6));
  CHECK(formal_count_bound(p, q) == doctest::Approx(2.0).epsilon(1e-12));

  // Non-uniform inputs are rejected.
  LabelDistribution skew;
  skew.d = 2;
  skew.num_biparties = 1;
  skew.support[{BellLabel{0, 0, 2}}] = 0.75;
  skew.support[{BellLabel{1, 0, 2}}] = 0.25;
  skew.validate();
  CHECK_THROWS_AS(formal_count_bound(skew, full), std::invalid_argument);
}

TEST_CASE("er_candidate_report: finite bounds and the flagged halving step") {
  // Four-party target against the full mixture: log2 d, no halving.
  auto r1 = er_candidate_report(StateDescriptor::four_party(3),
                                StateDescriptor::full_mixture(3));
  CHECK_FALSE(r1.bound_infinite);
  CHECK_FALSE(r1.halving_applied);
  CHECK(r1.bound_bits == doctest::Approx(kLog2_3).epsilon(1e-12));
  CHECK(r1.method == "label");

  // rho_4 against rho_2^{(x)2}: 2 bits at d=2.
  auto r2 = er_candidate_report(
      StateDescriptor::multi_copy(2, 4),
      StateDescriptor::pairing_product_of(2, consecutive_pairing(4)));
  CHECK_FALSE(r2.bound_infinite);
  CHECK(r2.bound_bits == doctest::Approx(2.0).epsilon(1e-12));

  // rho_3^{(x)2} against rho_2^{(x)3}: INFINITE with a witness; the formal
  // count is 2 bits raw, 1 bit after the labelled halving step.
  auto r3 = er_candidate_report(
      StateDescriptor::multi_copy(2, 3, 2),
      StateDescriptor::pairing_product_of(2, consecutive_pairing(6)), true);
  CHECK(r3.kl.infinite);
  CHECK(r3.bound_infinite);
  CHECK(r3.halving_applied);
  CHECK(r3.formal_count_raw_bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r3.formal_count_bits == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(r3.witness.has_value());
}

TEST_CASE("EntropyResult: INFINITE occurs exactly when support leaks") {
  EntropyResult fin = EntropyResult::finite(1.5, EntropyResult::Method::Label);
  CHECK_FALSE(fin.infinite);
  CHECK(fin.support_contained);

  EntropyResult inf = EntropyResult::unbounded(EntropyResult::Method::Dense);
  CHECK(inf.infinite);
  CHECK_FALSE(inf.support_contained);
}
