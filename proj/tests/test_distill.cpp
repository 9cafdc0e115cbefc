// Distillation protocols and the summary reports joining protocol yield,
// relative-entropy upper bound, formal counting bound, and closed-form target.

#include "doctest.h"

#include "qdistill/distill.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/serialize.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

using namespace qdistill;

namespace {

void check_exact_protocol(const DistillationReport& r, int survivors) {
  CHECK(r.protocol_exact);
  CHECK(r.branches_checked > 0);
  REQUIRE(r.surviving_biparties == survivors);
  REQUIRE(r.per_biparty_fidelity.size() == static_cast<std::size_t>(survivors));
  for (double f : r.per_biparty_fidelity) CHECK(f >= 1.0 - 1e-10);
}

}  // namespace

TEST_CASE("closed_form_value_bits") {
  CHECK(closed_form_value_bits(2, std::nullopt) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(closed_form_value_bits(3, std::nullopt) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-15));
  CHECK(closed_form_value_bits(5, 1) == 0.0);
  CHECK(closed_form_value_bits(5, 2) == 0.0);
  CHECK(closed_form_value_bits(2, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(closed_form_value_bits(3, 4) == doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(closed_form_value_bits(1, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_value_bits(2, 0), std::invalid_argument);
}

TEST_CASE("four-party distillation: one full pair per run") {
  for (int d = 2; d <= 3; ++d) {
    CAPTURE(d);
    auto r = distill_four_party(d, 11);
    CHECK(r.kind == "four_party");
    CHECK(r.d == d);
    check_exact_protocol(r, 1);
    CHECK(r.yield_bits == doctest::Approx(std::log2(double(d))).epsilon(1e-12));
    CHECK(r.lower_bound_bits == doctest::Approx(r.yield_bits).epsilon(1e-15));
    CHECK(r.closed_form_bits == doctest::Approx(std::log2(double(d))).epsilon(1e-12));
    CHECK(r.agreement);
    // The relative-entropy candidate (full mixture) closes the gap exactly.
    CHECK_FALSE(r.upper_infinite);
    CHECK(r.upper_bound_bits == doctest::Approx(std::log2(double(d))).epsilon(1e-12));
    CHECK(r.lower_bound_bits == doctest::Approx(r.upper_bound_bits).epsilon(1e-9));
  }
}

TEST_CASE("four-party distillation: both family kinds and fixed indices") {
  const int d = 3;
  for (auto family : {MesFamily::shift(d, 0), MesFamily::shift(d, 2), MesFamily::phase(d, 0),
                      MesFamily::phase(d, 1)}) {
    CAPTURE(family.describe());
    auto r = distill_four_party(d, family, 23);
    check_exact_protocol(r, 1);
    CHECK(r.family == family.describe());
    CHECK(r.yield_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(r.agreement);
  }

  CHECK_THROWS_AS(distill_four_party(3, MesFamily::phase(2, 0), 0), std::invalid_argument);
  CHECK_THROWS_AS(distill_four_party(1, MesFamily::phase(2, 0), 0), std::invalid_argument);
}

TEST_CASE("multi-copy distillation: n - 2 pairs from n copies") {
  // (d=2, n=3): one pair out of three copies.
  auto r23 = distill_multi_copy(2, 3, 5);
  CHECK(r23.kind == "multi_copy");
  check_exact_protocol(r23, 1);
  CHECK(r23.yield_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r23.closed_form_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r23.agreement);
  // Odd copy number: the paired candidate misses the target support, so the
  // KL leg is infinite and the halved counting bound carries the value.
  CHECK(r23.upper_infinite);
  CHECK(r23.halving_applied);
  CHECK(r23.formal_count_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r23.witness.has_value());

  // (d=2, n=4): even copy number closes the gap through the KL leg.
  auto r24 = distill_multi_copy(2, 4, 5);
  check_exact_protocol(r24, 2);
  CHECK(r24.yield_bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(r24.upper_infinite);
  CHECK(r24.upper_bound_bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r24.agreement);

  // (d=3, n=4): 2 log2(3) ebits.
  auto r34 = distill_multi_copy(3, 4, 5);
  check_exact_protocol(r34, 2);
  CHECK(r34.yield_bits == doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-12));
  CHECK_FALSE(r34.upper_infinite);
  CHECK(r34.upper_bound_bits == doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-12));
  CHECK(r34.agreement);
}

TEST_CASE("multi-copy distillation: one or two copies yield nothing") {
  for (int d : {2, 3, 5}) {
    for (int n : {1, 2}) {
      CAPTURE(d);
      CAPTURE(n);
      auto r = distill_multi_copy(d, n, 1);
      CHECK(r.yield_bits == 0.0);
      CHECK(r.lower_bound_bits == 0.0);
      CHECK(r.closed_form_bits == 0.0);
      CHECK(r.surviving_biparties == 0);
      CHECK(r.reason == "separable (n <= 2)");
      CHECK(r.agreement);
      // Candidate is the state itself: zero distance, zero counting bound.
      CHECK_FALSE(r.upper_infinite);
      CHECK(r.upper_bound_bits == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(r.formal_count_bits == doctest::Approx(0.0).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(distill_multi_copy(2, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(distill_multi_copy(1, 3, 0), std::invalid_argument);
}

TEST_CASE("ed_summary: dispatch and family override") {
  auto four = ed_summary(3, std::nullopt, 9);
  CHECK(four.kind == "four_party");
  CHECK(four.family == MesFamily::phase(3, 0).describe());

  auto shifted = ed_summary(3, std::nullopt, 9, MesFamily::shift(3, 1));
  CHECK(shifted.family == MesFamily::shift(3, 1).describe());
  CHECK(shifted.yield_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

  auto multi = ed_summary(2, 3, 9);
  CHECK(multi.kind == "multi_copy");
  CHECK(multi.n == 3);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  auto a = distill_four_party(3, 77);
  auto b = distill_four_party(3, 77);
  CHECK(distillation_report_json(a) == distillation_report_json(b));

  auto c = distill_multi_copy(2, 3, 123);
  auto d = distill_multi_copy(2, 3, 123);
  CHECK(distillation_report_json(c) == distillation_report_json(d));
  CHECK(distillation_csv_row(c) == distillation_csv_row(d));
}

TEST_CASE("lower and upper bounds bracket the closed form") {
  // Wherever both bounds are finite they must sandwich the closed-form value.
  for (const auto& r : {distill_four_party(2, 1), distill_four_party(3, 1),
                        distill_multi_copy(2, 4, 1), distill_multi_copy(3, 4, 1),
                        distill_multi_copy(2, 2, 1)}) {
    CAPTURE(r.kind);
    CAPTURE(r.d);
    CAPTURE(r.n);
    CHECK(r.lower_bound_bits <= r.closed_form_bits + 1e-9);
    if (!r.upper_infinite) {
      CHECK(r.upper_bound_bits >= r.closed_form_bits - 1e-9);
    } else {
      // Infinite KL leg: the counting bound takes over.
      CHECK(r.formal_count_bits >= r.closed_form_bits - 1e-9);
    }
  }
}
