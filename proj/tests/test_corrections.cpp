#include <doctest.h>

#include <random>

#include "stabaudit/corrections.hpp"
#include "stabaudit/errors.hpp"

using namespace stabaudit;

TEST_CASE("bonferroni threshold values") {
  CHECK(bonferroni_threshold(0.05, 20) == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(bonferroni_threshold(0.05, 99) == doctest::Approx(0.05 / 99.0).epsilon(1e-15));
  CHECK(bonferroni_threshold(0.05, 1) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("bonferroni threshold input validation") {
  CHECK_THROWS_AS(bonferroni_threshold(0.0, 5), AuditError);
  CHECK_THROWS_AS(bonferroni_threshold(1.0, 5), AuditError);
  CHECK_THROWS_AS(bonferroni_threshold(-0.2, 5), AuditError);
  try {
    bonferroni_threshold(0.05, 0);
    FAIL("expected ZeroTests");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::ZeroTests);
  }
}

TEST_CASE("benjamini-hochberg single test reduces to the nominal alpha") {
  const auto r = benjamini_hochberg({0.04}, 0.05);
  REQUIRE(r.per_test.size() == 1);
  CHECK(r.per_test[0].threshold == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(r.per_test[0].reject);
}

TEST_CASE("benjamini-hochberg step-up on the worked example") {
  // hand-applied step-up: thresholds 0.0125 / 0.025 / 0.0375 / 0.05;
  // rank 4 (0.9) fails, rank 3 (0.03 <= 0.0375) passes, so ranks 1..3 reject
  const auto r = benjamini_hochberg({0.001, 0.02, 0.03, 0.9}, 0.05);
  REQUIRE(r.per_test.size() == 4);
  CHECK(r.per_test[0].threshold == doctest::Approx(0.0125).epsilon(1e-12));
  CHECK(r.per_test[1].threshold == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(r.per_test[2].threshold == doctest::Approx(0.0375).epsilon(1e-12));
  CHECK(r.per_test[3].threshold == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(r.per_test[0].reject);
  CHECK(r.per_test[1].reject);
  CHECK(r.per_test[2].reject);
  CHECK_FALSE(r.per_test[3].reject);
  CHECK(r.rejections() == 3);
  CHECK(r.operative_alpha == doctest::Approx(0.0375).epsilon(1e-12));
}

TEST_CASE("benjamini-hochberg reports per-test entries in input order") {
  const auto r = benjamini_hochberg({0.9, 0.001}, 0.05);
  CHECK(r.per_test[0].p_value == 0.9);
  CHECK(r.per_test[0].rank == 2);
  CHECK(r.per_test[1].p_value == 0.001);
  CHECK(r.per_test[1].rank == 1);
}

TEST_CASE("benjamini-hochberg ties share decisions") {
  const auto r = benjamini_hochberg({0.05, 0.05}, 0.05);
  // p_(2) = 0.05 <= (2/2)*0.05, so the tied pair rejects together
  CHECK(r.per_test[0].reject);
  CHECK(r.per_test[1].reject);
}

TEST_CASE("correction input validation") {
  CHECK_THROWS_AS(benjamini_hochberg({}, 0.05), AuditError);
  CHECK_THROWS_AS(benjamini_hochberg({0.5}, 1.5), AuditError);
  try {
    benjamini_hochberg({0.5, 1.2}, 0.05);
    FAIL("expected InvalidPValue");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::InvalidPValue);
  }
}

namespace {

std::vector<double> random_p_family(std::mt19937_64& rng, std::size_t max_m) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(size_dist(rng));
  for (auto& v : p) {
    const double u = unit(rng);
    // skew toward small p so rejection regions are exercised
    v = u < 0.3 ? unit(rng) * 0.05 : unit(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("property: every bonferroni rejection is a BH rejection") {
  std::mt19937_64 rng(160693);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_p_family(rng, 100);
    const auto bon = bonferroni_correction(p, 0.05);
    const auto bh = benjamini_hochberg(p, 0.05);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (bon.per_test[i].reject) CHECK(bh.per_test[i].reject);
    }
  }
}

TEST_CASE("property: bonferroni threshold <= BH thresholds <= alpha") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_p_family(rng, 60);
    const double alpha = 0.05;
    const double bon = bonferroni_threshold(alpha, p.size());
    const auto bh = benjamini_hochberg(p, alpha);
    for (const auto& entry : bh.per_test) {
      CHECK(entry.threshold >= bon - 1e-18);
      CHECK(entry.threshold <= alpha + 1e-18);
    }
  }
}

TEST_CASE("property: BH decisions are monotone in alpha") {
  std::mt19937_64 rng(42424242);
  const double alphas[] = {0.01, 0.05, 0.1};
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_p_family(rng, 80);
    for (std::size_t a = 0; a + 1 < std::size(alphas); ++a) {
      const auto lo = benjamini_hochberg(p, alphas[a]);
      const auto hi = benjamini_hochberg(p, alphas[a + 1]);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (lo.per_test[i].reject) CHECK(hi.per_test[i].reject);
      }
    }
  }
}

TEST_CASE("a tiny p in a family of 99 is significant under both corrections") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> large(0.2, 1.0);
  std::vector<double> p(99);
  for (auto& v : p) v = large(rng);
  p[42] = 1e-7;
  const auto bon = bonferroni_correction(p, 0.05);
  const auto bh = benjamini_hochberg(p, 0.05);
  CHECK(bon.operative_alpha == doctest::Approx(0.05 / 99.0).epsilon(1e-15));
  CHECK(bon.per_test[42].reject);
  CHECK(bh.per_test[42].reject);
}
