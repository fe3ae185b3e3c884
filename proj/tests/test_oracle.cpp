#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "recage/errors.hpp"
#include "recage/oracle.hpp"
#include "recage/rational.hpp"

using recage::AgeVariant;
using recage::Rational;
namespace oracle = recage::oracle;

namespace {

// Exact references worked out by listing every composition by hand at n = 2:
// weights are f(1) = 1/2, f(2) = 1/8, q(0) = 1, q(1) = 1/2, q(2) = 3/8.
const Rational kP1CurrentAgeAt2(5, 8);
const Rational kP1StraddlingAt2(15, 16);
const Rational kP2StraddlingAt2(1, 16);
const Rational kEL2StraddlingAt2(11, 16);
const Rational kP1CompletedAt1(1, 2);
const Rational kP1CompletedAt2(5, 8);

}  // namespace

TEST_CASE("hand-enumerated values at tiny horizons") {
  CHECK(oracle::oracle_p<Rational>(AgeVariant::current_age, 1, 2) ==
        kP1CurrentAgeAt2);
  CHECK(oracle::oracle_p<Rational>(AgeVariant::straddling_interval, 1, 2) ==
        kP1StraddlingAt2);
  CHECK(oracle::oracle_p<Rational>(AgeVariant::straddling_interval, 2, 2) ==
        kP2StraddlingAt2);
  CHECK(oracle::oracle_EL<Rational>(AgeVariant::straddling_interval, 2, 2) ==
        kEL2StraddlingAt2);
  CHECK(oracle::oracle_p<Rational>(AgeVariant::completed_only, 1, 1) ==
        kP1CompletedAt1);
  CHECK(oracle::oracle_p<Rational>(AgeVariant::completed_only, 1, 2) ==
        kP1CompletedAt2);

  CHECK(oracle::oracle_EL<Rational>(AgeVariant::current_age, 1, 1) ==
        Rational(1));
  CHECK(oracle::oracle_EL<Rational>(AgeVariant::current_age, 1, 2) ==
        Rational(3, 2));
  CHECK(oracle::oracle_EL<Rational>(AgeVariant::current_age, 2, 2) ==
        Rational(1, 2));
  CHECK(oracle::oracle_EL<Rational>(AgeVariant::completed_only, 1, 2) ==
        Rational(3, 4));
  CHECK(oracle::oracle_EL<Rational>(AgeVariant::completed_only, 2, 2) ==
        Rational(1, 4));

  // horizon 0: the current-age list is (0), the straddling list is the
  // full first interval, the completed list is empty
  CHECK(oracle::oracle_p<Rational>(AgeVariant::current_age, 1, 0) ==
        Rational(1));
  CHECK(oracle::oracle_p<Rational>(AgeVariant::straddling_interval, 1, 0) ==
        Rational(1));
  CHECK(oracle::oracle_p<Rational>(AgeVariant::completed_only, 1, 0) ==
        Rational(0));
}

TEST_CASE("enumeration weights form a probability law") {
  for (const auto variant :
       {AgeVariant::current_age, AgeVariant::straddling_interval,
        AgeVariant::completed_only}) {
    for (std::int64_t n = 0; n <= 8; ++n) {
      const auto configs = oracle::enumerate<Rational>(variant, n);
      Rational total(0);
      for (const auto& cfg : configs) total += cfg.weight;
      CHECK(total == Rational(1));
    }
  }
  // current-age lists always sum to the horizon
  for (std::int64_t n = 0; n <= 8; ++n) {
    for (const auto& cfg :
         oracle::enumerate<Rational>(AgeVariant::current_age, n)) {
      std::int64_t s = 0;
      for (auto a : cfg.ages) s += a;
      CHECK(s == n);
    }
  }
}

TEST_CASE("rank probabilities sum to one over achievable ranks") {
  for (std::int64_t n = 0; n <= 8; ++n) {
    for (const auto variant :
         {AgeVariant::current_age, AgeVariant::straddling_interval}) {
      Rational total(0);
      for (int k = 1; k <= n + 1; ++k) {
        total += oracle::oracle_p<Rational>(variant, k, n);
      }
      CHECK(total == Rational(1));
    }
    // completed-only lists are empty with the survival probability q(n)
    Rational total3(0);
    for (int k = 1; k <= n + 1; ++k) {
      total3 += oracle::oracle_p<Rational>(AgeVariant::completed_only, k, n);
    }
    const auto law = oracle::law_tables<Rational>(n);
    CHECK(total3 + law.q[static_cast<std::size_t>(n)] == Rational(1));
  }
}

TEST_CASE("completed ages sum to half the horizon in expectation") {
  for (std::int64_t n = 1; n <= 10; ++n) {
    Rational total(0);
    for (int k = 1; k <= n; ++k) {
      total += oracle::oracle_EL<Rational>(AgeVariant::completed_only, k, n);
    }
    CHECK(total == Rational(n, 2));
  }
}

TEST_CASE("double and rational enumerations agree") {
  for (const auto variant :
       {AgeVariant::current_age, AgeVariant::straddling_interval,
        AgeVariant::completed_only}) {
    for (std::int64_t n = 0; n <= 10; ++n) {
      for (int k = 1; k <= 4; ++k) {
        const double pd = oracle::oracle_p<double>(variant, k, n);
        const double pr =
            oracle::oracle_p<Rational>(variant, k, n).to_double();
        CHECK(std::abs(pd - pr) <= 1e-14);
        if (variant == AgeVariant::straddling_interval && k == 1) continue;
        const double ed = oracle::oracle_EL<double>(variant, k, n);
        const double er =
            oracle::oracle_EL<Rational>(variant, k, n).to_double();
        CHECK(std::abs(ed - er) <= 1e-14 * (1.0 + std::abs(er)));
      }
    }
  }
}

TEST_CASE("straddling maximum has no finite mean") {
  CHECK_THROWS_AS(
      oracle::oracle_EL<double>(AgeVariant::straddling_interval, 1, 4),
      recage::DivergentQuantity);
  CHECK_THROWS_AS(
      oracle::oracle_EL<Rational>(AgeVariant::straddling_interval, 1, 0),
      recage::DivergentQuantity);
}

TEST_CASE("horizon guards") {
  CHECK_THROWS_AS(oracle::oracle_p<double>(AgeVariant::current_age, 1, 21),
                  std::out_of_range);
  CHECK_THROWS_AS(oracle::oracle_p<Rational>(AgeVariant::current_age, 1, 15),
                  std::out_of_range);
  CHECK_THROWS_AS(oracle::oracle_p<double>(AgeVariant::current_age, 1, -1),
                  std::domain_error);
  CHECK_THROWS_AS(oracle::oracle_p<double>(AgeVariant::current_age, 0, 3),
                  std::domain_error);
}

TEST_CASE("record-age partition law at small horizons") {
  const auto law2 = oracle::partition_law_beta1_exact(2);
  REQUIRE(law2.size() == 2);
  CHECK(law2.at({2}) == Rational(1, 2));
  CHECK(law2.at({1, 1}) == Rational(1, 2));

  const auto law1 = oracle::partition_law_beta1_exact(1);
  REQUIRE(law1.size() == 1);
  CHECK(law1.at({1}) == Rational(1));

  // probabilities over partitions of n sum to one
  for (std::int64_t n = 1; n <= 8; ++n) {
    const auto law = oracle::partition_law_beta1_exact(n);
    Rational total(0);
    for (const auto& [part, prob] : law) {
      total += prob;
      CHECK(std::accumulate(part.begin(), part.end(), std::int64_t{0}) == n);
    }
    CHECK(total == Rational(1));
  }
}

TEST_CASE("total variation distance") {
  oracle::PartitionDist a{{{2}, 0.5}, {{1, 1}, 0.5}};
  oracle::PartitionDist b{{{2}, 0.25}, {{1, 1}, 0.75}};
  CHECK(oracle::total_variation(a, a) == 0.0);
  CHECK(oracle::total_variation(a, b) == doctest::Approx(0.25));
  oracle::PartitionDist c{{{3}, 1.0}};
  CHECK(oracle::total_variation(a, c) == doctest::Approx(1.0));
}
