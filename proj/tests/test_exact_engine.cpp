#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "recage/errors.hpp"
#include "recage/exact_engine.hpp"
#include "recage/holding_time.hpp"
#include "recage/oracle.hpp"
#include "recage/rational.hpp"

using recage::AgeVariant;
using recage::Rational;
namespace engine = recage::exact_engine;
namespace oracle = recage::oracle;

namespace {
constexpr AgeVariant kVariants[] = {AgeVariant::current_age,
                                    AgeVariant::straddling_interval,
                                    AgeVariant::completed_only};
}

TEST_CASE("rank probabilities match the exact enumeration") {
  const std::int64_t n_max = 14;
  for (const auto variant : kVariants) {
    for (int k = 1; k <= 4; ++k) {
      const auto table = engine::p_exact(variant, k, n_max);
      REQUIRE(table.values.size() == static_cast<std::size_t>(n_max) + 1);
      for (std::int64_t n = 0; n <= n_max; ++n) {
        const double ref =
            oracle::oracle_p<Rational>(variant, k, n).to_double();
        CHECK(std::abs(table.values[static_cast<std::size_t>(n)] - ref) <=
              1e-12);
      }
    }
  }
}

TEST_CASE("expected ranked ages match the exact enumeration") {
  const std::int64_t n_max = 14;
  for (const auto variant : kVariants) {
    for (int k = 1; k <= 4; ++k) {
      if (variant == AgeVariant::straddling_interval && k == 1) continue;
      const auto table = engine::el_exact(variant, k, n_max);
      for (std::int64_t n = 0; n <= n_max; ++n) {
        const double ref =
            oracle::oracle_EL<Rational>(variant, k, n).to_double();
        CHECK(std::abs(table.values[static_cast<std::size_t>(n)] - ref) <=
              1e-11 * (1.0 + std::abs(ref)));
      }
    }
  }
}

TEST_CASE("small tables carry the expected exact values") {
  const auto p11 = engine::p_exact(AgeVariant::current_age, 1, 2);
  CHECK(p11.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p11.values[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p11.values[2] == doctest::Approx(0.625).epsilon(1e-15));

  const auto p13 = engine::p_exact(AgeVariant::completed_only, 1, 2);
  CHECK(p13.values[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p13.values[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p13.values[2] == doctest::Approx(0.625).epsilon(1e-15));

  const auto p12 = engine::p_exact(AgeVariant::straddling_interval, 1, 2);
  CHECK(p12.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p12.values[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p12.values[2] == doctest::Approx(0.9375).epsilon(1e-15));
}

TEST_CASE("rank probabilities are normalized across achievable ranks") {
  const std::int64_t n_max = 40;
  for (const auto variant :
       {AgeVariant::current_age, AgeVariant::straddling_interval}) {
    std::vector<engine::ExactTable> tables;
    for (int k = 1; k <= static_cast<int>(n_max) + 1; ++k) {
      tables.push_back(engine::p_exact(variant, k, n_max));
    }
    for (std::int64_t n = 0; n <= n_max; ++n) {
      double total = 0.0;
      for (std::int64_t k = 1; k <= n + 1; ++k) {
        total += tables[static_cast<std::size_t>(k - 1)]
                     .values[static_cast<std::size_t>(n)];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // completed-only mass accounts for the empty list separately
  recage::HoldingLaw law(n_max);
  std::vector<engine::ExactTable> tables;
  for (int k = 1; k <= static_cast<int>(n_max) + 1; ++k) {
    tables.push_back(engine::p_exact(AgeVariant::completed_only, k, n_max));
  }
  for (std::int64_t n = 0; n <= n_max; ++n) {
    double total = law.q(n);
    for (std::int64_t k = 1; k <= n + 1; ++k) {
      total += tables[static_cast<std::size_t>(k - 1)]
                   .values[static_cast<std::size_t>(n)];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("every extracted coefficient is nonnegative") {
  // the underlying series are probability convolutions, so any negative
  // entry would flag a cancellation bug rather than round-off
  for (const auto variant :
       {AgeVariant::current_age, AgeVariant::straddling_interval,
        AgeVariant::completed_only}) {
    for (int k = 1; k <= 4; ++k) {
      const auto p = engine::p_exact(variant, k, 40);
      for (const double v : p.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
      }
      if (variant == AgeVariant::straddling_interval && k == 1) continue;
      const auto el = engine::el_exact(variant, k, 40);
      for (const double v : el.values) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("current-age expectations are running sums of rank probabilities") {
  const std::int64_t n_max = 512;
  for (int k : {1, 2}) {
    const auto p = engine::p_exact(AgeVariant::current_age, k, n_max);
    const auto el = engine::el_exact(AgeVariant::current_age, k, n_max);
    double acc = 0.0;
    CHECK(el.values[0] == 0.0);
    for (std::int64_t n = 1; n <= n_max; ++n) {
      acc += p.values[static_cast<std::size_t>(n - 1)];
      CHECK(std::abs(el.values[static_cast<std::size_t>(n)] - acc) <=
            1e-11 * (1.0 + acc));
    }
  }
}

TEST_CASE("ranked age expectations respect the harmonic bound") {
  const std::int64_t n_max = 96;
  for (const auto variant : kVariants) {
    for (int k = 2; k <= 4; ++k) {
      const auto el = engine::el_exact(variant, k, n_max);
      for (std::int64_t n = 0; n <= n_max; ++n) {
        CHECK(el.values[static_cast<std::size_t>(n)] <=
              static_cast<double>(n) / (k - 1) + 1e-12);
      }
    }
  }
}

TEST_CASE("straddling rank sums are subadditive over the horizon") {
  const std::int64_t n_max = 64;
  for (int k : {2, 3, 4}) {
    std::vector<double> partial(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int j = 2; j <= k; ++j) {
      const auto el =
          engine::el_exact(AgeVariant::straddling_interval, j, n_max);
      for (std::size_t n = 0; n < partial.size(); ++n) {
        partial[n] += el.values[n];
      }
    }
    for (std::int64_t a = 0; a <= n_max; ++a) {
      for (std::int64_t b = a; a + b <= n_max; ++b) {
        CHECK(partial[static_cast<std::size_t>(a + b)] <=
              partial[static_cast<std::size_t>(a)] +
                  partial[static_cast<std::size_t>(b)] + 1e-9);
      }
    }
  }
}

TEST_CASE("divergent and out-of-budget requests are rejected") {
  CHECK_THROWS_AS(engine::el_exact(AgeVariant::straddling_interval, 1, 8),
                  recage::DivergentQuantity);
  CHECK_THROWS_AS(engine::p_exact(AgeVariant::current_age, 1, 3000),
                  recage::ResourceCeiling);
  CHECK_THROWS_AS(engine::p_exact(AgeVariant::current_age, 1, 64, 32),
                  recage::ResourceCeiling);
  CHECK_NOTHROW(engine::p_exact(AgeVariant::current_age, 1, 64, 64));
  CHECK_THROWS_AS(engine::p_exact(AgeVariant::current_age, 0, 8),
                  std::domain_error);
  CHECK_THROWS_AS(engine::p_exact(AgeVariant::current_age, 1, -1),
                  std::domain_error);
}

TEST_CASE("transform sums track the tables") {
  const auto table = engine::p_exact(AgeVariant::current_age, 1, 512);
  const auto diag = recage::exact_engine::laplace_diag(table, 0.1);
  CHECK_FALSE(diag.truncated);
  double direct = 0.0;
  for (std::size_t n = 0; n < table.values.size(); ++n) {
    direct += table.values[n] * std::exp(-0.1 * static_cast<double>(n));
  }
  CHECK(diag.sum == doctest::Approx(direct).epsilon(1e-13));
  // leading order: sum ~ p_1 / s near s = 0
  CHECK(diag.sum * 0.1 == doctest::Approx(0.62651).epsilon(0.2));

  const auto shallow = recage::exact_engine::laplace_diag(table, 1e-5);
  CHECK(shallow.truncated);
  CHECK_THROWS_AS(recage::exact_engine::laplace_diag(table, 0.0),
                  std::domain_error);
}
