#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "recage/holding_time.hpp"
#include "recage/series.hpp"

using recage::HoldingLaw;
using recage::TruncSeries;

namespace {

TruncSeries survival_series(const HoldingLaw& law, std::size_t bound) {
  TruncSeries s(bound);
  for (std::size_t k = 0; k <= bound; ++k) {
    s.set(k, law.q(static_cast<std::int64_t>(k)));
  }
  return s;
}

TruncSeries mass_series(const HoldingLaw& law, std::size_t bound) {
  TruncSeries s(bound);
  for (std::size_t k = 1; k <= bound; ++k) {
    s.set(k, law.f(static_cast<std::int64_t>(k)));
  }
  return s;
}

}  // namespace

TEST_CASE("ring operations on small polynomials") {
  TruncSeries a(4);
  a.set(0, 1.0);
  a.set(1, 2.0);
  TruncSeries b(4);
  b.set(0, 3.0);
  b.set(1, 1.0);
  const TruncSeries prod = a * b;  // (1+2z)(3+z) = 3 + 7z + 2z^2
  CHECK(prod[0] == 3.0);
  CHECK(prod[1] == 7.0);
  CHECK(prod[2] == 2.0);
  CHECK(prod[3] == 0.0);

  TruncSeries sum = a + b;
  CHECK(sum[0] == 4.0);
  CHECK(sum[1] == 3.0);
  sum -= b;
  CHECK(sum[0] == a[0]);
  CHECK(sum[1] == a[1]);

  TruncSeries scaled = a;
  scaled.scale(-2.0);
  CHECK(scaled[0] == -2.0);
  CHECK(scaled[1] == -4.0);

  const TruncSeries shifted = a.shifted(2);
  CHECK(shifted[0] == 0.0);
  CHECK(shifted[2] == 1.0);
  CHECK(shifted[3] == 2.0);
  CHECK(shifted.degree_bound() == a.degree_bound());
}

TEST_CASE("ring axioms hold coefficient-wise under truncation") {
  // three nonnegative series built from the holding-time tables exercise
  // associativity and distributivity on non-trivial convolutions
  const std::size_t bound = 32;
  const HoldingLaw law(static_cast<std::int64_t>(bound));
  const TruncSeries a = survival_series(law, bound);
  const TruncSeries b = mass_series(law, bound);
  TruncSeries c = survival_series(law, bound);
  c = c.shifted(2);
  c.scale(0.75);
  const TruncSeries left_assoc = (a * b) * c;
  const TruncSeries right_assoc = a * (b * c);
  const TruncSeries expanded = a * b + a * c;
  const TruncSeries factored = a * (b + c);
  for (std::size_t j = 0; j <= bound; ++j) {
    CHECK(left_assoc[j] == doctest::Approx(right_assoc[j]).epsilon(1e-12));
    CHECK(factored[j] == doctest::Approx(expanded[j]).epsilon(1e-12));
  }
}

TEST_CASE("products truncate instead of wrapping") {
  TruncSeries z(2);
  z.set(1, 1.0);
  const TruncSeries z2 = z * z;
  CHECK(z2[2] == 1.0);
  const TruncSeries z4 = z2 * z2;  // degree 4 falls outside the bound
  CHECK(z4[0] == 0.0);
  CHECK(z4[1] == 0.0);
  CHECK(z4[2] == 0.0);
}

TEST_CASE("mixed degree bounds pad to the larger operand") {
  TruncSeries small(1);
  small.set(0, 1.0);
  small.set(1, 1.0);
  TruncSeries big(5);
  big.set(4, 2.0);
  const TruncSeries prod = small * big;  // (1+z) * 2z^4 = 2z^4 + 2z^5
  CHECK(prod.degree_bound() == 5);
  CHECK(prod[4] == 2.0);
  CHECK(prod[5] == 2.0);
}

TEST_CASE("pow is repeated multiplication") {
  TruncSeries a(6);
  a.set(0, 1.0);
  a.set(1, 1.0);  // (1+z)^5: binomial row 1 5 10 10 5 1
  const TruncSeries p5 = recage::pow(a, 5);
  CHECK(p5[0] == 1.0);
  CHECK(p5[1] == 5.0);
  CHECK(p5[2] == 10.0);
  CHECK(p5[3] == 10.0);
  CHECK(p5[4] == 5.0);
  CHECK(p5[5] == 1.0);
  const TruncSeries p0 = recage::pow(a, 0);
  CHECK(p0[0] == 1.0);
  CHECK(p0[1] == 0.0);
}

TEST_CASE("renewal reciprocal inverts one minus the mass series") {
  const std::size_t bound = 128;
  HoldingLaw law(static_cast<std::int64_t>(bound));
  const TruncSeries f = mass_series(law, bound);
  const TruncSeries q = survival_series(law, bound);

  // 1/(1 - f~) = q~ coefficient by coefficient
  const TruncSeries recip = recage::recip_one_minus(f);
  for (std::size_t j = 0; j <= bound; ++j) {
    CHECK(recip[j] == doctest::Approx(q[j]).epsilon(1e-13));
  }

  // and the product (1 - f~) q~ telescopes back to 1
  TruncSeries one_minus_f = TruncSeries::one(bound);
  one_minus_f -= f;
  const TruncSeries prod = one_minus_f * q;
  CHECK(prod[0] == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t j = 1; j <= bound; ++j) {
    CHECK(std::abs(prod[j]) < 1e-15);
  }
}

TEST_CASE("reciprocal requires a vanishing constant term") {
  TruncSeries h(3);
  h.set(0, 0.5);
  CHECK_THROWS_AS(recage::recip_one_minus(h), std::invalid_argument);
}

TEST_CASE("set rejects indices beyond the bound") {
  TruncSeries s(3);
  CHECK_THROWS_AS(s.set(4, 1.0), std::out_of_range);
  CHECK(s[7] == 0.0);  // reads beyond the bound are zero, not errors
}
