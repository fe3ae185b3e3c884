#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace recage {

// Formal power series over double truncated at a fixed degree bound N: only
// coefficients of z^0..z^N are stored and every operation is an exact
// truncation (coefficient j of a product reads inputs of degree <= j only).
// Mixed-bound operands are zero-padded to the larger bound, never cut down.
class TruncSeries {
 public:
  explicit TruncSeries(std::size_t degree_bound)
      : c_(degree_bound + 1, 0.0) {}

  static TruncSeries one(std::size_t degree_bound) {
    TruncSeries s(degree_bound);
    s.c_[0] = 1.0;
    return s;
  }

  std::size_t degree_bound() const { return c_.size() - 1; }

  double operator[](std::size_t j) const {
    return j < c_.size() ? c_[j] : 0.0;
  }
  void set(std::size_t j, double v);
  std::span<const double> coeffs() const { return c_; }

  TruncSeries& operator+=(const TruncSeries& o);
  TruncSeries& operator-=(const TruncSeries& o);
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) {
    a += b;
    return a;
  }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) {
    a -= b;
    return a;
  }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);

  TruncSeries& scale(double factor);
  // Multiplication by z^amount (coefficients slide up; top ones fall off).
  TruncSeries shifted(std::size_t amount) const;

 private:
  std::vector<double> c_;
};

// 1/(1 - h) for a series with h[0] == 0 (rejected otherwise).  Uses the
// renewal recursion b[0] = 1, b[d] = sum_{i=1..d} h[i] b[d-i], which is
// cancellation-free when h is nonnegative.
TruncSeries recip_one_minus(const TruncSeries& h);

// a^e by repeated squaring; e == 0 gives the multiplicative identity.
TruncSeries pow(const TruncSeries& a, std::uint64_t e);

}  // namespace recage
