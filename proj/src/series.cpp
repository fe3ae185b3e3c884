#include "recage/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace recage {

namespace {

// Index of the first/last nonzero coefficient; {size, 0} when all zero.
std::pair<std::size_t, std::size_t> nonzero_range(std::span<const double> c) {
  std::size_t lo = 0;
  while (lo < c.size() && c[lo] == 0.0) ++lo;
  if (lo == c.size()) return {c.size(), 0};
  std::size_t hi = c.size() - 1;
  while (c[hi] == 0.0) --hi;
  return {lo, hi};
}

}  // namespace

void TruncSeries::set(std::size_t j, double v) {
  if (j >= c_.size())
    throw std::out_of_range("TruncSeries::set: degree beyond bound");
  c_[j] = v;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
  return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] -= o.c_[j];
  return *this;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  const std::size_t bound = std::max(a.degree_bound(), b.degree_bound());
  TruncSeries out(bound);
  const auto [alo, ahi] = nonzero_range(a.c_);
  const auto [blo, bhi] = nonzero_range(b.c_);
  if (alo == a.c_.size() || blo == b.c_.size()) return out;
  for (std::size_t i = alo; i <= ahi && i <= bound; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const std::size_t jmax = std::min(bhi, bound - i);
    for (std::size_t j = blo; j <= jmax; ++j) out.c_[i + j] += ai * b.c_[j];
  }
  return out;
}

TruncSeries& TruncSeries::scale(double factor) {
  for (double& v : c_) v *= factor;
  return *this;
}

TruncSeries TruncSeries::shifted(std::size_t amount) const {
  TruncSeries out(degree_bound());
  for (std::size_t j = amount; j < c_.size(); ++j)
    out.c_[j] = c_[j - amount];
  return out;
}

TruncSeries recip_one_minus(const TruncSeries& h) {
  if (h[0] != 0.0)
    throw std::invalid_argument(
        "recip_one_minus: constant term of h must be zero");
  const std::size_t bound = h.degree_bound();
  const auto [lo, hi] = nonzero_range(h.coeffs());
  TruncSeries out(bound);
  out.set(0, 1.0);
  if (lo > bound) return out;  // h == 0
  auto b = h.coeffs();
  for (std::size_t d = 1; d <= bound; ++d) {
    double acc = 0.0;
    const std::size_t imax = std::min(hi, d);
    for (std::size_t i = lo; i <= imax; ++i) acc += b[i] * out[d - i];
    out.set(d, acc);
  }
  return out;
}

TruncSeries pow(const TruncSeries& a, std::uint64_t e) {
  TruncSeries result = TruncSeries::one(a.degree_bound());
  if (e == 0) return result;
  TruncSeries base = a;
  for (;;) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e == 0) break;
    base = base * base;
  }
  return result;
}

}  // namespace recage
