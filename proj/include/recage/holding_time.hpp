#pragma once

#include <cstdint>
#include <shared_mutex>
#include <vector>

namespace recage {

// Law of the spacing between successive running maxima of a random walk with
// symmetric, continuous steps.  The survival function and mass function
//
//   q(k) = C(2k,k)/4^k = P(no new maximum through step k),
//   f(k) = C(2k-2,k-1)/(2^(2k-1) k) = P(spacing = k) = q(k-1) - q(k),
//
// are distribution-free across such walks.  q is generated by the stable
// multiplicative recursion q(k) = q(k-1) * (2k-1)/(2k), which keeps the
// relative error at O(k*eps) and cannot overflow; f and the cumulative sums
// are differences/partial sums of q, so nothing here cancels badly.
//
// Tables are safe to share across threads.  sample_age extends the table
// on demand under an exclusive lock (readers hold a shared lock), so
// concurrent samplers always observe a consistent, exact law.
class HoldingLaw {
 public:
  explicit HoldingLaw(std::int64_t max_k);

  std::int64_t max_k() const;
  double q(std::int64_t k) const;      // k in [0, max_k]
  double f(std::int64_t k) const;      // k in [0, max_k]; f(0) is 0
  double cum_f(std::int64_t k) const;  // sum_{j<=k} f(j), k in [0, max_k]

  // Inverse CDF: the smallest k >= 1 with q(k) < draw, for draw in (0,1).
  // When the draw falls at or below q(max_k) the table is doubled in place
  // (exact recursion) up to extension_limit; draws deeper in the tail than
  // that are resolved by bisection on the closed-form q evaluated through
  // lgamma, accurate to ~1e-14 relative (the table stays the exact path).
  std::int64_t sample_age(double draw);

  // Same inverse CDF but with all values beyond `cap` collapsed onto cap+1.
  // Requires max_k >= cap; never grows the table, so it is lock-free for
  // concurrent use once the law is built.
  std::int64_t sample_age_capped(double draw, std::int64_t cap) const;

  void set_extension_limit(std::int64_t limit);

  // C(2k,k)/4^k through lgamma; used only past the table.
  static double q_closed_form(std::int64_t k);

 private:
  void build_to(std::int64_t new_max);  // caller holds the exclusive lock
  std::int64_t search_table(double draw) const;

  mutable std::shared_mutex mutex_;
  std::vector<double> q_;      // q_[k], k = 0..max_k
  std::vector<double> f_;     // f_[k], k = 0..max_k, f_[0] = 0
  std::vector<double> cum_;   // cum_[k] = sum_{j<=k} f_[j]
  std::int64_t extension_limit_ = std::int64_t{1} << 22;
};

// Closed forms of the generating functions sum q(k) z^k = (1-z)^{-1/2} and
// sum f(k) z^k = 1 - (1-z)^{1/2}; z must lie in [0,1).
double gen_fn_q(double z);
double gen_fn_f(double z);

}  // namespace recage
