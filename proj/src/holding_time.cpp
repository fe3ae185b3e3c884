#include "recage/holding_time.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace recage {

HoldingLaw::HoldingLaw(std::int64_t max_k) {
  if (max_k < 0) throw std::invalid_argument("HoldingLaw: max_k must be >= 0");
  q_.reserve(static_cast<std::size_t>(max_k) + 1);
  f_.reserve(static_cast<std::size_t>(max_k) + 1);
  cum_.reserve(static_cast<std::size_t>(max_k) + 1);
  q_.push_back(1.0);
  f_.push_back(0.0);
  cum_.push_back(0.0);
  build_to(max_k);
}

void HoldingLaw::build_to(std::int64_t new_max) {
  for (std::int64_t k = static_cast<std::int64_t>(q_.size()); k <= new_max;
       ++k) {
    const double qk = q_.back() * (2.0 * k - 1.0) / (2.0 * k);
    f_.push_back(q_.back() - qk);
    cum_.push_back(cum_.back() + f_.back());
    q_.push_back(qk);
  }
}

std::int64_t HoldingLaw::max_k() const {
  std::shared_lock lock(mutex_);
  return static_cast<std::int64_t>(q_.size()) - 1;
}

double HoldingLaw::q(std::int64_t k) const {
  std::shared_lock lock(mutex_);
  if (k < 0 || k >= static_cast<std::int64_t>(q_.size()))
    throw std::out_of_range("HoldingLaw::q: index outside table");
  return q_[static_cast<std::size_t>(k)];
}

double HoldingLaw::f(std::int64_t k) const {
  std::shared_lock lock(mutex_);
  if (k < 0 || k >= static_cast<std::int64_t>(f_.size()))
    throw std::out_of_range("HoldingLaw::f: index outside table");
  return f_[static_cast<std::size_t>(k)];
}

double HoldingLaw::cum_f(std::int64_t k) const {
  std::shared_lock lock(mutex_);
  if (k < 0 || k >= static_cast<std::int64_t>(cum_.size()))
    throw std::out_of_range("HoldingLaw::cum_f: index outside table");
  return cum_[static_cast<std::size_t>(k)];
}

void HoldingLaw::set_extension_limit(std::int64_t limit) {
  std::unique_lock lock(mutex_);
  if (limit < 1) throw std::invalid_argument("extension_limit must be >= 1");
  extension_limit_ = limit;
}

double HoldingLaw::q_closed_form(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("q_closed_form: k must be >= 0");
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  return std::exp(std::lgamma(2.0 * kd + 1.0) - 2.0 * std::lgamma(kd + 1.0) -
                  2.0 * kd * std::log(2.0));
}

// First index with q[idx] < draw; q_ is strictly decreasing from q_[0] = 1.
std::int64_t HoldingLaw::search_table(double draw) const {
  const auto it = std::partition_point(
      q_.begin(), q_.end(), [draw](double qk) { return qk >= draw; });
  return static_cast<std::int64_t>(it - q_.begin());
}

std::int64_t HoldingLaw::sample_age(double draw) {
  if (!(draw > 0.0 && draw < 1.0))
    throw std::domain_error("sample_age: draw must lie in (0,1)");
  {
    std::shared_lock lock(mutex_);
    if (draw > q_.back()) return search_table(draw);
  }
  std::unique_lock lock(mutex_);
  while (draw <= q_.back() &&
         static_cast<std::int64_t>(q_.size()) - 1 < extension_limit_) {
    build_to(std::min<std::int64_t>(
        2 * (static_cast<std::int64_t>(q_.size()) - 1), extension_limit_));
  }
  if (draw > q_.back()) return search_table(draw);
  // Tail past the table: locate the boundary on the closed form.  The walk
  // statistics downstream treat all values this deep identically, so the
  // ~1e-14 relative error of the lgamma evaluation can at worst move the
  // boundary by one when the draw lands within that sliver of a q value.
  std::int64_t lo = static_cast<std::int64_t>(q_.size()) - 1;  // q(lo) >= draw
  std::int64_t hi = lo;
  while (q_closed_form(hi) >= draw) {
    if (hi > (std::int64_t{1} << 61)) break;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (q_closed_form(mid) >= draw ? lo : hi) = mid;
  }
  return hi;
}

std::int64_t HoldingLaw::sample_age_capped(double draw,
                                           std::int64_t cap) const {
  if (!(draw > 0.0 && draw < 1.0))
    throw std::domain_error("sample_age_capped: draw must lie in (0,1)");
  std::shared_lock lock(mutex_);
  if (cap < 1 || cap >= static_cast<std::int64_t>(q_.size()))
    throw std::out_of_range("sample_age_capped: cap outside table");
  if (draw <= q_[static_cast<std::size_t>(cap)]) return cap + 1;
  return search_table(draw);
}

double gen_fn_q(double z) {
  if (!(z >= 0.0 && z < 1.0))
    throw std::domain_error("gen_fn_q: z must lie in [0,1)");
  return 1.0 / std::sqrt(1.0 - z);
}

double gen_fn_f(double z) {
  if (!(z >= 0.0 && z < 1.0))
    throw std::domain_error("gen_fn_f: z must lie in [0,1)");
  return 1.0 - std::sqrt(1.0 - z);
}

}  // namespace recage
