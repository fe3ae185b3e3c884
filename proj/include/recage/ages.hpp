#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace recage {

// The three ways the sequence of record ages at horizon n can be closed off.
// With record times t_1 = 0 < t_2 < ... and spacings tau_i = t_{i+1} - t_i,
// the walk at time n sits inside interval m (t_m <= n < t_{m+1}):
//   current_age:         (tau_1, ..., tau_{m-1}, n - t_m)   last = open age
//   straddling_interval: (tau_1, ..., tau_m)                last = full span
//   completed_only:      (tau_1, ..., tau_{m-1})            may be empty
enum class AgeVariant : int {
  current_age = 1,
  straddling_interval = 2,
  completed_only = 3,
};

// Maps a user-facing 1/2/3 selector; throws std::invalid_argument otherwise.
AgeVariant variant_from_int(int beta);
int variant_to_int(AgeVariant v);

struct AgeRecord {
  AgeVariant variant = AgeVariant::current_age;
  std::vector<std::int64_t> ages;  // record order; last entry closes the list
  std::int64_t n = 0;
  std::int64_t record_count = 0;  // m
  // straddling_interval only: the last entry was cut at the simulation cap
  // (its true value is at least the stored one; every comparison against
  // completed ages <= n is unaffected).
  bool straddle_truncated = false;
};

// Rank of the final element: 1 + (number of earlier entries strictly larger),
// i.e. ties promote the last element.  Returns 0 for an empty list (the
// completed_only case with no finished interval), which callers treat as
// "event does not occur".
int rank_of_last(std::span<const std::int64_t> ages);

// k-th largest with multiplicity (k = 1 is the maximum); 0 when k exceeds
// the list size, so sums over k terminate naturally.
std::int64_t kth_largest(std::span<const std::int64_t> ages, int k);

}  // namespace recage
