#include "recage/ages.hpp"

#include <algorithm>
#include <stdexcept>

namespace recage {

AgeVariant variant_from_int(int beta) {
  switch (beta) {
    case 1:
      return AgeVariant::current_age;
    case 2:
      return AgeVariant::straddling_interval;
    case 3:
      return AgeVariant::completed_only;
    default:
      throw std::invalid_argument("variant selector must be 1, 2 or 3");
  }
}

int variant_to_int(AgeVariant v) { return static_cast<int>(v); }

int rank_of_last(std::span<const std::int64_t> ages) {
  if (ages.empty()) return 0;
  const std::int64_t last = ages.back();
  int greater = 0;
  for (std::size_t i = 0; i + 1 < ages.size(); ++i)
    if (ages[i] > last) ++greater;
  return greater + 1;
}

std::int64_t kth_largest(std::span<const std::int64_t> ages, int k) {
  if (k < 1) throw std::invalid_argument("kth_largest: k must be >= 1");
  if (static_cast<std::size_t>(k) > ages.size()) return 0;
  std::vector<std::int64_t> sorted(ages.begin(), ages.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(),
                   std::greater<>());
  return sorted[static_cast<std::size_t>(k - 1)];
}

}  // namespace recage
