#include "recage/oracle.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <type_traits>

namespace recage::oracle {

namespace {

template <class Scalar>
void check_horizon(std::int64_t n) {
  if (n < 0) throw std::domain_error("oracle: negative horizon");
  const std::int64_t cap =
      std::is_same_v<Scalar, Rational> ? kMaxRationalHorizon : kMaxHorizon;
  if (n > cap) throw std::out_of_range("oracle: horizon beyond safe cap");
}

// Depth-first walk over all age configurations at horizon n; visit() is
// called once per configuration with the ages (interval order, last element
// is the record the rank statistics look at) and its probability.
template <class Scalar, class Visit>
void walk_configs(AgeVariant variant, std::int64_t n,
                  const LawTables<Scalar>& law, Visit&& visit) {
  std::vector<std::int64_t> ages;
  auto dfs = [&](auto&& self, std::int64_t done, Scalar w) -> void {
    const std::int64_t left = n - done;
    switch (variant) {
      case AgeVariant::current_age:
        ages.push_back(left);
        visit(std::span<const std::int64_t>(ages), w * law.q[left]);
        ages.pop_back();
        break;
      case AgeVariant::completed_only:
        visit(std::span<const std::int64_t>(ages), w * law.q[left]);
        break;
      case AgeVariant::straddling_interval:
        for (std::int64_t v = left + 1; v <= n; ++v) {
          ages.push_back(v);
          visit(std::span<const std::int64_t>(ages), w * law.f[v]);
          ages.pop_back();
        }
        ages.push_back(n + 1);  // stands for every duration > n
        visit(std::span<const std::int64_t>(ages), w * law.q[n]);
        ages.pop_back();
        break;
    }
    for (std::int64_t j = 1; j <= left; ++j) {
      ages.push_back(j);
      self(self, done + j, w * law.f[j]);
      ages.pop_back();
    }
  };
  dfs(dfs, 0, Scalar(1));
}

}  // namespace

template <class Scalar>
std::vector<WeightedAges<Scalar>> enumerate(AgeVariant variant,
                                            std::int64_t n) {
  check_horizon<Scalar>(n);
  const auto law = law_tables<Scalar>(n);
  std::vector<WeightedAges<Scalar>> out;
  walk_configs<Scalar>(variant, n, law,
                       [&](std::span<const std::int64_t> ages, Scalar w) {
                         out.push_back(WeightedAges<Scalar>{
                             {ages.begin(), ages.end()}, w});
                       });
  return out;
}

template <class Scalar>
Scalar oracle_p(AgeVariant variant, int k, std::int64_t n) {
  if (k < 1) throw std::domain_error("oracle_p: rank must be >= 1");
  check_horizon<Scalar>(n);
  const auto law = law_tables<Scalar>(n);
  Scalar acc(0);
  walk_configs<Scalar>(variant, n, law,
                       [&](std::span<const std::int64_t> ages, Scalar w) {
                         if (rank_of_last(ages) == k) acc += w;
                       });
  return acc;
}

template <class Scalar>
Scalar oracle_EL(AgeVariant variant, int k, std::int64_t n) {
  if (k < 1) throw std::domain_error("oracle_EL: order must be >= 1");
  if (variant == AgeVariant::straddling_interval && k == 1)
    throw DivergentQuantity(
        "expected largest age diverges for the straddling-interval list");
  check_horizon<Scalar>(n);
  const auto law = law_tables<Scalar>(n);
  Scalar acc(0);
  walk_configs<Scalar>(variant, n, law,
                       [&](std::span<const std::int64_t> ages, Scalar w) {
                         acc += w * Scalar(kth_largest(ages, k));
                       });
  return acc;
}

PartitionDistExact partition_law_beta1_exact(std::int64_t n) {
  if (n < 1) throw std::domain_error("partition law needs horizon >= 1");
  if (n > kMaxPartitionHorizon)
    throw std::out_of_range("partition law: horizon beyond safe cap");
  const auto law = law_tables<Rational>(n);
  PartitionDistExact out;
  walk_configs<Rational>(
      AgeVariant::current_age, n, law,
      [&](std::span<const std::int64_t> ages, Rational w) {
        Partition parts;
        parts.reserve(ages.size());
        for (const std::int64_t a : ages)
          if (a > 0) parts.push_back(a);
        std::sort(parts.begin(), parts.end(), std::greater<>());
        auto [it, fresh] = out.emplace(std::move(parts), w);
        if (!fresh) it->second += w;
      });
  return out;
}

PartitionDist partition_law_beta1(std::int64_t n) {
  PartitionDist out;
  for (const auto& [parts, w] : partition_law_beta1_exact(n))
    out.emplace(parts, w.to_double());
  return out;
}

double total_variation(const PartitionDist& a, const PartitionDist& b) {
  double sum = 0.0;
  for (const auto& [parts, pa] : a) {
    const auto it = b.find(parts);
    sum += std::abs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [parts, pb] : b)
    if (a.find(parts) == a.end()) sum += pb;
  return 0.5 * sum;
}

template std::vector<WeightedAges<double>> enumerate<double>(AgeVariant,
                                                             std::int64_t);
template std::vector<WeightedAges<Rational>> enumerate<Rational>(AgeVariant,
                                                                 std::int64_t);
template double oracle_p<double>(AgeVariant, int, std::int64_t);
template Rational oracle_p<Rational>(AgeVariant, int, std::int64_t);
template double oracle_EL<double>(AgeVariant, int, std::int64_t);
template Rational oracle_EL<Rational>(AgeVariant, int, std::int64_t);

}  // namespace recage::oracle
