#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "recage/ages.hpp"
#include "recage/errors.hpp"
#include "recage/rational.hpp"

// Brute-force reference for small horizons: every walk functional handled by
// the generating-function engine is recomputed here by direct enumeration of
// interval configurations, weighted by products of f and q.  The straddling
// interval is enumerated as the exact lengths n-S+1..n plus a single ">= n+1"
// class of weight q(n); since every completed age and every queried threshold
// is <= n, representing that class by the value n+1 is exact for ranks,
// k-th largest values (k >= 2) and threshold events.
//
// f and q are dyadic rationals, so the Rational instantiation is exact; the
// double instantiation follows the same code path and is compared against it.
namespace recage::oracle {

inline constexpr std::int64_t kMaxHorizon = 20;
inline constexpr std::int64_t kMaxRationalHorizon = 14;
inline constexpr std::int64_t kMaxPartitionHorizon = 12;

template <class Scalar>
struct WeightedAges {
  std::vector<std::int64_t> ages;
  Scalar weight;
};

// f[0..max_k] and q[0..max_k] in the requested scalar (exact for Rational).
template <class Scalar>
struct LawTables {
  std::vector<Scalar> f, q;
};

template <class Scalar>
LawTables<Scalar> law_tables(std::int64_t max_k) {
  LawTables<Scalar> t;
  t.q.reserve(static_cast<std::size_t>(max_k) + 1);
  t.f.reserve(static_cast<std::size_t>(max_k) + 1);
  t.q.push_back(Scalar(1));
  t.f.push_back(Scalar(0));
  for (std::int64_t k = 1; k <= max_k; ++k) {
    const Scalar qk = t.q.back() * Scalar(2 * k - 1) / Scalar(2 * k);
    t.f.push_back(t.q.back() - qk);
    t.q.push_back(qk);
  }
  return t;
}

// All age configurations at horizon n for the given variant, with their
// exact probabilities.  Horizons above kMaxHorizon are refused (the
// composition count doubles with every step of n).
template <class Scalar>
std::vector<WeightedAges<Scalar>> enumerate(AgeVariant variant,
                                            std::int64_t n);

// Probability that the final element of the age list has the given rank.
template <class Scalar>
Scalar oracle_p(AgeVariant variant, int k, std::int64_t n);

// Expected k-th largest age.  The straddling-interval maximum (k = 1) has
// infinite mean and throws DivergentQuantity.
template <class Scalar>
Scalar oracle_EL(AgeVariant variant, int k, std::int64_t n);

using Partition = std::vector<std::int64_t>;  // parts sorted descending
using PartitionDist = std::map<Partition, double>;
using PartitionDistExact = std::map<Partition, Rational>;

// Law of the partition of n formed by the current_age list with a zero
// current age dropped (parts sorted descending).  n in [1, 12].
PartitionDist partition_law_beta1(std::int64_t n);
PartitionDistExact partition_law_beta1_exact(std::int64_t n);

double total_variation(const PartitionDist& a, const PartitionDist& b);

}  // namespace recage::oracle
