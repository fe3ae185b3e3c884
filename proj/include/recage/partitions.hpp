#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "recage/oracle.hpp"
#include "recage/rational.hpp"
#include "recage/rng.hpp"

// Exchangeable random partitions: the two-parameter Chinese restaurant
// process, its exact partition law by dynamic programming over customer
// arrivals, and stick-breaking samplers for the Poisson-Dirichlet limit of
// the ranked age proportions (PD(1/2, 0) for the symmetric-walk case).
namespace recage::partitions {

using oracle::Partition;
using oracle::PartitionDist;
using oracle::PartitionDistExact;

inline constexpr std::int64_t kMaxLawCustomers = 10;

struct CRPState {
  double alpha = 0.0;
  double theta = 1.0;
  std::vector<std::int64_t> table_sizes;
  std::int64_t customers = 0;
};

// Seats the first customer at the first table.
CRPState crp_start(double alpha, double theta);

// Seats one more customer by inverse CDF over tables in index order, the new
// table taking the tail of the unit interval.
void crp_step(CRPState& state, double uniform_draw);

// Law of the unordered partition of n customers into table sizes.
PartitionDist crp_partition_law(double alpha, double theta, std::int64_t n);
PartitionDistExact crp_partition_law_exact(const Rational& alpha,
                                           const Rational& theta,
                                           std::int64_t n);

// Marsaglia-Tsang gamma variates (shape > 0, unit scale) and the gamma-ratio
// beta sampler built on them.
double gamma_sample(Xoshiro256& rng, double shape);
double beta_sample(Xoshiro256& rng, double a, double b);

struct StickBreak {
  std::vector<double> fractions;  // U_1..U_depth
  std::vector<double> lengths;    // tau_i = (1 - U_i) * prod_{j<i} U_j
  double residual;                // prod_{i<=depth} U_i, mean 1/(depth+1)
                                  // under PD(1/2, 0)
};

// GEM(alpha, theta) stick lengths in size-biased order, truncated at depth.
StickBreak pd_sample(double alpha, double theta, int depth, Xoshiro256& rng);

// Stick lengths sorted descending.
std::vector<double> ranked(const StickBreak& sticks);

struct PdCoordinate {
  int coordinate;   // 1-based rank
  double mean_a;
  double mean_b;
  double z;         // two-sample mean z-score
  double ecdf_gap;  // sup-norm distance of the empirical CDFs
};

struct PdCheckReport {
  std::vector<PdCoordinate> coordinates;
  double max_abs_z;
  bool all_within;  // every |z| < 4
};

// Coordinate-wise comparison of two ranked-proportion samples (rows are
// replicas, columns are ranks).  Gates on the mean z-scores; the CDF gaps
// are reported for diagnostics.
PdCheckReport pd_convergence_check(const std::vector<std::vector<double>>& a,
                                   const std::vector<std::vector<double>>& b,
                                   int k_max);

}  // namespace recage::partitions
