#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "recage/ages.hpp"
#include "recage/holding_time.hpp"

// Stochastic cross-checks of the exact tables: random walks with several
// symmetric continuous step laws (whose record-age statistics coincide by the
// Sparre Andersen theorem) and the equivalent renewal process driven by exact
// inverse-CDF holding times.  Estimates are bit-reproducible for a fixed
// (seed, replicas) pair no matter how many worker threads run: every replica
// owns the RNG stream derived from (seed, replica index) and the reduction
// walks replicas in index order.
namespace recage::montecarlo {

enum class StepLaw { gaussian, uniform, cauchy, renewal_exact };

struct WalkConfig {
  StepLaw step_law = StepLaw::gaussian;
  std::int64_t n = 0;          // horizon
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;
  int k_max = 4;               // ranked coordinates retained per replica
};

// One replica's age lists for all three variants, built from one trajectory.
// The straddling interval is followed past n until the next record, up to
// 4n+16 extra steps; past that the recorded value exceeds every completed
// age (which is all rank statistics ever compare it against) and
// straddle_truncated is set.
std::array<AgeRecord, 3> simulate_walk(const WalkConfig& cfg,
                                       std::int64_t replica_index,
                                       const HoldingLaw& law);

// Law table sized for simulate_walk's straddle cap at horizon n.
HoldingLaw make_walk_law(std::int64_t n);

enum class Target {
  rank_probability,  // indicator(rank of last element == k)
  mean_ratio,        // k-th largest / n, empty lists counted as zero
  ranked_ratio,      // k-th largest / n, empty lists excluded
};

struct StatRequest {
  Target target;
  AgeVariant variant;
  int k;
};

struct Estimate {
  double mean;
  double std_error;       // sample std / sqrt(count)
  std::int64_t count;     // replicas contributing
  std::int64_t excluded;  // replicas without the statistic (empty list)
  bool infinite_mean;     // straddling-interval k=1 age proportion: the mean
                          // does not exist; mean/std_error are NaN and the
                          // median carries the location information
  double median;
};

// All requested statistics from one shared set of trajectories.
std::vector<Estimate> estimate_many(const WalkConfig& cfg,
                                    std::span<const StatRequest> stats,
                                    int threads = 0);

Estimate estimate(const WalkConfig& cfg, const StatRequest& stat,
                  int threads = 0);

// Ranked current-age proportions (L_1/n, ..., L_k_max/n) per replica.
std::vector<std::vector<double>> ranked_ratio_samples(const WalkConfig& cfg,
                                                      int threads = 0);

// Two-sample z statistic; 0 when both spreads vanish and the means agree.
double z_score(const Estimate& a, const Estimate& b);

struct UniversalityEntry {
  std::size_t cfg_a;
  std::size_t cfg_b;
  std::size_t stat_index;
  double z;
};

struct UniversalityReport {
  std::vector<UniversalityEntry> entries;
  double max_abs_z;
  bool all_within;  // every |z| < 4
};

// Pairwise z-scores of the same statistics across step laws (identical n and
// replica count required): symmetric continuous steps must agree.
UniversalityReport universality_check(std::span<const WalkConfig> cfgs,
                                      std::span<const StatRequest> stats,
                                      int threads = 0);

}  // namespace recage::montecarlo
