#include "recage/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "recage/rng.hpp"

namespace recage::montecarlo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t straddle_cap(std::int64_t n) { return 4 * n + 16; }

double draw_step(Xoshiro256& rng, StepLaw law) {
  switch (law) {
    case StepLaw::gaussian:
      return rng.normal();
    case StepLaw::uniform:
      return 2.0 * rng.uniform_open01() - 1.0;
    case StepLaw::cauchy:
      return std::tan(std::numbers::pi * (rng.uniform_open01() - 0.5));
    case StepLaw::renewal_exact:
      break;
  }
  throw std::logic_error("draw_step: renewal driver has no step increments");
}

struct Trajectory {
  std::vector<std::int64_t> completed;  // record intervals closed by time n
  std::int64_t current_age;             // n minus last record time
  std::int64_t straddle;                // interval containing n (> current_age)
  bool truncated;                       // straddle search hit the cap
};

Trajectory run_renewal(Xoshiro256& rng, std::int64_t n, const HoldingLaw& law) {
  const std::int64_t cap = straddle_cap(n);
  Trajectory t;
  std::int64_t s = 0;
  for (;;) {
    const std::int64_t tau = law.sample_age_capped(rng.uniform_open01(), cap);
    if (s + tau > n) {
      t.current_age = n - s;
      t.straddle = tau;
      t.truncated = tau > cap;
      return t;
    }
    t.completed.push_back(tau);
    s += tau;
  }
}

Trajectory run_walk(Xoshiro256& rng, std::int64_t n, StepLaw law) {
  const std::int64_t cap = straddle_cap(n);
  Trajectory t;
  double x = 0.0;
  double running_max = 0.0;
  std::int64_t last_record = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    x += draw_step(rng, law);
    if (x > running_max) {
      running_max = x;
      t.completed.push_back(j - last_record);
      last_record = j;
    }
  }
  t.current_age = n - last_record;
  // Walk on until the record that closes the straddling interval.  A capped
  // search still yields a value larger than every completed age, which is
  // all any rank or k-th-largest query compares it against.
  for (std::int64_t j = n + 1; j <= last_record + cap; ++j) {
    x += draw_step(rng, law);
    if (x > running_max) {
      t.straddle = j - last_record;
      t.truncated = false;
      return t;
    }
  }
  t.straddle = cap + 1;
  t.truncated = true;
  return t;
}

double eval_stat(const std::array<AgeRecord, 3>& records,
                 const StatRequest& stat, std::int64_t n) {
  const AgeRecord& rec = records[static_cast<std::size_t>(
      variant_to_int(stat.variant) - 1)];
  switch (stat.target) {
    case Target::rank_probability:
      return rank_of_last(rec.ages) == stat.k ? 1.0 : 0.0;
    case Target::mean_ratio:
      return static_cast<double>(kth_largest(rec.ages, stat.k)) /
             static_cast<double>(n);
    case Target::ranked_ratio:
      if (rec.ages.empty()) return kNaN;  // excluded from the sample
      return static_cast<double>(kth_largest(rec.ages, stat.k)) /
             static_cast<double>(n);
  }
  throw std::logic_error("eval_stat: unknown target");
}

bool needs_positive_n(Target target) {
  return target == Target::mean_ratio || target == Target::ranked_ratio;
}

int resolve_threads(int threads, std::int64_t replicas) {
  int t = threads;
  if (t <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    t = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (static_cast<std::int64_t>(t) > replicas) t = static_cast<int>(replicas);
  return std::max(t, 1);
}

// Runs fn(replica) over [0, replicas) on the requested number of threads.
template <class Fn>
void parallel_replicas(std::int64_t replicas, int threads, Fn&& fn) {
  const int t = resolve_threads(threads, replicas);
  if (t == 1) {
    for (std::int64_t r = 0; r < replicas; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    const std::int64_t lo = replicas * w / t;
    const std::int64_t hi = replicas * (w + 1) / t;
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::int64_t r = lo; r < hi; ++r) fn(r);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

Estimate reduce_values(const std::vector<double>& values, bool infinite_mean) {
  Estimate est{};
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values) {
    if (std::isnan(v)) {
      ++est.excluded;
    } else {
      kept.push_back(v);
    }
  }
  est.count = static_cast<std::int64_t>(kept.size());
  est.infinite_mean = infinite_mean;
  if (kept.empty()) {
    est.mean = est.std_error = est.median = kNaN;
    return est;
  }
  double sum = 0.0;
  for (double v : kept) sum += v;
  const double mean = sum / static_cast<double>(kept.size());
  double ss = 0.0;
  for (double v : kept) ss += (v - mean) * (v - mean);
  const double se =
      kept.size() > 1
          ? std::sqrt(ss / static_cast<double>(kept.size() - 1) /
                      static_cast<double>(kept.size()))
          : 0.0;

  const std::size_t mid = kept.size() / 2;
  std::nth_element(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(mid),
                   kept.end());
  double median = kept[mid];
  if (kept.size() % 2 == 0) {
    const double lower =
        *std::max_element(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  est.median = median;

  if (infinite_mean) {
    est.mean = est.std_error = kNaN;
  } else {
    est.mean = mean;
    est.std_error = se;
  }
  return est;
}

void validate_config(const WalkConfig& cfg) {
  if (cfg.n < 0) throw std::domain_error("horizon must be nonnegative");
  if (cfg.replicas < 1) throw std::domain_error("need at least one replica");
  if (cfg.k_max < 1) throw std::domain_error("k_max must be at least 1");
}

}  // namespace

HoldingLaw make_walk_law(std::int64_t n) {
  return HoldingLaw(straddle_cap(n));
}

std::array<AgeRecord, 3> simulate_walk(const WalkConfig& cfg,
                                       std::int64_t replica_index,
                                       const HoldingLaw& law) {
  validate_config(cfg);
  Xoshiro256 rng = make_stream(cfg.seed, static_cast<std::uint64_t>(replica_index));
  const Trajectory t = cfg.step_law == StepLaw::renewal_exact
                           ? run_renewal(rng, cfg.n, law)
                           : run_walk(rng, cfg.n, cfg.step_law);
  const auto m = static_cast<std::int64_t>(t.completed.size()) + 1;

  std::array<AgeRecord, 3> out;

  AgeRecord& current = out[0];
  current.variant = AgeVariant::current_age;
  current.ages = t.completed;
  current.ages.push_back(t.current_age);
  current.n = cfg.n;
  current.record_count = m;
  current.straddle_truncated = false;

  AgeRecord& straddling = out[1];
  straddling.variant = AgeVariant::straddling_interval;
  straddling.ages = t.completed;
  straddling.ages.push_back(t.straddle);
  straddling.n = cfg.n;
  straddling.record_count = m;
  straddling.straddle_truncated = t.truncated;

  AgeRecord& completed = out[2];
  completed.variant = AgeVariant::completed_only;
  completed.ages = t.completed;
  completed.n = cfg.n;
  completed.record_count = m;
  completed.straddle_truncated = false;

  return out;
}

std::vector<Estimate> estimate_many(const WalkConfig& cfg,
                                    std::span<const StatRequest> stats,
                                    int threads) {
  validate_config(cfg);
  for (const StatRequest& s : stats) {
    if (s.k < 1) throw std::domain_error("rank must be at least 1");
    if (cfg.n == 0 && needs_positive_n(s.target)) {
      throw std::domain_error("age proportions need a positive horizon");
    }
  }
  const HoldingLaw law = make_walk_law(cfg.n);

  std::vector<std::vector<double>> values(
      stats.size(), std::vector<double>(static_cast<std::size_t>(cfg.replicas)));
  parallel_replicas(cfg.replicas, threads, [&](std::int64_t r) {
    const auto records = simulate_walk(cfg, r, law);
    for (std::size_t s = 0; s < stats.size(); ++s) {
      values[s][static_cast<std::size_t>(r)] = eval_stat(records, stats[s], cfg.n);
    }
  });

  std::vector<Estimate> out;
  out.reserve(stats.size());
  for (std::size_t s = 0; s < stats.size(); ++s) {
    const bool infinite =
        stats[s].variant == AgeVariant::straddling_interval &&
        stats[s].k == 1 && stats[s].target != Target::rank_probability;
    out.push_back(reduce_values(values[s], infinite));
  }
  return out;
}

Estimate estimate(const WalkConfig& cfg, const StatRequest& stat, int threads) {
  return estimate_many(cfg, std::span<const StatRequest>(&stat, 1), threads)[0];
}

std::vector<std::vector<double>> ranked_ratio_samples(const WalkConfig& cfg,
                                                      int threads) {
  validate_config(cfg);
  if (cfg.n == 0) throw std::domain_error("age proportions need a positive horizon");
  const HoldingLaw law = make_walk_law(cfg.n);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(cfg.replicas));
  parallel_replicas(cfg.replicas, threads, [&](std::int64_t r) {
    const auto records = simulate_walk(cfg, r, law);
    std::vector<std::int64_t> ages = records[0].ages;
    const auto keep = std::min<std::size_t>(ages.size(),
                                            static_cast<std::size_t>(cfg.k_max));
    std::partial_sort(ages.begin(), ages.begin() + static_cast<std::ptrdiff_t>(keep),
                      ages.end(), std::greater<>());
    std::vector<double> row(static_cast<std::size_t>(cfg.k_max), 0.0);
    for (std::size_t j = 0; j < keep; ++j) {
      row[j] = static_cast<double>(ages[j]) / static_cast<double>(cfg.n);
    }
    rows[static_cast<std::size_t>(r)] = std::move(row);
  });
  return rows;
}

double z_score(const Estimate& a, const Estimate& b) {
  const double spread = std::sqrt(a.std_error * a.std_error +
                                  b.std_error * b.std_error);
  const double diff = a.mean - b.mean;
  if (spread == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  return diff / spread;
}

UniversalityReport universality_check(std::span<const WalkConfig> cfgs,
                                      std::span<const StatRequest> stats,
                                      int threads) {
  if (cfgs.size() < 2) throw std::domain_error("need at least two step laws");
  if (stats.empty()) throw std::domain_error("need at least one statistic");
  for (const WalkConfig& cfg : cfgs) {
    if (cfg.n != cfgs[0].n || cfg.replicas != cfgs[0].replicas) {
      throw std::domain_error("step laws must share horizon and replica count");
    }
  }
  std::vector<std::vector<Estimate>> per_cfg;
  per_cfg.reserve(cfgs.size());
  for (const WalkConfig& cfg : cfgs) {
    per_cfg.push_back(estimate_many(cfg, stats, threads));
  }
  UniversalityReport report{};
  report.max_abs_z = 0.0;
  report.all_within = true;
  for (std::size_t a = 0; a < cfgs.size(); ++a) {
    for (std::size_t b = a + 1; b < cfgs.size(); ++b) {
      for (std::size_t s = 0; s < stats.size(); ++s) {
        if (per_cfg[a][s].infinite_mean || per_cfg[b][s].infinite_mean) continue;
        const double z = z_score(per_cfg[a][s], per_cfg[b][s]);
        report.entries.push_back({a, b, s, z});
        report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
        if (!(std::abs(z) < 4.0)) report.all_within = false;
      }
    }
  }
  return report;
}

}  // namespace recage::montecarlo
