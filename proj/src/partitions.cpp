#include "recage/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "recage/errors.hpp"

namespace recage::partitions {

namespace {

void validate_parameters(double alpha, double theta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("discount must lie in [0, 1]");
  }
  if (!(theta > -alpha)) {
    throw std::domain_error("strength must exceed minus the discount");
  }
}

// Seating dynamics shared by the double and exact laws.  Seats customers
// 2..n one at a time, carrying the full distribution over unordered
// partitions (descending part lists).
template <class Scalar>
std::map<Partition, Scalar> law_impl(const Scalar& alpha, const Scalar& theta,
                                     std::int64_t n) {
  std::map<Partition, Scalar> cur{{Partition{1}, Scalar(1)}};
  for (std::int64_t i = 1; i < n; ++i) {
    const Scalar denom = Scalar(i) + theta;
    std::map<Partition, Scalar> next;
    for (const auto& [part, weight] : cur) {
      for (std::size_t j = 0; j < part.size(); ++j) {
        if (j > 0 && part[j] == part[j - 1]) continue;  // first of a run
        std::int64_t mult = 1;
        while (j + static_cast<std::size_t>(mult) < part.size() &&
               part[j + static_cast<std::size_t>(mult)] == part[j]) {
          ++mult;
        }
        const Scalar p =
            weight * (Scalar(mult) * (Scalar(part[j]) - alpha)) / denom;
        if (p == Scalar(0)) continue;
        Partition grown = part;
        grown[j] += 1;
        std::sort(grown.begin(), grown.end(), std::greater<>());
        next[grown] += p;
      }
      const Scalar p_new =
          weight * (theta + Scalar(static_cast<std::int64_t>(part.size())) * alpha) /
          denom;
      if (p_new == Scalar(0)) continue;
      Partition opened = part;
      opened.push_back(1);
      next[opened] += p_new;
    }
    cur = std::move(next);
  }
  return cur;
}

void check_law_size(std::int64_t n) {
  if (n < 1) throw std::domain_error("need at least one customer");
  if (n > kMaxLawCustomers) {
    throw ResourceCeiling(
        "partition law enumeration is limited to 10 customers");
  }
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double se = v.size() > 1
                        ? std::sqrt(ss / static_cast<double>(v.size() - 1) /
                                    static_cast<double>(v.size()))
                        : 0.0;
  return {mean, se};
}

double ecdf_max_gap(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    gap = std::max(gap, std::abs(static_cast<double>(i) / nx -
                                 static_cast<double>(j) / ny));
  }
  return gap;
}

}  // namespace

CRPState crp_start(double alpha, double theta) {
  validate_parameters(alpha, theta);
  CRPState state;
  state.alpha = alpha;
  state.theta = theta;
  state.table_sizes = {1};
  state.customers = 1;
  return state;
}

void crp_step(CRPState& state, double uniform_draw) {
  if (state.customers < 1 || state.table_sizes.empty()) {
    throw std::logic_error("crp_step: state not started");
  }
  const double denom = static_cast<double>(state.customers) + state.theta;
  double cum = 0.0;
  for (std::size_t t = 0; t < state.table_sizes.size(); ++t) {
    cum += (static_cast<double>(state.table_sizes[t]) - state.alpha) / denom;
    if (uniform_draw < cum) {
      state.table_sizes[t] += 1;
      state.customers += 1;
      return;
    }
  }
  // Tail of the unit interval (also the round-off fall-through).
  state.table_sizes.push_back(1);
  state.customers += 1;
}

PartitionDist crp_partition_law(double alpha, double theta, std::int64_t n) {
  validate_parameters(alpha, theta);
  check_law_size(n);
  return law_impl<double>(alpha, theta, n);
}

PartitionDistExact crp_partition_law_exact(const Rational& alpha,
                                           const Rational& theta,
                                           std::int64_t n) {
  validate_parameters(alpha.to_double(), theta.to_double());
  check_law_size(n);
  return law_impl<Rational>(alpha, theta, n);
}

double gamma_sample(Xoshiro256& rng, double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform_open01(), 1.0 / shape);
    return gamma_sample(rng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_sample(Xoshiro256& rng, double a, double b) {
  const double ga = gamma_sample(rng, a);
  const double gb = gamma_sample(rng, b);
  const double sum = ga + gb;
  if (sum == 0.0) return 0.5;  // both shapes tiny and both variates underflowed
  return ga / sum;
}

StickBreak pd_sample(double alpha, double theta, int depth, Xoshiro256& rng) {
  validate_parameters(alpha, theta);
  if (alpha >= 1.0) {
    throw std::domain_error("stick-breaking needs discount below 1");
  }
  if (depth < 1) throw std::domain_error("depth must be at least 1");
  StickBreak out;
  out.fractions.reserve(static_cast<std::size_t>(depth));
  out.lengths.reserve(static_cast<std::size_t>(depth));
  double prod = 1.0;
  for (int i = 1; i <= depth; ++i) {
    const double u =
        beta_sample(rng, theta + static_cast<double>(i) * alpha, 1.0 - alpha);
    out.fractions.push_back(u);
    out.lengths.push_back((1.0 - u) * prod);
    prod *= u;
  }
  out.residual = prod;
  return out;
}

std::vector<double> ranked(const StickBreak& sticks) {
  std::vector<double> out = sticks.lengths;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

PdCheckReport pd_convergence_check(const std::vector<std::vector<double>>& a,
                                   const std::vector<std::vector<double>>& b,
                                   int k_max) {
  if (k_max < 1) throw std::domain_error("k_max must be at least 1");
  if (a.empty() || b.empty()) throw std::domain_error("need samples on both sides");
  for (const auto* side : {&a, &b}) {
    for (const auto& row : *side) {
      if (row.size() < static_cast<std::size_t>(k_max)) {
        throw std::domain_error("sample rows are shorter than k_max");
      }
    }
  }
  PdCheckReport report{};
  report.max_abs_z = 0.0;
  report.all_within = true;
  for (int kc = 0; kc < k_max; ++kc) {
    std::vector<double> col_a;
    std::vector<double> col_b;
    col_a.reserve(a.size());
    col_b.reserve(b.size());
    for (const auto& row : a) col_a.push_back(row[static_cast<std::size_t>(kc)]);
    for (const auto& row : b) col_b.push_back(row[static_cast<std::size_t>(kc)]);
    const MeanSe ma = mean_se(col_a);
    const MeanSe mb = mean_se(col_b);
    const double spread = std::sqrt(ma.se * ma.se + mb.se * mb.se);
    double z = 0.0;
    if (spread > 0.0) {
      z = (ma.mean - mb.mean) / spread;
    } else if (ma.mean != mb.mean) {
      z = std::numeric_limits<double>::infinity();
    }
    PdCoordinate coord;
    coord.coordinate = kc + 1;
    coord.mean_a = ma.mean;
    coord.mean_b = mb.mean;
    coord.z = z;
    coord.ecdf_gap = ecdf_max_gap(col_a, col_b);
    report.coordinates.push_back(coord);
    report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
    if (!(std::abs(z) < 4.0)) report.all_within = false;
  }
  return report;
}

}  // namespace recage::partitions
