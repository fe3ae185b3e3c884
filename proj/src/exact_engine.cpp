#include "recage/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "recage/holding_time.hpp"
#include "recage/series.hpp"

namespace recage::exact_engine {

namespace {

void check_args(int k, std::int64_t n_max, std::int64_t ceiling) {
  if (k < 1) throw std::domain_error("exact tables need rank k >= 1");
  if (n_max < 0) throw std::domain_error("exact tables need n_max >= 0");
  if (n_max > ceiling)
    throw ResourceCeiling("exact table horizon exceeds the ceiling (" +
                          std::to_string(n_max) + " > " +
                          std::to_string(ceiling) + "); cost grows cubically");
}

// Sum of f(l) z^l over 1 <= l <= head_end, truncated at degree bound.
TruncSeries head_series(const HoldingLaw& law, std::int64_t head_end,
                        std::size_t bound) {
  TruncSeries h(bound);
  const std::int64_t top = std::min<std::int64_t>(head_end, bound);
  for (std::int64_t l = 1; l <= top; ++l) h.set(l, law.f(l));
  return h;
}

// Sum of f(l) z^l over l > head_end, truncated at degree bound (exact for
// coefficient extraction: every dropped term has degree beyond the bound).
TruncSeries tail_series(const HoldingLaw& law, std::int64_t head_end,
                        std::size_t bound) {
  TruncSeries t(bound);
  for (std::int64_t l = head_end + 1; l <= static_cast<std::int64_t>(bound);
       ++l)
    t.set(l, law.f(l));
  return t;
}

void add_scaled_shifted(std::vector<double>& acc, const TruncSeries& term,
                        std::int64_t shift, double scale) {
  const std::size_t top = term.degree_bound();
  for (std::size_t d = 0; d <= top; ++d) {
    const std::size_t dst = d + static_cast<std::size_t>(shift);
    if (dst >= acc.size()) break;
    acc[dst] += scale * term[d];
  }
}

// Rank-k term for a cutoff j: T_j^{k-1} / (1 - H_j)^k at the given bound.
TruncSeries rank_term(const HoldingLaw& law, std::int64_t j, int k,
                      std::size_t bound) {
  const TruncSeries inv = recip_one_minus(head_series(law, j, bound));
  TruncSeries term = pow(inv, static_cast<std::uint64_t>(k));
  if (k >= 2)
    term = term * pow(tail_series(law, j, bound),
                      static_cast<std::uint64_t>(k - 1));
  return term;
}

// Current-age list: sum over the age a of the last element of
// q(a) z^a T_a^{k-1} / (1 - H_a)^k, extracted per-term at bound n_max - a.
std::vector<double> p_current_age(int k, std::int64_t n_max) {
  const HoldingLaw law(std::max<std::int64_t>(n_max, 1));
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::int64_t a = 0; a <= n_max; ++a) {
    if (a + static_cast<std::int64_t>(k - 1) * (a + 1) > n_max) break;
    const std::size_t bound = static_cast<std::size_t>(n_max - a);
    add_scaled_shifted(p, rank_term(law, a, k, bound), a, law.q(a));
  }
  return p;
}

// Completed-only list: q-tilde times the analogous sum with f(j) z^j weights.
std::vector<double> p_completed_only(int k, std::int64_t n_max) {
  const HoldingLaw law(std::max<std::int64_t>(n_max, 1));
  const std::size_t size = static_cast<std::size_t>(n_max) + 1;
  TruncSeries inner(static_cast<std::size_t>(n_max));
  for (std::int64_t j = 1; j <= n_max; ++j) {
    if (j + static_cast<std::int64_t>(k - 1) * (j + 1) > n_max) break;
    const std::size_t bound = static_cast<std::size_t>(n_max - j);
    const TruncSeries term = rank_term(law, j, k, bound);
    const std::size_t top = term.degree_bound();
    for (std::size_t d = 0; d <= top; ++d)
      inner.set(d + static_cast<std::size_t>(j),
                inner[d + static_cast<std::size_t>(j)] + law.f(j) * term[d]);
  }
  TruncSeries qt(static_cast<std::size_t>(n_max));
  for (std::int64_t i = 0; i <= n_max; ++i) qt.set(i, law.q(i));
  const TruncSeries prod = qt * inner;
  std::vector<double> p(size, 0.0);
  for (std::size_t n = 0; n < size; ++n) p[n] = prod[n];
  return p;
}

// Straddling-interval list: sum over the straddle length v of
// f(v) (1-z^v)/(1-z) T_v^{k-1} / (1 - H_v)^k.  The division by (1-z) is a
// prefix sum; subtracting the shifted prefix keeps everything nonnegative.
// For k = 1 the straddles longer than n_max still carry mass q(n_max) and
// contribute one aggregate term with the full head (their tail factor is
// empty and their geometric prefactor is all-ones at these degrees).
std::vector<double> p_straddling(int k, std::int64_t n_max) {
  const HoldingLaw law(std::max<std::int64_t>(n_max, 1));
  const std::size_t size = static_cast<std::size_t>(n_max) + 1;
  const std::size_t bound = static_cast<std::size_t>(n_max);
  std::vector<double> p(size, 0.0);
  std::vector<double> prefix(size, 0.0);
  auto add_prefixed = [&](const TruncSeries& term, std::int64_t v, double w) {
    double run = 0.0;
    for (std::size_t d = 0; d < size; ++d) {
      run += term[d];
      prefix[d] = run;
    }
    for (std::size_t d = 0; d < size; ++d) {
      const double lower =
          (v >= 0 && d >= static_cast<std::size_t>(v)) ? prefix[d - v] : 0.0;
      p[d] += w * (prefix[d] - lower);
    }
  };
  for (std::int64_t v = 1; v <= n_max; ++v) {
    if (k >= 2 && static_cast<std::int64_t>(k - 1) * (v + 1) > n_max) break;
    add_prefixed(rank_term(law, v, k, bound), v, law.f(v));
  }
  if (k == 1) {
    const TruncSeries inv_full =
        recip_one_minus(head_series(law, n_max, bound));
    add_prefixed(inv_full, -1, law.q(n_max));  // v beyond n_max: no subtraction
  }
  return p;
}

// Distribution-function route for E L_k, k >= 2 (straddling) / k >= 1
// (completed): build the generating function of P(L_k(n) <= t) by the rank
// recursion in k, then sum the tail probabilities 1 - F over thresholds t.
// Series entering the recursion, all divided by (1-z) where noted:
//   head/tail H_t, T_t as above;
//   B_t = sum_{j<=t} f(j)(1-z^j)/(1-z): coefficient d is cum_f(t)-cum_f(d)
//         for d < t and 0 beyond;
//   C_t = sum_{j>t} f(j)(1-z^j)/(1-z): coefficient d is q(max(t,d)).
std::vector<double> el_straddling(int k, std::int64_t n_max) {
  const HoldingLaw law(std::max<std::int64_t>(n_max, 1));
  const std::size_t size = static_cast<std::size_t>(n_max) + 1;
  const std::size_t bound = static_cast<std::size_t>(n_max);
  std::vector<double> el(size, 0.0);
  for (std::int64_t t = 0; t <= n_max; ++t) {
    TruncSeries big(bound);  // B_t
    for (std::int64_t d = 0; d < t && d <= n_max; ++d)
      big.set(d, law.cum_f(t) - law.cum_f(d));
    TruncSeries cross(bound);  // C_t
    for (std::int64_t d = 0; d <= n_max; ++d)
      cross.set(d, law.q(std::max(t, d)));
    const TruncSeries inv = recip_one_minus(head_series(law, t, bound));
    const TruncSeries tail = tail_series(law, t, bound);
    TruncSeries dist = big * inv;  // rank 1
    TruncSeries tail_pow = TruncSeries::one(bound);
    TruncSeries inv_pow = inv;
    for (int rank = 2; rank <= k; ++rank) {
      // adds P(exactly rank-1 ages exceed t), split by whether the
      // straddling interval is one of them
      dist += cross * tail_pow * inv_pow;
      tail_pow = tail_pow * tail;
      inv_pow = inv_pow * inv;
      dist += big * tail_pow * inv_pow;
    }
    for (std::size_t n = 0; n < size; ++n) el[n] += 1.0 - dist[n];
  }
  return el;
}

std::vector<double> el_completed_only(int k, std::int64_t n_max) {
  const HoldingLaw law(std::max<std::int64_t>(n_max, 1));
  const std::size_t size = static_cast<std::size_t>(n_max) + 1;
  const std::size_t bound = static_cast<std::size_t>(n_max);
  TruncSeries qt(bound);
  for (std::int64_t i = 0; i <= n_max; ++i) qt.set(i, law.q(i));
  std::vector<double> el(size, 0.0);
  for (std::int64_t t = 0; t <= n_max; ++t) {
    const TruncSeries inv = recip_one_minus(head_series(law, t, bound));
    const TruncSeries tail = tail_series(law, t, bound);
    TruncSeries dist = qt * inv;  // rank 1
    TruncSeries term = inv;
    for (int rank = 2; rank <= k; ++rank) {
      term = term * tail * inv;
      dist += qt * term;
    }
    for (std::size_t n = 0; n < size; ++n) el[n] += 1.0 - dist[n];
  }
  return el;
}

}  // namespace

ExactTable p_exact(AgeVariant variant, int k, std::int64_t n_max,
                   std::int64_t ceiling) {
  check_args(k, n_max, ceiling);
  ExactTable table{variant, k, {}};
  switch (variant) {
    case AgeVariant::current_age:
      table.values = p_current_age(k, n_max);
      break;
    case AgeVariant::straddling_interval:
      table.values = p_straddling(k, n_max);
      break;
    case AgeVariant::completed_only:
      table.values = p_completed_only(k, n_max);
      break;
  }
  return table;
}

ExactTable el_exact(AgeVariant variant, int k, std::int64_t n_max,
                    std::int64_t ceiling) {
  check_args(k, n_max, ceiling);
  ExactTable table{variant, k, {}};
  switch (variant) {
    case AgeVariant::current_age: {
      // the k-th largest grows by one from n to n+1 exactly when the last
      // element has rank k at time n, so E L_k(n) is the prefix sum of p_k
      const std::vector<double> p = p_current_age(k, n_max);
      table.values.assign(p.size(), 0.0);
      for (std::size_t n = 1; n < p.size(); ++n)
        table.values[n] = table.values[n - 1] + p[n - 1];
      break;
    }
    case AgeVariant::straddling_interval:
      if (k == 1)
        throw DivergentQuantity(
            "expected largest age diverges for the straddling-interval list");
      table.values = el_straddling(k, n_max);
      break;
    case AgeVariant::completed_only:
      table.values = el_completed_only(k, n_max);
      break;
  }
  // the expectation is nonnegative by definition; the straddling transform
  // carries signed terms whose round-off can leave a -1e-16 in entries that
  // are exactly zero (k beyond the possible list length), so pin those
  for (double& v : table.values) v = std::max(v, 0.0);
  return table;
}

LaplaceDiag laplace_diag(const ExactTable& table, double s) {
  if (!(s > 0.0)) throw std::domain_error("laplace_diag needs s > 0");
  if (table.values.empty())
    throw std::domain_error("laplace_diag needs a nonempty table");
  double sum = 0.0;
  for (std::size_t n = 0; n < table.values.size(); ++n)
    sum += table.values[n] * std::exp(-s * static_cast<double>(n));
  const double top =
      std::exp(-s * static_cast<double>(table.values.size() - 1));
  return LaplaceDiag{sum, top >= 1e-12 * sum};
}

}  // namespace recage::exact_engine
