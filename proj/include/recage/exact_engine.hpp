#pragma once

#include <cstdint>
#include <vector>

#include "recage/ages.hpp"
#include "recage/errors.hpp"

// Exact finite-n tables of the record-age rank probabilities p_k(n) and the
// expected k-th largest age E L_k(n), obtained by coefficient extraction from
// the Sparre Andersen generating functions.  All series involved have
// nonnegative coefficients, so double-precision convolutions are
// cancellation-free and the extracted values are exact up to linear round-off
// growth.  Cost is cubic in the horizon, hence the resource ceiling.
namespace recage::exact_engine {

inline constexpr std::int64_t kDefaultCeiling = 2048;

struct ExactTable {
  AgeVariant variant;
  int k;
  std::vector<double> values;  // indexed by n = 0..n_max
};

// P(the last element of the age list has rank k) for n = 0..n_max.
ExactTable p_exact(AgeVariant variant, int k, std::int64_t n_max,
                   std::int64_t ceiling = kDefaultCeiling);

// E(k-th largest age) for n = 0..n_max.  The straddling-interval variant has
// an infinite mean for k = 1 and throws DivergentQuantity.
ExactTable el_exact(AgeVariant variant, int k, std::int64_t n_max,
                    std::int64_t ceiling = kDefaultCeiling);

struct LaplaceDiag {
  double sum;      // sum over n <= n_max of values[n] * exp(-s*n)
  bool truncated;  // true when exp(-s*n_max) >= 1e-12 * sum
};

LaplaceDiag laplace_diag(const ExactTable& table, double s);

}  // namespace recage::exact_engine
