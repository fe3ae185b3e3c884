#pragma once

#include <stdexcept>
#include <string>

namespace recage {

// Requested quantity is infinite a priori (e.g. the mean of the straddling
// interval), so no numeric answer exists; callers surface this distinctly
// from usage errors.
class DivergentQuantity : public std::runtime_error {
 public:
  explicit DivergentQuantity(const std::string& what)
      : std::runtime_error(what) {}
};

// Work or memory bound exceeded (degree ceilings, enumeration horizons).
class ResourceCeiling : public std::runtime_error {
 public:
  explicit ResourceCeiling(const std::string& what)
      : std::runtime_error(what) {}
};

// Adaptive quadrature ran out of panel budget before reaching tolerance.
class QuadratureFailure : public std::runtime_error {
 public:
  explicit QuadratureFailure(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace recage
