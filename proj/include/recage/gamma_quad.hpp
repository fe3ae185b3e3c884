#pragma once

#include <functional>

#include "recage/ages.hpp"

// Incomplete gamma functions built on in-house erf/erfc, plus the adaptive
// quadrature that evaluates the limiting rank-probability and age-proportion
// constants.  Each constant is an integral over x in (0,inf) of an expression
// in x^{-1/2}e^{-x}, Gamma(-1/2,x) and gamma(1/2,x); the substitution x = u^2
// removes every x^{-1/2} factor, after which the integrands are smooth and
// bounded at zero and decay like exp(-c u^2) — except the one slow case
// (family p, straddling list, k = 1), whose x^{-3/2} tail is added in closed
// form with a remainder far below tolerance.
namespace recage::gamma_quad {

// Accurate to ~1e-13 relative on the whole real line: a positive-term Taylor
// series up to |t| = 2 and a continued fraction beyond.
double erf_inhouse(double t);
double erfc_inhouse(double t);

enum class GammaKind { upper, lower };

// Incomplete gamma for nu in {-1/2, +1/2} and x > 0.
//   gamma(1/2,x) = sqrt(pi) erf(sqrt(x)),  Gamma(1/2,x) = sqrt(pi) erfc(sqrt(x)),
//   Gamma(-1/2,x) = 2 x^{-1/2} e^{-x} - 2 sqrt(pi) erfc(sqrt(x)).
// The lower function at nu = -1/2 is the analytic continuation
// Gamma(-1/2) - Gamma(-1/2,x) with Gamma(-1/2) = -2 sqrt(pi).
double inc_gamma(double nu, double x, GammaKind kind);

// Adaptive Gauss-Kronrod (G7,K15) bisection on [a,b] to absolute tolerance;
// the rule is open, so f is never evaluated at the endpoints.  Throws
// QuadratureFailure when the panel budget runs out before convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels = 1 << 15);

enum class ConstantFamily { p, C };

struct ConstantSpec {
  ConstantFamily family;
  AgeVariant beta;
  int k;
  double abs_tol = 1e-7;
};

struct ConstantResult {
  double value;          // quiet NaN when divergent
  double abs_err_bound;  // requested tolerance (quadrature + analytic tail)
  bool divergent;
};

// The requested limiting constant, or a divergence flag for the one case
// whose integrand does not decay (family C, straddling list, k = 1).  The
// rank-probability family exists only for the current-age and straddling
// lists; requesting it for the completed-only list is a domain error.
ConstantResult constant(const ConstantSpec& spec);

// The u-substituted integrand behind constant(), for inspection and tests.
std::function<double(double)> constant_integrand(const ConstantSpec& spec);

struct SumReport {
  double p1_partial_sum;   // sum of (p, current_age, k) for k <= cutoff
  double c2_sum_integral;  // closed-form integral equal to sum over k >= 2
                           // of (C, straddling, k)
  double c3_sum_closed;    // closed-form integral equal to sum over k >= 1
                           // of (C, completed, k); analytically 1/2
};

SumReport sum_identities(int p1_cutoff = 40);

}  // namespace recage::gamma_quad
