#pragma once

// Modified Bessel functions K_0, K_1, K_2 of the second kind for positive real
// argument, evaluated from the integral representation
//
//   K_j(beta) = int_0^inf cosh(j r) exp(-beta cosh r) dr
//
// in exponentially scaled form. All three orders share one set of quadrature
// nodes, so the recurrence K_2 = (2/beta) K_1 + K_0 holds to rounding level.

#include <array>
#include <cstddef>

namespace juttner::bessel {

/// Relative accuracy targeted by the cached fast path.
inline constexpr double kFastPathRelTol = 1e-13;

/// Smallest relative target accepted by reference_besselK.
inline constexpr double kMinRelTol = 1e-15;

struct BesselValue {
  int order = 0;
  double argument = 0.0;
  double value = 0.0;         // K_j(beta); underflows to 0 for large beta
  double scaled_value = 0.0;  // e^beta K_j(beta)
  double log_value = 0.0;     // ln K_j(beta)
};

/// Coherent (K_0, K_1, K_2) at a single argument, stored scaled by e^beta.
struct BesselTriple {
  double argument = 0.0;
  std::array<double, 3> scaled{};

  double value(int order) const;
  double log_value(int order) const;
  BesselValue at(int order) const;
};

struct RatioValue {
  double argument = 0.0;
  double ratio = 0.0;       // K_1/K_2
  double derivative = 0.0;  // d/dbeta (K_1/K_2) = ratio^2 + (3/beta) ratio - 1
};

/// Adaptive quadrature of all three orders to relative error target_rel_err.
/// Throws DomainError for beta <= 0, non-finite beta, or a target below
/// kMinRelTol; AccuracyError if the subdivision budget is exhausted.
BesselTriple reference_triple(double beta, double target_rel_err);

BesselValue reference_besselK(int order, double beta, double target_rel_err);

/// Memoized triple at kFastPathRelTol. Thread safe.
BesselTriple besselK_triple(double beta);

BesselValue besselK(int order, double beta);

RatioValue ratio12(double beta);

/// Upper end of the truncated integration interval for order j: the root of
/// beta (cosh r - 1) = 40 ln 10 + j r.
double truncation_point(double beta, int order);

/// Number of entries currently held by the memo cache.
std::size_t cache_size();
void clear_cache();

// Closed-form bounds -------------------------------------------------------

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Rational lower and upper bounds on K_1/K_2, valid for beta >= 1/2.
Bounds ratio_bounds(double beta);

enum class Scaling { plain, scaled };

/// sqrt(pi/2) e^{-beta}/sqrt(beta) (1 - 1/(8b)) <= K_0 <= ... (1 - 1/(8b) + 9/(128b^2)).
/// With Scaling::scaled the e^{-beta} factor is dropped.
Bounds envelope_K0(double beta, Scaling scaling = Scaling::plain);

/// 2 sqrt(pi/2) e^{-beta}/sqrt(beta) (1 + 1/(8b) - 3/(128b^2)) <= K_0 + K_1 <= ... (1 + 1/(8b)).
Bounds envelope_K0_plus_K1(double beta, Scaling scaling = Scaling::plain);

struct Sandwich {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
};

/// 1 - x^2/2 <= 1/sqrt(1+x^2) <= 1 - x^2/2 + 3x^4/8
Sandwich taylor_sandwich_invsqrt(double x);

/// 1 + x^2/2 - x^4/8 <= sqrt(1+x^2) <= 1 + x^2/2
Sandwich taylor_sandwich_sqrt(double x);

}  // namespace juttner::bessel
