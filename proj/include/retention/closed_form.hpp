#pragma once

#include <cmath>
#include <limits>

#include "retention/glauber.hpp"

namespace retention {

/// Closed-form expected retention times (in events of the embedded jump
/// chain) for the four reference topologies, as functions of the normalized
/// field beta_h = beta*H and coupling beta_s = beta*s. Shares the
/// overflow-safe logistic with the simulation kernel so large couplings
/// saturate cleanly instead of overflowing.

namespace detail {

/// Resampling probabilities at beta*Delta = x.
inline double down_prob(double x) { return heat_bath_down_probability(x, 1.0); }
inline double up_prob(double x) { return heat_bath_up_probability(x, 1.0); }

inline constexpr double kDenominatorFloor = 1e-300;

}  // namespace detail

/// Single dipole: tau = e^{2 beta_h} + 1.
inline double tau_single(double beta_h) { return std::exp(2.0 * beta_h) + 1.0; }

/// Three uncoupled dipoles: tau = (1+e^{2 beta_h})^2 / 2 + 2 (1+e^{2 beta_h}).
inline double tau_three_uncoupled(double beta_h) {
  const double u = 1.0 + std::exp(2.0 * beta_h);
  return 0.5 * u * u + 2.0 * u;
}

/// Three dipoles on a triangle with uniform coupling. Hitting time of the
/// lumped up-count chain, assembled from the single-flip resampling
/// probabilities and evaluated as a guarded rational expression: the
/// denominator vanishes as beta_s grows, where tau legitimately diverges, so
/// underflow reports +infinity rather than NaN.
inline double tau_triangle(double beta_h, double beta_s) {
  const double p32 = detail::down_prob(2.0 * beta_s + beta_h);
  const double p21 = (2.0 / 3.0) * detail::down_prob(beta_h);
  const double p23 = (1.0 / 3.0) * detail::up_prob(2.0 * beta_s + beta_h);
  // tau = (p32 - p22 + 1) / ((1-p33)(1-p22) - p32 p23), rearranged through the
  // row identities p33 = 1 - p32 and p22 = 1 - p21 - p23 so that no small
  // probability is recovered from a saturated complement.
  const double num = p32 + p21 + p23;
  const double den = p32 * p21;
  if (den < detail::kDenominatorFloor) return std::numeric_limits<double>::infinity();
  return num / den;
}

/// Three dipoles in a line (middle node coupled to both ends). States are
/// tracked as (middle up?, #boundary up); the failure set is every state with
/// at least two spins down. Same denominator guard as tau_triangle.
inline double tau_linear(double beta_h, double beta_s) {
  // from (1,2): all up
  const double to_02 = (1.0 / 3.0) * detail::down_prob(2.0 * beta_s + beta_h);
  const double to_11 = (2.0 / 3.0) * detail::down_prob(beta_s + beta_h);
  // from (0,2): middle down
  const double back_02 = (1.0 / 3.0) * detail::up_prob(2.0 * beta_s + beta_h);
  const double fail_02 = (2.0 / 3.0) * detail::down_prob(beta_h - beta_s);
  const double exit_02 = back_02 + fail_02;  // 1 - self-loop, summed directly
  // from (1,1): one boundary down
  const double back_11 = (1.0 / 3.0) * detail::up_prob(beta_s + beta_h);
  const double fail_11 = (1.0 / 3.0) * detail::down_prob(beta_s + beta_h) +
                         (1.0 / 3.0) * detail::down_prob(beta_h);
  const double exit_11 = back_11 + fail_11;

  // tau = (to_11/exit_11 + to_02/exit_02 + 1)
  //     / (to_11 (1 - back_11/exit_11) + to_02 (1 - back_02/exit_02)), with
  // 1 - back/exit folded to fail/exit to keep the denominator cancellation-free.
  const double num = to_11 / exit_11 + to_02 / exit_02 + 1.0;
  const double den = to_11 * (fail_11 / exit_11) + to_02 * (fail_02 / exit_02);
  if (den < detail::kDenominatorFloor) return std::numeric_limits<double>::infinity();
  return num / den;
}

/// tau_triangle / tau_linear. Grows like exp(2 beta_s) at large coupling
/// (both numerator and denominator settle into their exponential regimes);
/// equals 1 exactly at beta_s = 0.
inline double tau_ratio_triangle_over_linear(double beta_h, double beta_s) {
  if (beta_s == 0.0) return 1.0;
  return tau_triangle(beta_h, beta_s) / tau_linear(beta_h, beta_s);
}

}  // namespace retention
