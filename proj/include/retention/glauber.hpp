#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "retention/topology.hpp"

namespace retention {

/// Assignment of +1/-1 to each dipole.
using SpinState = std::vector<std::int8_t>;

struct ModelParams {
  double beta = 1.0;           // inverse temperature, >= 0
  double lambda0 = 1.0;        // per-dipole excitation rate, > 0
  bool tie_is_failure = true;  // even-n convention: magnetization 0 counts as lost
};

inline SpinState all_up(int n) { return SpinState(static_cast<std::size_t>(n), +1); }

inline int magnetization(const SpinState& state) {
  int m = 0;
  for (std::int8_t s : state) m += s;
  return m;
}

/// The stored bit is lost once the majority of dipoles has flipped.
inline bool is_failed(const SpinState& state, const ModelParams& params) {
  const int m = magnetization(state);
  return m < 0 || (m == 0 && params.tie_is_failure);
}

/// Configuration energy: -sum_i H_i A_i - sum_{(i,j)} s_ij A_i A_j.
inline double energy(const Topology& topo, const SpinState& state) {
  if (static_cast<int>(state.size()) != topo.n)
    throw std::invalid_argument("state length does not match topology");
  double e = 0.0;
  for (int i = 0; i < topo.n; ++i) e -= topo.field[i] * state[i];
  for (const Edge& ed : topo.edges) e -= ed.coupling * state[ed.i] * state[ed.j];
  return e;
}

/// Local field at node i: H_i + sum over neighbors j of s_ij A_j. Equals half
/// the energy gap between spin i forced down and forced up.
inline double local_field(const Topology& topo, const SpinState& state, int i) {
  if (i < 0 || i >= topo.n) throw std::out_of_range("node index out of range");
  if (static_cast<int>(state.size()) != topo.n)
    throw std::invalid_argument("state length does not match topology");
  double delta = topo.field[i];
  for (const Edge& ed : topo.edges) {
    if (ed.i == i) delta += ed.coupling * state[ed.j];
    else if (ed.j == i) delta += ed.coupling * state[ed.i];
  }
  return delta;
}

/// Probability that a resampled spin comes out +1 given local field delta:
/// e^{beta*delta} / (e^{beta*delta} + e^{-beta*delta}), independent of the
/// spin's previous value. Evaluated as a logistic with only non-positive
/// exponents so large |beta*delta| saturates instead of overflowing.
inline double heat_bath_up_probability(double delta, double beta) {
  const double x = 2.0 * beta * delta;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Complement of the up-probability, evaluated directly. Never compute it as
/// 1 - up: that cancels to noise once the up-probability saturates, and tiny
/// down-probabilities are exactly the regime of long retention times.
inline double heat_bath_down_probability(double delta, double beta) {
  return heat_bath_up_probability(-delta, beta);
}

}  // namespace retention
