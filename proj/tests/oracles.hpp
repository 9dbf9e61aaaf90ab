// Test-only oracles, independent of the solver paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "retention/exact.hpp"
#include "retention/topology.hpp"

namespace retention::testing {

struct ValueIterationResult {
  std::vector<double> expected_events;  // per state, 0 at absorbing
  double residual = 0.0;                // relative infinity-norm of t - (1 + Q t)
  long iterations = 0;
};

inline double hitting_residual(const ChainModel& chain, const std::vector<double>& t) {
  double worst = 0.0, scale = 1.0;
  for (std::size_t x = 0; x < chain.n_states; ++x) {
    if (chain.absorbing[x]) continue;
    double rhs = 1.0 + chain.self_prob[x] * t[x];
    for (int i = 0; i < chain.n_sites; ++i) {
      const std::size_t y = x ^ (std::size_t{1} << i);
      if (!chain.absorbing[y]) rhs += chain.flip_prob[x * chain.n_sites + i] * t[y];
    }
    worst = std::max(worst, std::abs(t[x] - rhs));
    scale = std::max(scale, std::abs(t[x]));
  }
  return worst / scale;
}

/// Long-horizon dynamic programming t_{k+1} = 1 + Q t_k from t_0 = 0,
/// iterated until the fixed-point residual drops below `tol`.
inline ValueIterationResult value_iteration(const ChainModel& chain, double tol = 1e-12,
                                            long max_iterations = 20'000'000) {
  ValueIterationResult res;
  res.expected_events.assign(chain.n_states, 0.0);
  std::vector<double> next(chain.n_states, 0.0);
  for (long it = 1; it <= max_iterations; ++it) {
    for (std::size_t x = 0; x < chain.n_states; ++x) {
      if (chain.absorbing[x]) continue;
      double v = 1.0 + chain.self_prob[x] * res.expected_events[x];
      for (int i = 0; i < chain.n_sites; ++i) {
        const std::size_t y = x ^ (std::size_t{1} << i);
        if (!chain.absorbing[y]) v += chain.flip_prob[x * chain.n_sites + i] * res.expected_events[y];
      }
      next[x] = v;
    }
    res.expected_events.swap(next);
    res.iterations = it;
    if (it % 16 == 0 || it == max_iterations) {
      res.residual = hitting_residual(chain, res.expected_events);
      if (res.residual <= tol) return res;
    }
  }
  throw std::runtime_error("value iteration did not reach the requested residual");
}

/// Random connected-ish topology for property tests: each pair becomes an
/// edge with probability `edge_prob`, couplings and fields uniform in
/// [-range, range].
inline Topology random_topology(std::mt19937_64& rng, int n, double range, double edge_prob = 0.5) {
  std::uniform_real_distribution<double> val(-range, range);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Topology topo;
  topo.n = n;
  topo.field.resize(n);
  for (int i = 0; i < n; ++i) topo.field[i] = val(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unit(rng) < edge_prob) topo.edges.push_back({i, j, val(rng)});
  validate(topo);
  return topo;
}

}  // namespace retention::testing
