#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "retention/glauber.hpp"
#include "retention/rng.hpp"
#include "retention/topology.hpp"

namespace retention {

struct SimulationConfig {
  std::uint64_t seed = 1;
  std::uint64_t max_events = 1'000'000'000;  // censoring cap per trajectory
  std::int64_t n_samples = 10'000;
};

struct FirstPassage {
  std::uint64_t events = 0;
  bool censored = false;
};

/// Monte Carlo estimate of the expected retention time. Events are counted on
/// the embedded jump chain; wall-clock time is events / (n * lambda0) because
/// every event has the same exponential holding rate regardless of state.
struct RetentionEstimate {
  double mean_events = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double mean_time = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n_samples = 0;
  std::int64_t n_censored = 0;
  bool has_estimate = false;  // false when every trajectory was censored
};

/// One excitation event: a node chosen uniformly at random resamples its spin
/// from the heat-bath distribution of its local field. Returns the excited
/// node. Resampling to the same value is a legitimate event.
inline int step(const Topology& topo, SpinState& state, const ModelParams& params,
                std::mt19937_64& rng) {
  const int i = uniform_index(rng, topo.n);
  const double up = heat_bath_up_probability(local_field(topo, state, i), params.beta);
  state[i] = uniform_unit(rng) < up ? +1 : -1;
  return i;
}

namespace detail {

/// Flattened adjacency for the trajectory inner loop.
struct FlatAdjacency {
  int n = 0;
  std::vector<int> offset;  // size n+1
  std::vector<int> neighbor;
  std::vector<double> coupling;
  std::vector<double> field;

  explicit FlatAdjacency(const Topology& topo)
      : n(topo.n), offset(topo.n + 1, 0), field(topo.field) {
    for (const Edge& e : topo.edges) {
      ++offset[e.i + 1];
      ++offset[e.j + 1];
    }
    for (int i = 0; i < n; ++i) offset[i + 1] += offset[i];
    neighbor.resize(offset[n]);
    coupling.resize(offset[n]);
    std::vector<int> fill(offset.begin(), offset.end() - 1);
    for (const Edge& e : topo.edges) {
      neighbor[fill[e.i]] = e.j;
      coupling[fill[e.i]++] = e.coupling;
      neighbor[fill[e.j]] = e.i;
      coupling[fill[e.j]++] = e.coupling;
    }
  }

  double local_field(const SpinState& state, int i) const {
    double delta = field[i];
    for (int k = offset[i]; k < offset[i + 1]; ++k) delta += coupling[k] * state[neighbor[k]];
    return delta;
  }
};

/// Runs one trajectory from all-up until failure or the event cap. Draws per
/// event: one engine output for the node (rejection sampled), one for the
/// resampled spin — identical to step().
inline FirstPassage run_trajectory(const FlatAdjacency& adj, const ModelParams& params,
                                   std::uint64_t seed, std::uint64_t max_events) {
  std::mt19937_64 rng(seed);
  SpinState spins = all_up(adj.n);
  int mag = adj.n;
  for (std::uint64_t ev = 1; ev <= max_events; ++ev) {
    const int i = uniform_index(rng, adj.n);
    const double up = heat_bath_up_probability(adj.local_field(spins, i), params.beta);
    const std::int8_t nv = uniform_unit(rng) < up ? +1 : -1;
    mag += nv - spins[i];
    spins[i] = nv;
    if (mag < 0 || (mag == 0 && params.tie_is_failure)) return {ev, false};
  }
  return {max_events, true};
}

}  // namespace detail

/// Event count until the stored bit is first lost, starting from all spins up.
/// Returns a censored marker when max_events is reached first.
inline FirstPassage first_passage_events(const Topology& topo, const ModelParams& params,
                                         std::uint64_t seed, std::uint64_t max_events) {
  if (max_events < 1) throw std::invalid_argument("max_events must be >= 1");
  return detail::run_trajectory(detail::FlatAdjacency(topo), params, seed, max_events);
}

/// Runs config.n_samples independent trajectories; sample k is seeded with
/// sample_seed(config.seed, k), so the estimate is a pure function of its
/// arguments and identical for serial and parallel execution. Censored
/// trajectories are excluded from the mean and reported in n_censored.
inline RetentionEstimate estimate_retention(const Topology& topo, const ModelParams& params,
                                            const SimulationConfig& config, int n_threads = 1) {
  if (config.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (config.max_events < 1) throw std::invalid_argument("max_events must be >= 1");
  if (params.lambda0 <= 0) throw std::invalid_argument("lambda0 must be > 0");
  const detail::FlatAdjacency adj(topo);
  const std::int64_t n = config.n_samples;
  std::vector<std::uint64_t> events(n);
  std::vector<std::uint8_t> censored(n);

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k) {
      const FirstPassage fp =
          detail::run_trajectory(adj, params, sample_seed(config.seed, k), config.max_events);
      events[k] = fp.events;
      censored[k] = fp.censored ? 1 : 0;
    }
  };

  if (n_threads <= 1) {
    run_range(0, n);
  } else {
    const int workers = static_cast<int>(std::min<std::int64_t>(n_threads, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, n * w / workers, n * (w + 1) / workers);
    for (std::thread& t : pool) t.join();
  }

  RetentionEstimate est;
  est.n_samples = n;
  std::uint64_t total = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    if (censored[k]) ++est.n_censored;
    else total += events[k];
  }
  const std::int64_t n_used = n - est.n_censored;
  if (n_used == 0) return est;

  est.has_estimate = true;
  est.mean_events = static_cast<double>(total) / static_cast<double>(n_used);
  double ss = 0.0;  // fixed index order: result independent of thread scheduling
  for (std::int64_t k = 0; k < n; ++k) {
    if (censored[k]) continue;
    const double d = static_cast<double>(events[k]) - est.mean_events;
    ss += d * d;
  }
  est.std_error =
      n_used > 1 ? std::sqrt(ss / (static_cast<double>(n_used - 1) * n_used)) : 0.0;
  est.mean_time = est.mean_events / (topo.n * params.lambda0);
  return est;
}

}  // namespace retention
