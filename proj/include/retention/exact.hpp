#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "retention/glauber.hpp"
#include "retention/topology.hpp"

namespace retention {

/// Raised when a problem exceeds the enumeration or dense-solve limits.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when some transient state cannot reach the absorbing set, so its
/// expected hitting time is infinite and (I - Q) t = 1 has no solution.
class SingularChainError : public std::runtime_error {
 public:
  explicit SingularChainError(std::size_t state)
      : std::runtime_error("state " + std::to_string(state) +
                           " has no path to an absorbing state"),
        state_(state) {}
  std::size_t state() const { return state_; }

 private:
  std::size_t state_;
};

inline constexpr int kChainSiteCap = 20;         // 2^20 states, sparse rows
inline constexpr int kDenseSolveSiteCap = 12;    // 4096 states, dense LU

/// Embedded jump chain over all 2^n spin configurations. State x encodes spin
/// i as bit i (set = up). Row x has at most n+1 nonzeros: one per single-spin
/// resample that changes the state, plus the self-loop aggregating all
/// resamples that keep it. flip_prob[x*n + i] is the probability of moving to
/// x ^ (1 << i); self_prob[x] is the diagonal. Rows are the raw kernel — the
/// failure set is carried separately in `absorbing`.
struct ChainModel {
  int n_sites = 0;
  std::size_t n_states = 0;
  std::vector<double> flip_prob;
  std::vector<double> self_prob;
  std::vector<std::uint8_t> absorbing;

  double transition(std::size_t from, std::size_t to) const {
    if (from == to) return self_prob[from];
    const std::size_t diff = from ^ to;
    if ((diff & (diff - 1)) != 0) return 0.0;  // not Hamming distance 1
    return flip_prob[from * n_sites + std::countr_zero(diff)];
  }
};

/// Expected number of events to absorption, per state; absorbing states carry 0.
struct HittingTimeSolution {
  std::vector<double> expected_events;
};

inline ChainModel build_chain(const Topology& topo, const ModelParams& params,
                              int site_cap = kChainSiteCap) {
  validate(topo);
  if (topo.n > site_cap)
    throw CapacityError("n = " + std::to_string(topo.n) + " exceeds the chain cap of " +
                        std::to_string(site_cap) + " sites");
  ChainModel chain;
  chain.n_sites = topo.n;
  chain.n_states = std::size_t{1} << topo.n;
  chain.flip_prob.assign(chain.n_states * topo.n, 0.0);
  chain.self_prob.assign(chain.n_states, 0.0);
  chain.absorbing.assign(chain.n_states, 0);

  const double pick = 1.0 / topo.n;
  SpinState spins(topo.n);
  for (std::size_t x = 0; x < chain.n_states; ++x) {
    for (int i = 0; i < topo.n; ++i) spins[i] = (x >> i) & 1 ? +1 : -1;
    chain.absorbing[x] = is_failed(spins, params) ? 1 : 0;
    double diag = 0.0;
    for (int i = 0; i < topo.n; ++i) {
      const double delta = local_field(topo, spins, i);
      const double flip = spins[i] > 0 ? heat_bath_down_probability(delta, params.beta)
                                       : heat_bath_up_probability(delta, params.beta);
      const double keep = spins[i] > 0 ? heat_bath_up_probability(delta, params.beta)
                                       : heat_bath_down_probability(delta, params.beta);
      chain.flip_prob[x * topo.n + i] = pick * flip;
      diag += pick * keep;
    }
    chain.self_prob[x] = diag;
  }
  return chain;
}

namespace detail {

/// Reverse breadth-first search from the absorbing set; throws if some
/// transient state cannot reach it.
inline void check_absorption_reachable(const ChainModel& chain) {
  std::vector<std::uint8_t> reached(chain.n_states, 0);
  std::vector<std::size_t> queue;
  for (std::size_t x = 0; x < chain.n_states; ++x) {
    if (chain.absorbing[x]) {
      reached[x] = 1;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    const std::size_t y = queue.back();
    queue.pop_back();
    for (int i = 0; i < chain.n_sites; ++i) {
      const std::size_t x = y ^ (std::size_t{1} << i);
      if (!reached[x] && chain.flip_prob[x * chain.n_sites + i] > 0.0) {
        reached[x] = 1;
        queue.push_back(x);
      }
    }
  }
  for (std::size_t x = 0; x < chain.n_states; ++x)
    if (!reached[x]) throw SingularChainError(x);
}

}  // namespace detail

/// Solves (I - Q) t = 1 over the transient states by dense LU with partial
/// pivoting, where Q is the transient-to-transient block of the kernel.
inline HittingTimeSolution solve_hitting_times(const ChainModel& chain) {
  if (chain.n_sites > kDenseSolveSiteCap)
    throw CapacityError("dense solve is limited to " + std::to_string(kDenseSolveSiteCap) +
                        " sites (" + std::to_string(chain.n_sites) + " requested)");
  detail::check_absorption_reachable(chain);

  std::vector<std::ptrdiff_t> compact(chain.n_states, -1);
  std::vector<std::size_t> transient;
  for (std::size_t x = 0; x < chain.n_states; ++x) {
    if (!chain.absorbing[x]) {
      compact[x] = static_cast<std::ptrdiff_t>(transient.size());
      transient.push_back(x);
    }
  }

  const Eigen::Index m = static_cast<Eigen::Index>(transient.size());
  HittingTimeSolution sol;
  sol.expected_events.assign(chain.n_states, 0.0);
  if (m == 0) return sol;

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t x = transient[r];
    a(r, r) -= chain.self_prob[x];
    for (int i = 0; i < chain.n_sites; ++i) {
      const std::size_t y = x ^ (std::size_t{1} << i);
      if (compact[y] >= 0)
        a(r, static_cast<Eigen::Index>(compact[y])) -= chain.flip_prob[x * chain.n_sites + i];
    }
  }
  const Eigen::VectorXd t = a.partialPivLu().solve(Eigen::VectorXd::Ones(m));
  for (Eigen::Index r = 0; r < m; ++r) sol.expected_events[transient[r]] = t(r);
  return sol;
}

/// Expected event count from the all-up configuration.
inline double retention_time_exact(const Topology& topo, const ModelParams& params) {
  const ChainModel chain = build_chain(topo, params);
  const HittingTimeSolution sol = solve_hitting_times(chain);
  return sol.expected_events[chain.n_states - 1];
}

}  // namespace retention
