#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "retention/exact.hpp"
#include "retention/format.hpp"
#include "retention/simulate.hpp"
#include "retention/sweep.hpp"
#include "retention/topology.hpp"

namespace retention {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitAllCensored = 4;
inline constexpr int kExitIo = 5;

struct SolveOptions {
  std::string topology_path;
  double beta = 1.0;
  std::optional<double> h_override;  // replaces every node field before beta scaling
  bool tie_is_failure = true;
};

struct FormulaOptions {
  std::string name;  // single | uncoupled3 | triangle | linear3
  double beta_h = 0.0;
  double beta_s = 0.0;
};

struct SimulateOptions {
  std::string topology_path;
  double beta = 1.0;
  std::optional<double> h_override;
  bool tie_is_failure = true;
  std::uint64_t seed = 1;
  std::int64_t samples = 10'000;
  std::uint64_t max_events = 1'000'000'000;
  int threads = 1;
};

struct SweepOptions {
  std::string spec_path;
  std::string output_csv;
  int threads = 1;
};

namespace detail {

template <typename Fn>
int guard(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const SingularChainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

inline Topology load_with_override(const std::string& path, const std::optional<double>& h) {
  Topology topo = load_topology(path);
  if (h) std::fill(topo.field.begin(), topo.field.end(), *h);
  return topo;
}

inline void print_tau(std::ostream& out, double events, int n) {
  out << "events=" << fmt_double(events) << '\n';
  out << "events_per_dipole=" << fmt_double(events / n) << '\n';
  out << "time_lambda0=" << fmt_double(events / n) << '\n';
}

}  // namespace detail

/// Exact expected retention time of a topology file, printed as raw events,
/// events per dipole, and time multiplied by lambda0.
inline int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guard(err, [&] {
    const Topology topo = detail::load_with_override(opt.topology_path, opt.h_override);
    const ModelParams params{opt.beta, 1.0, opt.tie_is_failure};
    detail::print_tau(out, retention_time_exact(topo, params), topo.n);
    return kExitOk;
  });
}

/// Closed-form retention time of one of the reference topologies.
inline int cmd_formula(const FormulaOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guard(err, [&] {
    const auto ref = reference_from_name(opt.name);
    if (!ref) throw ParseError("unknown topology name '" + opt.name +
                               "' (expected single, uncoupled3, triangle or linear3)");
    const Topology shape = make_reference(*ref, opt.beta_s, opt.beta_h);
    detail::print_tau(out, closed_form_tau(*ref, opt.beta_h, opt.beta_s), shape.n);
    return kExitOk;
  });
}

/// Monte Carlo retention estimate for a topology file. Deterministic for
/// fixed options, including across thread counts.
inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guard(err, [&] {
    const Topology topo = detail::load_with_override(opt.topology_path, opt.h_override);
    const ModelParams params{opt.beta, 1.0, opt.tie_is_failure};
    const SimulationConfig config{opt.seed, opt.max_events, opt.samples};
    const RetentionEstimate est = estimate_retention(topo, params, config, opt.threads);
    if (!est.has_estimate) {
      err << "error: all " << est.n_censored << " trajectories hit the cap of "
          << opt.max_events << " events; no estimate\n";
      return kExitAllCensored;
    }
    out << "mean_events=" << fmt_double(est.mean_events) << '\n';
    out << "std_error=" << fmt_double(est.std_error) << '\n';
    out << "n_samples=" << est.n_samples << '\n';
    out << "n_censored=" << est.n_censored << '\n';
    out << "mean_time_lambda0=" << fmt_double(est.mean_time * params.lambda0) << '\n';
    return kExitOk;
  });
}

/// Runs a sweep spec and writes the CSV. Progress goes to `err`, one line per
/// grid point.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& err) {
  return detail::guard(err, [&] {
    std::ifstream in(opt.spec_path);
    if (!in) throw ParseError("cannot open sweep spec '" + opt.spec_path + "'");
    SweepSpec spec;
    try {
      spec = parse_sweep_spec(in);
    } catch (const ParseError& e) {
      throw ParseError(opt.spec_path + ": " + e.what());
    }
    std::ofstream csv(opt.output_csv);
    if (!csv) throw IoError("cannot open '" + opt.output_csv + "' for writing");
    run_sweep(spec, csv, &err, opt.threads);
    if (!csv) throw IoError("write failed on '" + opt.output_csv + "'");
    return kExitOk;
  });
}

}  // namespace retention
