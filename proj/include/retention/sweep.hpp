#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "retention/closed_form.hpp"
#include "retention/exact.hpp"
#include "retention/format.hpp"
#include "retention/simulate.hpp"
#include "retention/topology.hpp"

namespace retention {

enum class Method { closed_form, exact, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closedform";
    case Method::exact: return "exact";
    case Method::monte_carlo: return "montecarlo";
  }
  return "?";
}

inline std::optional<Method> method_from_name(const std::string& name) {
  if (name == "closedform") return Method::closed_form;
  if (name == "exact") return Method::exact;
  if (name == "montecarlo") return Method::monte_carlo;
  return std::nullopt;
}

/// The four reference topologies with known closed forms.
enum class ReferenceTopology { single, uncoupled3, triangle, linear3 };

inline std::optional<ReferenceTopology> reference_from_name(const std::string& name) {
  if (name == "single") return ReferenceTopology::single;
  if (name == "uncoupled3") return ReferenceTopology::uncoupled3;
  if (name == "triangle") return ReferenceTopology::triangle;
  if (name == "linear3") return ReferenceTopology::linear3;
  return std::nullopt;
}

inline Topology make_reference(ReferenceTopology ref, double s, double h) {
  switch (ref) {
    case ReferenceTopology::single: return single_dipole(h);
    case ReferenceTopology::uncoupled3: return uncoupled(3, h);
    case ReferenceTopology::triangle: return triangle(s, h);
    case ReferenceTopology::linear3: return chain(3, s, h);
  }
  throw std::logic_error("unreachable");
}

inline double closed_form_tau(ReferenceTopology ref, double beta_h, double beta_s) {
  switch (ref) {
    case ReferenceTopology::single: return tau_single(beta_h);
    case ReferenceTopology::uncoupled3: return tau_three_uncoupled(beta_h);
    case ReferenceTopology::triangle: return tau_triangle(beta_h, beta_s);
    case ReferenceTopology::linear3: return tau_linear(beta_h, beta_s);
  }
  throw std::logic_error("unreachable");
}

/// Parameter grid over topologies x methods x beta_h x beta_s. Topology
/// entries are reference names or paths to topology files; either way the
/// entry contributes its graph shape, and each grid point instantiates it
/// with uniform field beta_h and uniform coupling beta_s (beta folded in).
struct SweepSpec {
  std::vector<std::string> topologies;
  std::vector<Method> methods;
  std::vector<double> beta_h;
  std::vector<double> beta_s;
  std::uint64_t seed = 1;
  std::uint64_t max_events = 1'000'000'000;
  std::int64_t samples = 10'000;
};

/// Line-oriented sweep format:
///   topology <name-or-path>        repeatable
///   method <closedform|exact|montecarlo>   repeatable
///   beta_h <v1> [v2 ...]
///   beta_s_list <v1> [v2 ...]
///   beta_s_log <start> <stop> <points>     log-spaced, start > 0, points >= 2
///   seed <int> / samples <int> / max_events <int>
inline SweepSpec parse_sweep_spec(std::istream& in) {
  SweepSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "topology") {
      if (toks.size() != 2) throw ParseError("expected 'topology <name-or-path>'", lineno);
      spec.topologies.push_back(toks[1]);
    } else if (key == "method") {
      if (toks.size() != 2) throw ParseError("expected 'method <name>'", lineno);
      const auto m = method_from_name(toks[1]);
      if (!m) throw ParseError("unknown method '" + toks[1] + "'", lineno);
      spec.methods.push_back(*m);
    } else if (key == "beta_h" || key == "beta_s_list") {
      if (toks.size() < 2) throw ParseError("expected at least one value", lineno);
      auto& dst = key == "beta_h" ? spec.beta_h : spec.beta_s;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        double v = 0;
        if (!detail::parse_double(toks[k], v)) throw ParseError("bad value '" + toks[k] + "'", lineno);
        dst.push_back(v);
      }
    } else if (key == "beta_s_log") {
      long long points = 0;
      double start = 0, stop = 0;
      if (toks.size() != 4 || !detail::parse_double(toks[1], start) ||
          !detail::parse_double(toks[2], stop) || !detail::parse_int(toks[3], points))
        throw ParseError("expected 'beta_s_log <start> <stop> <points>'", lineno);
      if (start <= 0 || stop <= 0) throw ParseError("log range requires positive endpoints", lineno);
      if (points < 2) throw ParseError("log range requires at least 2 points", lineno);
      const double la = std::log(start), lb = std::log(stop);
      for (long long k = 0; k < points; ++k) {
        if (k == 0) spec.beta_s.push_back(start);           // endpoints exact
        else if (k == points - 1) spec.beta_s.push_back(stop);
        else
          spec.beta_s.push_back(
              std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(points - 1)));
      }
    } else if (key == "seed" || key == "samples" || key == "max_events") {
      long long v = 0;
      if (toks.size() != 2 || !detail::parse_int(toks[1], v) || v < 0)
        throw ParseError("expected '" + key + " <non-negative integer>'", lineno);
      if (key == "seed") spec.seed = static_cast<std::uint64_t>(v);
      else if (key == "samples") {
        if (v < 1) throw ParseError("samples must be >= 1", lineno);
        spec.samples = v;
      } else {
        if (v < 1) throw ParseError("max_events must be >= 1", lineno);
        spec.max_events = static_cast<std::uint64_t>(v);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (spec.topologies.empty() || spec.methods.empty() || spec.beta_h.empty() || spec.beta_s.empty())
    throw ParseError("empty sweep");
  return spec;
}

namespace detail {

struct SweepEntry {
  std::string label;
  std::optional<ReferenceTopology> reference;  // set for the four named shapes
  Topology shape;                              // couplings/fields overwritten per grid point
};

inline Topology instantiate(const SweepEntry& entry, double beta_s, double beta_h) {
  if (entry.reference) return make_reference(*entry.reference, beta_s, beta_h);
  Topology topo = entry.shape;
  std::fill(topo.field.begin(), topo.field.end(), beta_h);
  for (Edge& e : topo.edges) e.coupling = beta_s;
  return topo;
}

}  // namespace detail

/// Runs the sweep and writes one CSV row per grid point, in deterministic
/// order: topologies, then methods, then beta_h, then beta_s, each in spec
/// order. std_error and n_censored are empty for non-Monte-Carlo methods.
/// If `log` is given, one progress line per row is written to it.
inline void run_sweep(const SweepSpec& spec, std::ostream& csv, std::ostream* log = nullptr,
                      int n_threads = 1) {
  std::vector<detail::SweepEntry> entries;
  for (const std::string& name : spec.topologies) {
    detail::SweepEntry entry;
    entry.label = name;
    entry.reference = reference_from_name(name);
    if (!entry.reference) entry.shape = load_topology(name);
    entries.push_back(std::move(entry));
  }
  for (Method m : spec.methods) {
    if (m != Method::closed_form) continue;
    for (const auto& entry : entries)
      if (!entry.reference)
        throw ParseError("method closedform requires a reference topology, got '" + entry.label + "'");
  }

  csv << "topology,method,beta_s,beta_h,tau_events,tau_events_per_dipole,std_error,n_censored\n";
  const ModelParams params{1.0, 1.0, true};  // grid values are already beta-scaled
  for (const auto& entry : entries) {
    for (Method method : spec.methods) {
      for (double bh : spec.beta_h) {
        for (double bs : spec.beta_s) {
          std::string tau, tau_per, se, nc;
          const Topology topo = detail::instantiate(entry, bs, bh);
          if (method == Method::closed_form) {
            const double v = closed_form_tau(*entry.reference, bh, bs);
            tau = fmt_double(v);
            tau_per = fmt_double(v / topo.n);
          } else if (method == Method::exact) {
            const double v = retention_time_exact(topo, params);
            tau = fmt_double(v);
            tau_per = fmt_double(v / topo.n);
          } else {
            const SimulationConfig config{spec.seed, spec.max_events, spec.samples};
            const RetentionEstimate est = estimate_retention(topo, params, config, n_threads);
            nc = std::to_string(est.n_censored);
            if (est.has_estimate) {
              tau = fmt_double(est.mean_events);
              tau_per = fmt_double(est.mean_events / topo.n);
              se = fmt_double(est.std_error);
            }
          }
          csv << entry.label << ',' << method_name(method) << ',' << fmt_double(bs) << ','
              << fmt_double(bh) << ',' << tau << ',' << tau_per << ',' << se << ',' << nc << '\n';
          if (log)
            *log << "sweep: topology=" << entry.label << " method=" << method_name(method)
                 << " beta_s=" << fmt_double(bs) << " beta_h=" << fmt_double(bh)
                 << " tau_events=" << (tau.empty() ? "censored" : tau) << '\n';
        }
      }
    }
  }
}

}  // namespace retention
