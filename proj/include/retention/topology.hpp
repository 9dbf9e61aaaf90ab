#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace retention {

/// Raised when a topology or sweep-spec file cannot be parsed. `line` is the
/// 1-based offending line (0 when the error is not tied to a specific line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised when an output path cannot be opened for writing.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected coupling between dipoles i and j (stored with i < j).
struct Edge {
  int i = 0;
  int j = 0;
  double coupling = 0.0;
};

/// Undirected graph of dipoles with per-edge couplings and per-node fields.
/// Couplings and fields are in energy units; they may be negative.
struct Topology {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<double> field;  // size n
};

/// Checks the structural invariants: n >= 1, field sized n, edge indices in
/// [0, n) with i < j, no self-loops, each unordered pair at most once.
inline void validate(const Topology& topo) {
  if (topo.n < 1) throw std::invalid_argument("topology needs at least one node");
  if (static_cast<int>(topo.field.size()) != topo.n)
    throw std::invalid_argument("field vector size does not match node count");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : topo.edges) {
    if (e.i < 0 || e.j < 0 || e.i >= topo.n || e.j >= topo.n)
      throw std::invalid_argument("edge index out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loops are not allowed");
    if (e.i > e.j) throw std::invalid_argument("edges must be stored with i < j");
    if (!seen.insert({e.i, e.j}).second)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
  }
}

inline Topology make_topology(int n, std::vector<Edge> edges, double uniform_field) {
  Topology topo;
  topo.n = n;
  for (Edge& e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  topo.edges = std::move(edges);
  topo.field.assign(static_cast<std::size_t>(std::max(n, 0)), uniform_field);
  validate(topo);
  return topo;
}

inline Topology single_dipole(double h) { return make_topology(1, {}, h); }

inline Topology uncoupled(int n, double h) { return make_topology(n, {}, h); }

inline Topology triangle(double s, double h) {
  return make_topology(3, {{0, 1, s}, {0, 2, s}, {1, 2, s}}, h);
}

/// Path graph 0-1-...-(n-1).
inline Topology chain(int n, double s, double h) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, s});
  return make_topology(n, std::move(edges), h);
}

namespace detail {

inline bool parse_int(const std::string& tok, long long& out) {
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

inline bool parse_double(const std::string& tok, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

inline std::vector<std::string> tokenize_line(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  std::istringstream is(line);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

}  // namespace detail

/// Parses the line-oriented topology format:
///   n <count>                 node count, must appear first and only once
///   h <value>                 uniform field on all nodes
///   h <node> <value>          field on one node
///   edge <i> <j> <coupling>   undirected coupling, each pair at most once
/// `#` starts a comment; blank lines are ignored; unknown keys are errors.
inline Topology parse_topology(std::istream& in) {
  Topology topo;
  bool have_n = false;
  std::string line;
  int lineno = 0;
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "n") {
      if (have_n) throw ParseError("'n' declared twice", lineno);
      long long n = 0;
      if (toks.size() != 2 || !detail::parse_int(toks[1], n) || n < 1)
        throw ParseError("expected 'n <positive integer>'", lineno);
      topo.n = static_cast<int>(n);
      topo.field.assign(topo.n, 0.0);
      have_n = true;
    } else if (key == "h") {
      if (!have_n) throw ParseError("'h' before 'n'", lineno);
      if (toks.size() == 2) {
        double v = 0;
        if (!detail::parse_double(toks[1], v)) throw ParseError("bad field value", lineno);
        std::fill(topo.field.begin(), topo.field.end(), v);
      } else if (toks.size() == 3) {
        long long node = 0;
        double v = 0;
        if (!detail::parse_int(toks[1], node) || !detail::parse_double(toks[2], v))
          throw ParseError("expected 'h <node> <value>'", lineno);
        if (node < 0 || node >= topo.n) throw ParseError("node index out of range", lineno);
        topo.field[static_cast<std::size_t>(node)] = v;
      } else {
        throw ParseError("expected 'h <value>' or 'h <node> <value>'", lineno);
      }
    } else if (key == "edge") {
      if (!have_n) throw ParseError("'edge' before 'n'", lineno);
      long long i = 0, j = 0;
      double s = 0;
      if (toks.size() != 4 || !detail::parse_int(toks[1], i) || !detail::parse_int(toks[2], j) ||
          !detail::parse_double(toks[3], s))
        throw ParseError("expected 'edge <i> <j> <coupling>'", lineno);
      if (i < 0 || j < 0 || i >= topo.n || j >= topo.n)
        throw ParseError("edge index out of range", lineno);
      if (i == j) throw ParseError("self-loop not allowed", lineno);
      Edge e{static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j)), s};
      if (!seen.insert({e.i, e.j}).second) throw ParseError("duplicate edge", lineno);
      topo.edges.push_back(e);
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (!have_n) throw ParseError("missing 'n' declaration");
  validate(topo);
  return topo;
}

inline Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topology file '" + path + "'");
  try {
    return parse_topology(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

}  // namespace retention
