#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sqtsp/errors.hpp"
#include "sqtsp/graph.hpp"
#include "sqtsp/mincut.hpp"
#include "sqtsp/rational.hpp"
#include "sqtsp/simplex.hpp"

namespace sqtsp {

/// An LP(G) solution: one x-value per edge of the graph it was solved on.
struct LpSolution {
  std::vector<Rational> x;
  Rational value;               // sum of x
  Rational eps;                 // value = (1 + eps) * n
  std::vector<Rational> excess;  // x(delta(v)) - 2

  // Solver diagnostics (not serialized).
  int rounds = 0;
  int cuts_added = 0;
  std::size_t pivots = 0;
};

inline std::vector<Rational> excesses(const Graph& g, const std::vector<Rational>& x) {
  std::vector<Rational> out(g.num_vertices(), Rational(-2));
  for (int e = 0; e < g.num_edges(); ++e) {
    out[g.edge(e).u] += x[e];
    out[g.edge(e).v] += x[e];
  }
  return out;
}

inline std::vector<Rational> excesses(const Graph& g, const LpSolution& sol) { return excesses(g, sol.x); }

/// Fills value, eps and excess from x.
inline LpSolution make_solution(const Graph& g, std::vector<Rational> x) {
  LpSolution s;
  s.x = std::move(x);
  s.value = 0;
  for (const auto& v : s.x) s.value += v;
  s.eps = s.value / g.num_vertices() - 1;
  s.excess = excesses(g, s.x);
  return s;
}

inline bool is_heavy(const LpSolution& sol, int v) { return sol.excess[v] > 0; }

inline Rational cut_value(const Graph& g, const std::vector<Rational>& x, const std::vector<char>& in_set) {
  Rational total(0);
  for (int e = 0; e < g.num_edges(); ++e)
    if (in_set[g.edge(e).u] != in_set[g.edge(e).v]) total += x[e];
  return total;
}

/// Exact global minimum cut of the x-weighted graph. Weights are scaled to a
/// common denominator so that the search runs on integers.
inline CutResult<Rational> global_min_cut(const Graph& g, const std::vector<Rational>& x) {
  mpz_class den = 1;
  for (const auto& v : x)
    if (v != 0) den = lcm(den, v.get_den());
  std::vector<mpz_class> scaled(x.size());
  mpz_class total = 0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    scaled[e] = x[e].get_num() * (den / x[e].get_den());
    total += scaled[e];
  }
  const int n = g.num_vertices();
  if (total < mpz_class(std::numeric_limits<std::int64_t>::max() / 4) && total >= 0) {
    std::vector<WeightedEdge<std::int64_t>> edges;
    for (int e = 0; e < g.num_edges(); ++e)
      if (scaled[e] != 0) edges.push_back({g.edge(e).u, g.edge(e).v, scaled[e].get_si()});
    auto cut = stoer_wagner_min_cut<std::int64_t>(n, edges);
    Rational value(mpz_class(cut.value), den);
    value.canonicalize();
    return {value, std::move(cut.side)};
  }
  std::vector<WeightedEdge<mpz_class>> edges;
  for (int e = 0; e < g.num_edges(); ++e)
    if (scaled[e] != 0) edges.push_back({g.edge(e).u, g.edge(e).v, scaled[e]});
  auto cut = stoer_wagner_min_cut<mpz_class>(n, edges);
  Rational value(cut.value, den);
  value.canonicalize();
  return {value, std::move(cut.side)};
}

struct SolveOptions {
  /// Add 0 <= x <= 1. Optimal value is unchanged on 2-edge-connected graphs.
  bool box = true;
  /// Cutting-plane round cap; negative means 10 * n.
  int round_cap = -1;
};

namespace detail {

inline std::vector<std::pair<int, Rational>> cut_row(const Graph& g, const std::vector<char>& in_set) {
  std::vector<std::pair<int, Rational>> row;
  for (int e = 0; e < g.num_edges(); ++e)
    if (in_set[g.edge(e).u] != in_set[g.edge(e).v]) row.emplace_back(e, Rational(1));
  return row;
}

inline DualSimplex<Rational> make_lp(const Graph& g, bool box) {
  std::vector<Rational> cost(g.num_edges(), Rational(1));
  std::vector<std::optional<Rational>> upper(g.num_edges());
  if (box)
    for (auto& u : upper) u = Rational(1);
  return DualSimplex<Rational>(std::move(cost), std::move(upper));
}

}  // namespace detail

/// Optimal extreme point of LP(G) by cutting planes: start from the degree
/// constraints, separate with an exact global min cut, add the minimum cut
/// while it is below 2.
inline LpSolution solve_lp(const Graph& g, const SolveOptions& opts = {}) {
  const int n = g.num_vertices();
  if (n < 3) throw InputError("solve_lp needs n >= 3");
  if (!is_connected(g)) throw InfeasibleError("LP(G) is infeasible: graph is disconnected");
  auto lp = detail::make_lp(g, opts.box);
  for (int v = 0; v < n; ++v) {
    std::vector<char> in(n, 0);
    in[v] = 1;
    lp.add_row(detail::cut_row(g, in), Rational(2));
  }
  const int cap = opts.round_cap >= 0 ? opts.round_cap : 10 * n;
  int rounds = 0, cuts = 0;
  while (true) {
    if (rounds >= cap) throw InvariantViolation("lp.round_cap", std::to_string(cap) + " cutting-plane rounds without convergence");
    ++rounds;
    if (lp.solve() == LpStatus::Infeasible) throw InfeasibleError("LP(G) is infeasible (graph not 2-edge-connected?)");
    auto x = lp.primal();
    auto cut = global_min_cut(g, x);
    if (cut.value >= 2) {
      LpSolution sol = make_solution(g, std::move(x));
      sol.rounds = rounds;
      sol.cuts_added = cuts;
      sol.pivots = lp.pivots();
      return sol;
    }
    std::vector<char> in(n, 0);
    for (int v : cut.side) in[v] = 1;
    lp.add_row(detail::cut_row(g, in), Rational(2));
    ++cuts;
  }
}

/// LP(G) with every cut constraint written out explicitly. Exponential in n;
/// an audit route independent of separation.
inline LpSolution solve_lp_by_enumeration(const Graph& g, bool box = false) {
  const int n = g.num_vertices();
  if (n < 2 || n > 16) throw InputError("enumeration LP supports 2 <= n <= 16");
  auto lp = detail::make_lp(g, box);
  // Every nonempty proper S up to complement: S contains vertex n-1.
  for (std::uint32_t mask = 0; mask + 1 < (1u << (n - 1)); ++mask) {
    std::vector<char> in(n, 0);
    for (int v = 0; v + 1 < n; ++v) in[v] = static_cast<char>((mask >> v) & 1u);
    in[n - 1] = 1;
    lp.add_row(detail::cut_row(g, in), Rational(2));
  }
  if (lp.solve() == LpStatus::Infeasible) throw InfeasibleError("LP(G) is infeasible");
  LpSolution sol = make_solution(g, lp.primal());
  sol.rounds = 1;
  sol.pivots = lp.pivots();
  return sol;
}

struct RestrictResult {
  Graph graph;
  LpSolution solution;
  /// edge_map[e] is the id of support edge e in the input graph.
  std::vector<int> edge_map;
  int iterations = 0;
};

/// Drops zero edges and re-solves on the support until the solver returns a
/// solution with full support. Vertex ids are unchanged (every vertex keeps
/// x(delta(v)) >= 2).
inline RestrictResult restrict_to_support(const Graph& g, const LpSolution& sol, const SolveOptions& opts = {}) {
  RestrictResult r{g, sol, {}, 0};
  r.edge_map.resize(g.num_edges());
  std::iota(r.edge_map.begin(), r.edge_map.end(), 0);
  while (true) {
    std::vector<int> keep;
    for (int e = 0; e < r.graph.num_edges(); ++e)
      if (r.solution.x[e] != 0) keep.push_back(e);
    if (static_cast<int>(keep.size()) == r.graph.num_edges()) return r;
    ++r.iterations;
    std::vector<Edge> edges;
    std::vector<int> map;
    for (int e : keep) {
      edges.push_back(r.graph.edge(e));
      map.push_back(r.edge_map[e]);
    }
    Graph support(g.num_vertices(), std::move(edges));
    LpSolution next = solve_lp(support, opts);
    if (next.value != r.solution.value)
      throw InvariantViolation("lp.restrict_value", "value changed from " + to_string(r.solution.value) + " to " +
                                                        to_string(next.value) + " on restriction");
    r.graph = std::move(support);
    r.solution = std::move(next);
    r.edge_map = std::move(map);
  }
}

struct NormalizeStats {
  int transfers = 0;
  int decreases = 0;
};

namespace detail {

inline bool is_two_edge_connected(const Graph& g) {
  if (!is_connected(g)) return false;
  for (const auto& block : biconnected_components(g).blocks)
    if (block.size() == 1) return false;
  return true;
}

}  // namespace detail

/// Rewrites a feasible solution so that every x_e <= 1 without changing any
/// cut from feasible to infeasible. Value moves from an edge above 1 to
/// another edge of its unique tight cut; an edge in no tight cut is lowered.
inline LpSolution normalize_below_one(const Graph& g, const LpSolution& sol, NormalizeStats* stats = nullptr) {
  const int n = g.num_vertices();
  // Mass may move onto edges with x = 0, so only G itself must be bridgeless.
  if (!detail::is_two_edge_connected(g)) throw InputError("normalize_below_one: graph is not 2-edge-connected");
  std::vector<Rational> x = sol.x;
  NormalizeStats local;
  NormalizeStats& st = stats ? *stats : local;

  auto weighted = [&](int merge_from, int merge_into) {
    std::vector<WeightedEdge<Rational>> edges;
    for (int e = 0; e < g.num_edges(); ++e) {
      if (x[e] == 0) continue;
      int a = g.edge(e).u, b = g.edge(e).v;
      if (a == merge_from) a = merge_into;
      if (b == merge_from) b = merge_into;
      edges.push_back({a, b, x[e]});
    }
    return edges;
  };

  const long cap = 10L * g.num_edges() * g.num_edges() + 100;
  for (long iter = 0;; ++iter) {
    if (iter > cap) throw InvariantViolation("lemma2.iteration_cap", "normalization did not terminate");
    int e = -1;
    for (int k = 0; k < g.num_edges(); ++k)
      if (x[k] > 1) {
        e = k;
        break;
      }
    if (e < 0) break;
    const int u = g.edge(e).u, v = g.edge(e).v;
    auto all = weighted(-1, -1);
    auto cut = min_st_cut<Rational>(n, all, u, v);
    if (cut.value < 2) throw InputError("normalize_below_one: input violates a cut constraint");
    if (cut.value > 2) {
      Rational dec = min(x[e] - 1, cut.value - 2);
      x[e] -= dec;
      ++st.decreases;
      continue;
    }
    std::vector<char> in(n, 0);
    for (int w : cut.side) in[w] = 1;
    int f = -1;
    for (int k = 0; k < g.num_edges(); ++k)
      if (k != e && in[g.edge(k).u] != in[g.edge(k).v] && x[k] < 1) {
        f = k;
        break;
      }
    if (f < 0)
      throw InvariantViolation("lemma2.no_partner_edge", "tight cut around edge " + std::to_string(e) + " has no edge below 1");
    // Cuts that separate e's endpoints but keep f's endpoints together lose
    // value under the transfer; the smallest of them bounds the step.
    const int p = g.edge(f).u, q = g.edge(f).v;
    auto merged = weighted(q, p);
    int su = u == q ? p : u, sv = v == q ? p : v;
    auto other = min_st_cut<Rational>(n, merged, su, sv);
    Rational slack = other.value - 2;
    if (slack <= 0)
      throw InvariantViolation("lemma2.two_tight_cuts", "edge " + std::to_string(e) + " (" + std::to_string(u) + "," +
                                                            std::to_string(v) + ") with x=" + to_string(x[e]) +
                                                            " lies in two tight cuts");
    Rational step = min(min(x[e] - 1, 1 - x[f]), slack);
    x[e] -= step;
    x[f] += step;
    ++st.transfers;
  }
  LpSolution out = make_solution(g, std::move(x));
  out.rounds = sol.rounds;
  out.cuts_added = sol.cuts_added;
  out.pivots = sol.pivots;
  return out;
}

// ---------------------------------------------------------------------------
// JSON: {"n":..., "value":"p/q", "eps":"p/q", "x":[["u","v","p/q"], ...]}

inline nlohmann::ordered_json lp_solution_to_json(const Graph& g, const LpSolution& sol) {
  nlohmann::ordered_json j;
  j["n"] = g.num_vertices();
  j["value"] = to_string(sol.value);
  j["eps"] = to_string(sol.eps);
  auto arr = nlohmann::ordered_json::array();
  for (int e = 0; e < g.num_edges(); ++e)
    arr.push_back({std::to_string(g.edge(e).u), std::to_string(g.edge(e).v), to_string(sol.x[e])});
  j["x"] = std::move(arr);
  return j;
}

inline std::pair<Graph, LpSolution> lp_solution_from_json(const nlohmann::ordered_json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    std::vector<Rational> x;
    for (const auto& item : j.at("x")) {
      edges.push_back({std::stoi(item.at(0).get<std::string>()), std::stoi(item.at(1).get<std::string>())});
      x.push_back(parse_rational(item.at(2).get<std::string>()));
    }
    Graph g(n, std::move(edges));
    LpSolution sol = make_solution(g, std::move(x));
    if (sol.value != parse_rational(j.at("value").get<std::string>()) || sol.eps != parse_rational(j.at("eps").get<std::string>()))
      throw InputError("LP solution JSON: value/eps inconsistent with x");
    return {std::move(g), std::move(sol)};
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("LP solution JSON: ") + ex.what());
  }
}

}  // namespace sqtsp
