#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sqtsp/check.hpp"
#include "sqtsp/dfs_tree.hpp"
#include "sqtsp/errors.hpp"
#include "sqtsp/lp_heldkarp.hpp"
#include "sqtsp/rational.hpp"
#include "sqtsp/simplex.hpp"

namespace sqtsp {

enum class Method { X, F, Best, Oracle, Half };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::X: return "X";
    case Method::F: return "F";
    case Method::Best: return "BEST";
    case Method::Oracle: return "ORACLE";
    case Method::Half: return "HALF";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "x" || s == "X") return Method::X;
  if (s == "f" || s == "F") return Method::F;
  if (s == "best" || s == "BEST") return Method::Best;
  if (s == "oracle" || s == "ORACLE") return Method::Oracle;
  if (s == "half" || s == "HALF") return Method::Half;
  throw InputError("unknown circulation method '" + s + "'");
}

/// Back-edge valuation with its cost accounting.
struct Circulation {
  Method method = Method::X;
  Rational c2 = 0;  // rounding parameter (F only)
  /// Per back edge (indexed like DfsTree::back_edges), in [0,1].
  std::vector<Rational> b;
  /// (vertex, max{0, in(j) - 1}) for every expensive vertex, in preorder.
  std::vector<std::pair<int, Rational>> vertex_cost;
  /// Cost functional of b.
  Rational total_cost = 0;
  /// (vertex, amount actually added) for each fix-up of an LP-unsatisfied vertex.
  std::vector<std::pair<int, Rational>> payments;
  Rational payment_total = 0;
  /// Extra raises needed after the fix-ups to satisfy every internal vertex.
  int repairs = 0;
  Rational repair_total = 0;
  /// Per-vertex charge: sum over expensive j of max{0, c(j)} + eps(j), plus
  /// everything paid. Upper-bounds total_cost; this is what the aggregate
  /// bounds are stated for.
  Rational charged_cost = 0;
  bool feasible = false;
  /// Only for BEST: the competing circulations' charged costs and the winner.
  std::optional<Method> chosen;
  Rational charged_x = 0, charged_f = 0;
  Rational total_x = 0, total_f = 0;
};

/// Cost functional: sum over expensive j of max{0, in(j) - 1}.
inline Rational cost(const DfsTree& t, const VertexClassification& cls, const std::vector<Rational>& b) {
  Rational total(0);
  for (const auto& ev : cls.expensive_list) {
    Rational in(0);
    for (int i : t.incoming_back[ev.vertex]) in += b[i];
    if (in > 1) total += in - 1;
  }
  return total;
}

inline const ExpensiveVertex& expensive_info(const VertexClassification& cls, int j) {
  for (const auto& ev : cls.expensive_list)
    if (ev.vertex == j) return ev;
  throw InputError("vertex " + std::to_string(j) + " is not expensive");
}

inline Rational c_x(const ExpensiveVertex& ev, const Rational& excess) { return ev.x_min + ev.x_max - 1 - excess; }

inline Rational c_x(int j, const LpSolution& sol, const VertexClassification& cls) {
  return c_x(expensive_info(cls, j), sol.excess.at(j));
}

/// Piecewise rounding of an x-value toward 1/2. With c2 = 0 the breakpoints
/// are 1/4 and 3/4.
inline Rational f_value(const Rational& x, const Rational& c2) {
  if (c2 < 0) throw InputError("c2 must be nonnegative");
  if (x < 0 || x > 1) throw InputError("f_value: x=" + to_string(x) + " outside [0,1]");
  const Rational shift = c2 / (4 * (c2 + 2));
  const Rational lo = Rational(1, 4) - shift;
  const Rational hi = Rational(3, 4) + shift;
  if (x < lo) return (2 + c2) * x;
  if (x > hi) return (2 + c2) * x - c2 - 1;
  return Rational(1, 2);
}

/// f applied to every back edge, indexed by back-edge index.
inline std::vector<Rational> f_values(const LpSolution& sol, const DfsTree& t, const Rational& c2) {
  std::vector<Rational> f;
  f.reserve(t.back_edges.size());
  for (const auto& be : t.back_edges) f.push_back(f_value(sol.x[be.edge], c2));
  return f;
}

inline Rational c_f(const ExpensiveVertex& ev, const Rational& excess, const Rational& c2) {
  return f_value(ev.x_min, c2) + f_value(ev.x_max, c2) - 1 - excess;
}

inline Rational c_f(int j, const LpSolution& sol, const VertexClassification& cls, const Rational& c2 = 0) {
  return c_f(expensive_info(cls, j), sol.excess.at(j), c2);
}

namespace detail {

inline bool all_internal_satisfied(const DfsTree& t, const VertexClassification& cls, const std::vector<Rational>& b) {
  for (int v = 0; v < t.num_vertices(); ++v)
    if (cls.internal[v] && !is_satisfied_by(cls.covers, t, b, v)) return false;
  return true;
}

/// Covering edge with the largest b still below 1; the cover is ordered by
/// tail preorder so the first maximum wins ties. -1 if all are at 1.
inline int pick_raise_edge(const std::vector<int>& cover, const std::vector<Rational>& b) {
  int best = -1;
  for (int i : cover)
    if (b[i] < 1 && (best < 0 || b[best] < b[i])) best = i;
  return best;
}

inline int pick_fixup_edge(const std::vector<int>& cover, const std::vector<Rational>& b) {
  int best = -1;
  for (int i : cover)
    if (best < 0 || b[best] < b[i]) best = i;
  return best;
}

/// Raise one covering edge of each LP-unsatisfied vertex's unsatisfied cut
/// (vertices in preorder), then repair any cut the caps left short.
inline void fix_up(const DfsTree& t, const VertexClassification& cls, const LpSolution& sol, const Rational& rate,
                   Circulation& circ) {
  auto& b = circ.b;
  for (int j : t.preorder) {
    if (!cls.lp_unsatisfied(j)) continue;
    const auto& cover = cls.covers[cls.unsat_cut[j]];
    int e = pick_fixup_edge(cover, b);
    if (e < 0) throw InfeasibleError("unsatisfied cut below vertex " + std::to_string(j) + " has an empty cover");
    Rational inc = min(rate * sol.excess[j], 1 - b[e]);
    b[e] += inc;
    circ.payments.emplace_back(j, inc);
    circ.payment_total += inc;
  }
  for (int v : t.preorder) {
    if (!cls.internal[v]) continue;
    for (int c : t.children[v]) {
      const auto& cover = cls.covers[c];
      Rational have = cover_value(cover, b);
      if (have >= 1) continue;
      ++circ.repairs;
      while (have < 1) {
        int e = pick_raise_edge(cover, b);
        if (e < 0)
          throw InfeasibleError("tree cut (" + std::to_string(v) + "," + std::to_string(c) + ") cannot be covered: capacity " +
                                to_string(have));
        Rational inc = min(1 - have, 1 - b[e]);
        b[e] += inc;
        have += inc;
        circ.repair_total += inc;
      }
    }
  }
}

inline void finish(const DfsTree& t, const VertexClassification& cls, Circulation& circ) {
  circ.vertex_cost.clear();
  circ.total_cost = 0;
  for (const auto& ev : cls.expensive_list) {
    Rational in(0);
    for (int i : t.incoming_back[ev.vertex]) in += circ.b[i];
    Rational vc = in > 1 ? Rational(in - 1) : Rational(0);
    circ.total_cost += vc;
    circ.vertex_cost.emplace_back(ev.vertex, std::move(vc));
  }
  circ.feasible = all_internal_satisfied(t, cls, circ.b);
}

template <class PerVertex>
Rational charge(const VertexClassification& cls, const LpSolution& sol, PerVertex per_vertex, const Circulation& circ) {
  Rational total = circ.payment_total + circ.repair_total;
  for (const auto& ev : cls.expensive_list) total += max(Rational(0), per_vertex(ev)) + sol.excess[ev.vertex];
  return total;
}

}  // namespace detail

/// b starts at x on B(T); each LP-unsatisfied j raises one covering edge of
/// its unsatisfied cut by eps(j)/2, capped at 1.
inline Circulation x_circulation(const Graph& g, const LpSolution& sol, const DfsTree& t, const VertexClassification& cls) {
  (void)g;
  Circulation circ;
  circ.method = Method::X;
  circ.b = back_edge_values(t, sol.x);
  detail::fix_up(t, cls, sol, Rational(1, 2), circ);
  detail::finish(t, cls, circ);
  if (!circ.feasible) throw InvariantViolation("feasibility.x", "x-circulation leaves an internal vertex unsatisfied");
  circ.charged_cost = detail::charge(cls, sol, [&](const ExpensiveVertex& ev) { return c_x(ev, sol.excess[ev.vertex]); }, circ);
  return circ;
}

/// b starts at the rounded f-values; each LP-unsatisfied j raises one
/// covering edge by (1 + c2/2) eps(j), capped at 1.
inline Circulation f_circulation(const Graph& g, const LpSolution& sol, const DfsTree& t, const VertexClassification& cls,
                                 const Rational& c2 = 0) {
  (void)g;
  Circulation circ;
  circ.method = Method::F;
  circ.c2 = c2;
  circ.b = f_values(sol, t, c2);
  detail::fix_up(t, cls, sol, 1 + c2 / 2, circ);
  detail::finish(t, cls, circ);
  if (!circ.feasible) throw InvariantViolation("feasibility.f", "f-circulation leaves an internal vertex unsatisfied");
  circ.charged_cost =
      detail::charge(cls, sol, [&](const ExpensiveVertex& ev) { return c_f(ev, sol.excess[ev.vertex], c2); }, circ);
  return circ;
}

/// Cheaper (by charged cost) of the x- and f-circulation (c2 = 0); ties go to F.
inline Circulation best_circulation(const Circulation& x, const Circulation& f) {
  Circulation best = (x.charged_cost < f.charged_cost) ? x : f;
  best.chosen = best.method;
  best.method = Method::Best;
  best.charged_x = x.charged_cost;
  best.charged_f = f.charged_cost;
  best.total_x = x.total_cost;
  best.total_f = f.total_cost;
  return best;
}

inline Circulation best_circulation(const Graph& g, const LpSolution& sol, const DfsTree& t, const VertexClassification& cls) {
  return best_circulation(x_circulation(g, sol, t, cls), f_circulation(g, sol, t, cls, 0));
}

/// Exact minimum of the cost functional over all valuations that
/// satisfy every internal vertex, by rational LP.
inline Circulation oracle_min_circulation(const DfsTree& t, const VertexClassification& cls) {
  const int nb = static_cast<int>(t.back_edges.size());
  const int ne = static_cast<int>(cls.expensive_list.size());
  std::vector<Rational> costv(nb + ne, Rational(0));
  std::vector<std::optional<Rational>> upper(nb + ne);
  for (int i = 0; i < nb; ++i) upper[i] = Rational(1);
  for (int k = 0; k < ne; ++k) costv[nb + k] = 1;
  DualSimplex<Rational> lp(std::move(costv), std::move(upper));
  using Term = DualSimplex<Rational>::Term;
  for (int k = 0; k < ne; ++k) {
    std::vector<Term> row{{nb + k, Rational(1)}};
    for (int i : t.incoming_back[cls.expensive_list[k].vertex]) row.emplace_back(i, Rational(-1));
    lp.add_row(row, Rational(-1));
  }
  for (int v : t.preorder) {
    if (!cls.internal[v]) continue;
    for (int c : t.children[v]) {
      std::vector<Term> row;
      for (int i : cls.covers[c]) row.emplace_back(i, Rational(1));
      lp.add_row(row, Rational(1));
    }
  }
  if (lp.solve() == LpStatus::Infeasible) throw InfeasibleError("no valuation satisfies every internal vertex");
  auto sol = lp.primal();
  Circulation circ;
  circ.method = Method::Oracle;
  circ.b.assign(sol.begin(), sol.begin() + nb);
  detail::finish(t, cls, circ);
  if (circ.total_cost != lp.objective())
    throw InvariantViolation("oracle.objective", "LP objective " + to_string(lp.objective()) + " differs from cost " +
                                                     to_string(circ.total_cost));
  if (!circ.feasible) throw InvariantViolation("feasibility.oracle", "oracle valuation infeasible");
  circ.charged_cost = circ.total_cost;
  return circ;
}

/// b = 1/2 on every back edge. Infeasibility is reported through `feasible`.
inline Circulation half_circulation(const DfsTree& t, const VertexClassification& cls) {
  Circulation circ;
  circ.method = Method::Half;
  circ.b.assign(t.back_edges.size(), Rational(1, 2));
  detail::finish(t, cls, circ);
  circ.charged_cost = circ.total_cost;
  return circ;
}

// ---------------------------------------------------------------------------
// Audits

/// Per-vertex bounds on c_x and c_f at every expensive vertex (c2 = 0).
inline std::vector<Check> audit_vertex_bounds(const LpSolution& sol, const VertexClassification& cls) {
  CheckList out;
  const Rational half(1, 2), quarter(1, 4), three_q(3, 4), third(1, 3);
  for (const auto& ev : cls.expensive_list) {
    const Rational& eps = sol.excess[ev.vertex];
    const Rational cx = c_x(ev, eps);
    const Rational cf = c_f(ev, eps, 0);
    std::string w = "v=" + std::to_string(ev.vertex) + " x_max=" + to_string(ev.x_max) + " x_min=" + to_string(ev.x_min) +
                    " eps=" + to_string(eps) + " c_x=" + to_string(cx) + " c_f=" + to_string(cf);
    out.record("lemma12.greedy_inequality", 2 * ev.x_max + ev.x_min <= 2 + eps, w);
    Rational mid = ev.x_min / 2 - eps / 2;
    out.record("lemma13.cx_bound", cx <= mid && mid <= 1 - ev.x_min, w);
    out.record("lemma14.cx_at_most_third", cx <= third, w);
    if (ev.x_min >= half || ev.x_max <= three_q) out.record("lemma19.cf_nonpositive", cf <= 0, w);
    if (ev.x_max >= three_q && ev.x_min > 0 && ev.x_min <= half)
      out.record("lemma20.cf_bound", cf <= min(ev.x_min, half - ev.x_min), w);
    out.record("theorem4.cf_at_most_quarter", cf <= quarter, w);
    out.record("combined.min_cost_at_most_quarter", min(cx, cf) <= quarter, w);
  }
  for (const char* name : {"lemma12.greedy_inequality", "lemma13.cx_bound", "lemma14.cx_at_most_third", "lemma19.cf_nonpositive",
                           "lemma20.cf_bound", "theorem4.cf_at_most_quarter", "combined.min_cost_at_most_quarter"})
    out.record(name, true);
  return std::move(out).release();
}

/// Convex combination (6/11) avg max{0,c_x} + (5/11) avg max{0,c_f} over
/// expensive vertices; zero when there are none.
inline Rational balance_value(const LpSolution& sol, const VertexClassification& cls) {
  if (cls.expensive_list.empty()) return 0;
  Rational sx(0), sf(0);
  for (const auto& ev : cls.expensive_list) {
    sx += max(Rational(0), c_x(ev, sol.excess[ev.vertex]));
    sf += max(Rational(0), c_f(ev, sol.excess[ev.vertex], 0));
  }
  const Rational k(static_cast<long>(cls.expensive_list.size()));
  return Rational(6, 11) * sx / k + Rational(5, 11) * sf / k;
}

/// Sum of eps(j) over internal, non-expensive vertices.
inline Rational non_expensive_internal_excess(const LpSolution& sol, const VertexClassification& cls) {
  Rational s(0);
  for (std::size_t v = 0; v < cls.internal.size(); ++v)
    if (cls.internal[v] && !cls.expensive[v]) s += sol.excess[v];
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json circulation_to_json(const DfsTree& t, const Circulation& c) {
  nlohmann::ordered_json j;
  j["method"] = method_name(c.method);
  if (c.method == Method::F) j["c2"] = to_string(c.c2);
  if (c.chosen) j["chosen"] = method_name(*c.chosen);
  auto b = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.back_edges.size(); ++i)
    b.push_back({t.back_edges[i].tail, t.back_edges[i].head, to_string(c.b[i])});
  j["b"] = std::move(b);
  auto vc = nlohmann::ordered_json::array();
  for (const auto& [v, r] : c.vertex_cost) vc.push_back({v, to_string(r)});
  j["vertex_costs"] = std::move(vc);
  j["total_cost"] = to_string(c.total_cost);
  auto pay = nlohmann::ordered_json::array();
  for (const auto& [v, r] : c.payments) pay.push_back({v, to_string(r)});
  j["payments"] = std::move(pay);
  j["payment_total"] = to_string(c.payment_total);
  j["repairs"] = c.repairs;
  j["repair_total"] = to_string(c.repair_total);
  j["charged_cost"] = to_string(c.charged_cost);
  j["feasible"] = c.feasible;
  if (c.method == Method::Best) {
    j["charged_x"] = to_string(c.charged_x);
    j["charged_f"] = to_string(c.charged_f);
    j["total_x"] = to_string(c.total_x);
    j["total_f"] = to_string(c.total_f);
  }
  return j;
}

}  // namespace sqtsp
