#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqtsp/check.hpp"
#include "sqtsp/errors.hpp"
#include "sqtsp/graph.hpp"
#include "sqtsp/lp_heldkarp.hpp"
#include "sqtsp/rational.hpp"

namespace sqtsp {

/// A non-tree edge oriented from descendant (tail) to ancestor (head).
struct BackEdge {
  int tail;
  int head;
  int edge;  // id in the graph
};

/// Rooted DFS arborescence plus the oriented non-tree edges B(T).
struct DfsTree {
  int root = 0;
  std::vector<int> parent;       // -1 at the root
  std::vector<int> parent_edge;  // -1 at the root
  std::vector<int> pre, post;
  std::vector<int> preorder;                   // vertices by discovery time
  std::vector<std::vector<int>> children;      // in discovery order
  std::vector<BackEdge> back_edges;            // sorted by (pre[tail], pre[head])
  std::vector<std::vector<int>> incoming_back;  // back-edge indices with head v
  std::vector<std::vector<int>> outgoing_back;  // back-edge indices with tail v
  std::vector<int> back_of_edge;               // graph edge -> back-edge index, -1 for tree edges

  int num_vertices() const { return static_cast<int>(parent.size()); }

  /// True iff w lies in the subtree rooted at v (v itself included).
  bool in_subtree(int w, int v) const { return pre[v] <= pre[w] && post[w] <= post[v]; }
  bool is_proper_ancestor(int a, int v) const { return a != v && in_subtree(v, a); }
  bool is_tree_edge(int e) const { return back_of_edge[e] < 0; }
  bool is_leaf(int v) const { return children[v].empty(); }
  bool is_internal(int v) const { return v != root && !children[v].empty(); }
};

/// Greedy DFS: from the current vertex, always follow the edge of largest
/// x-value to an unvisited neighbour (ties: smaller neighbour id).
inline DfsTree build_greedy_dfs(const Graph& g, const std::vector<Rational>& x, int root) {
  const int n = g.num_vertices();
  if (root < 0 || root >= n) throw InputError("build_greedy_dfs: root " + std::to_string(root) + " out of range");
  if (static_cast<int>(x.size()) != g.num_edges()) throw InputError("build_greedy_dfs: x has wrong length");
  DfsTree t;
  t.root = root;
  t.parent.assign(n, -1);
  t.parent_edge.assign(n, -1);
  t.pre.assign(n, -1);
  t.post.assign(n, -1);
  t.children.assign(n, {});
  t.incoming_back.assign(n, {});
  t.outgoing_back.assign(n, {});
  t.back_of_edge.assign(g.num_edges(), -1);

  int clock = 0;
  std::vector<int> stack{root};
  t.pre[root] = clock++;
  t.preorder.push_back(root);
  while (!stack.empty()) {
    const int v = stack.back();
    int best_edge = -1, best_w = -1;
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (t.pre[w] >= 0) continue;
      if (best_edge < 0 || x[best_edge] < x[e] || (x[best_edge] == x[e] && w < best_w)) {
        best_edge = e;
        best_w = w;
      }
    }
    if (best_edge < 0) {
      t.post[v] = clock++;
      stack.pop_back();
      continue;
    }
    t.parent[best_w] = v;
    t.parent_edge[best_w] = best_edge;
    t.children[v].push_back(best_w);
    t.pre[best_w] = clock++;
    t.preorder.push_back(best_w);
    stack.push_back(best_w);
  }
  for (int v = 0; v < n; ++v)
    if (t.pre[v] < 0) throw InputError("build_greedy_dfs: graph is disconnected");

  for (int e = 0; e < g.num_edges(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (t.parent_edge[u] == e || t.parent_edge[v] == e) continue;
    if (t.pre[u] < t.pre[v]) std::swap(u, v);  // u is the descendant
    t.back_edges.push_back({u, v, e});
  }
  std::sort(t.back_edges.begin(), t.back_edges.end(), [&](const BackEdge& a, const BackEdge& b) {
    return std::pair{t.pre[a.tail], t.pre[a.head]} < std::pair{t.pre[b.tail], t.pre[b.head]};
  });
  for (std::size_t i = 0; i < t.back_edges.size(); ++i) {
    const auto& be = t.back_edges[i];
    t.back_of_edge[be.edge] = static_cast<int>(i);
    t.incoming_back[be.head].push_back(static_cast<int>(i));
    t.outgoing_back[be.tail].push_back(static_cast<int>(i));
  }
  return t;
}

inline DfsTree build_greedy_dfs(const Graph& g, const LpSolution& sol, int root) { return build_greedy_dfs(g, sol.x, root); }

/// Lowest-id endpoint of an edge with x < 1; 0 when every edge has x = 1.
inline int choose_root(const Graph& g, const LpSolution& sol) {
  int best = -1;
  for (int e = 0; e < g.num_edges(); ++e)
    if (sol.x[e] < 1) {
      int cand = std::min(g.edge(e).u, g.edge(e).v);
      if (best < 0 || cand < best) best = cand;
    }
  return best < 0 ? 0 : best;
}

/// Tree cut of the tree edge (parent -> child) with its cover.
struct TreeCut {
  int parent;
  int child;
  int edge;
  std::vector<int> cover;  // back-edge indices, ordered by tail preorder
};

/// Cover of the cut below `child`: back edges leaving subtree(child) whose
/// head is a proper ancestor of parent(child).
inline TreeCut tree_cut(const DfsTree& t, int child) {
  if (child < 0 || child >= t.num_vertices() || t.parent[child] < 0)
    throw InputError("tree_cut: vertex " + std::to_string(child) + " is not the head of a tree edge");
  const int u = t.parent[child];
  TreeCut cut{u, child, t.parent_edge[child], {}};
  for (std::size_t i = 0; i < t.back_edges.size(); ++i) {
    const auto& be = t.back_edges[i];
    if (t.in_subtree(be.tail, child) && t.is_proper_ancestor(be.head, u)) cut.cover.push_back(static_cast<int>(i));
  }
  return cut;
}

/// Tree cut for a directed tree edge given by its endpoints.
inline TreeCut tree_cut(const DfsTree& t, int parent, int child) {
  if (child < 0 || child >= t.num_vertices() || t.parent[child] != parent)
    throw InputError("tree_cut: (" + std::to_string(parent) + "," + std::to_string(child) + ") is not a tree edge");
  return tree_cut(t, child);
}

/// Covers of every tree cut, indexed by the child vertex (empty for the root).
inline std::vector<std::vector<int>> all_covers(const DfsTree& t) {
  std::vector<std::vector<int>> covers(t.num_vertices());
  for (int v = 0; v < t.num_vertices(); ++v)
    if (t.parent[v] >= 0) covers[v] = tree_cut(t, v).cover;
  return covers;
}

inline Rational cover_value(const std::vector<int>& cover, const std::vector<Rational>& b) {
  Rational s(0);
  for (int i : cover) s += b[i];
  return s;
}

/// b is indexed by back-edge index.
inline bool is_satisfied_by(const DfsTree& t, const std::vector<Rational>& b, int v) {
  for (int c : t.children.at(v))
    if (cover_value(tree_cut(t, c).cover, b) < 1) return false;
  return true;
}

inline bool is_satisfied_by(const std::vector<std::vector<int>>& covers, const DfsTree& t, const std::vector<Rational>& b,
                            int v) {
  for (int c : t.children[v])
    if (cover_value(covers[c], b) < 1) return false;
  return true;
}

/// x restricted to B(T), indexed by back-edge index.
inline std::vector<Rational> back_edge_values(const DfsTree& t, const std::vector<Rational>& x) {
  std::vector<Rational> b;
  b.reserve(t.back_edges.size());
  for (const auto& be : t.back_edges) b.push_back(x[be.edge]);
  return b;
}

struct ExpensiveVertex {
  int vertex;
  int back_min;  // back-edge index carrying x_min
  int back_max;
  Rational x_min;
  Rational x_max;
};

struct VertexClassification {
  std::vector<char> internal, branch, expensive, heavy, lp_satisfied;
  /// Child vertex of the unique outgoing tree edge whose cut is not satisfied
  /// by x, for LP-unsatisfied vertices; -1 otherwise.
  std::vector<int> unsat_cut;
  /// Number of outgoing tree cuts not satisfied by x (internal vertices).
  std::vector<int> unsat_count;
  /// Expensive vertices in preorder.
  std::vector<ExpensiveVertex> expensive_list;
  /// Covers of all tree cuts, indexed by child vertex.
  std::vector<std::vector<int>> covers;

  bool lp_unsatisfied(int v) const { return internal[v] && !lp_satisfied[v]; }
};

/// Flags only; no lemma is checked here.
inline VertexClassification compute_classification(const Graph& g, const LpSolution& sol, const DfsTree& t) {
  const int n = g.num_vertices();
  VertexClassification c;
  c.internal.assign(n, 0);
  c.branch.assign(n, 0);
  c.expensive.assign(n, 0);
  c.heavy.assign(n, 0);
  c.lp_satisfied.assign(n, 0);
  c.unsat_cut.assign(n, -1);
  c.unsat_count.assign(n, 0);
  c.covers = all_covers(t);
  const auto bx = back_edge_values(t, sol.x);
  for (int v = 0; v < n; ++v) {
    c.internal[v] = t.is_internal(v);
    c.branch[v] = t.children[v].size() >= 2;
    c.heavy[v] = sol.excess[v] > 0;
    c.expensive[v] = c.internal[v] && t.incoming_back[v].size() == 2;
    if (!c.internal[v]) continue;
    for (int ch : t.children[v])
      if (cover_value(c.covers[ch], bx) < 1) {
        if (c.unsat_count[v]++ == 0) c.unsat_cut[v] = ch;
      }
    c.lp_satisfied[v] = c.unsat_count[v] == 0;
  }
  for (int v : t.preorder) {
    if (!c.expensive[v]) continue;
    int a = t.incoming_back[v][0], b = t.incoming_back[v][1];
    const Rational& xa = bx[a];
    const Rational& xb = bx[b];
    if (xb < xa) c.expensive_list.push_back({v, b, a, xb, xa});
    else c.expensive_list.push_back({v, a, b, xa, xb});
  }
  return c;
}

/// Structural audits of the tree and the classification. Check names are
/// stable; they appear in certificates.
inline std::vector<Check> audit_tree(const Graph& g, const LpSolution& sol, const DfsTree& t, const VertexClassification& c) {
  CheckList out;
  const int n = g.num_vertices();
  const int m = g.num_edges();
  auto vs = [](int v) { return "v=" + std::to_string(v); };

  {
    bool ok = t.parent[t.root] == -1;
    std::string w;
    for (int v = 0; v < n && ok; ++v) {
      if (v == t.root) continue;
      int p = t.parent[v];
      if (p < 0 || !t.is_proper_ancestor(p, v) || t.parent_edge[v] < 0 || g.other(t.parent_edge[v], v) != p) {
        ok = false;
        w = vs(v);
      }
    }
    out.record("dfs.spanning_arborescence", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (const auto& be : t.back_edges)
      if (!t.is_proper_ancestor(be.head, be.tail)) {
        ok = false;
        w = "back edge (" + std::to_string(be.tail) + "," + std::to_string(be.head) + ")";
        break;
      }
    out.record("dfs.back_edges_to_ancestors", ok, w);
  }
  out.record("dfs.back_edge_count", static_cast<int>(t.back_edges.size()) == m - (n - 1),
             "|B|=" + std::to_string(t.back_edges.size()) + " |E|-(n-1)=" + std::to_string(m - n + 1));
  {
    // Replay: when child c of v was discovered, every neighbour of v with a
    // later discovery time was still unvisited.
    bool ok = true;
    std::string w;
    for (int c2 = 0; c2 < n && ok; ++c2) {
      int v = t.parent[c2];
      if (v < 0) continue;
      const Rational& chosen = sol.x[t.parent_edge[c2]];
      for (int e : g.incident(v)) {
        int u = g.other(e, v);
        if (u == c2 || t.pre[u] < t.pre[c2]) continue;
        if (chosen < sol.x[e]) {
          ok = false;
          w = "at v=" + std::to_string(v) + " took " + std::to_string(c2) + " (x=" + to_string(chosen) + ") over " +
              std::to_string(u) + " (x=" + to_string(sol.x[e]) + ")";
          break;
        }
      }
    }
    out.record("dfs.greedy_property", ok, w);
  }
  out.record("dfs.root_not_branch", t.children[t.root].size() <= 1,
             "root has " + std::to_string(t.children[t.root].size()) + " children");

  int num_exp = 0;
  for (int v = 0; v < n; ++v) num_exp += c.expensive[v];
  out.record("fact.expensive_at_most_half", 2 * num_exp <= n, "|T_exp|=" + std::to_string(num_exp) + " n=" + std::to_string(n));

  for (int v = 0; v < n; ++v) {
    out.record("lemma3.branch_not_expensive", !(c.internal[v] && c.branch[v] && c.expensive[v]), vs(v));
    if (c.internal[v]) out.record("lemma8.single_unsatisfied_cut", c.unsat_count[v] <= 1, vs(v) + " unsatisfied cuts=" + std::to_string(c.unsat_count[v]));
    if (c.expensive[v]) out.record("lemma10.expensive_lp_satisfied", c.lp_satisfied[v] != 0, vs(v));
    if (c.lp_unsatisfied(v))
      out.record("lemma11.unsatisfied_heavy", sol.excess[v] > 0, vs(v) + " excess=" + to_string(sol.excess[v]));
  }
  for (const char* name : {"lemma3.branch_not_expensive", "lemma8.single_unsatisfied_cut", "lemma10.expensive_lp_satisfied",
                           "lemma11.unsatisfied_heavy"})
    out.record(name, true);

  if (sol.eps == 0 && m > n) {
    bool ok = true;
    std::string w;
    for (int e = 0; e < m; ++e)
      if (sol.x[e] == 1 && !t.is_tree_edge(e)) {
        ok = false;
        w = "edge (" + std::to_string(g.edge(e).u) + "," + std::to_string(g.edge(e).v) + ") has x=1 but is a back edge";
        break;
      }
    out.record("lemma5.unit_edges_in_tree", ok, w);
  }
  return std::move(out).release();
}

/// Classification with every lemma it relies on enforced; throws
/// InvariantViolation naming the first failed check.
inline VertexClassification classify(const Graph& g, const LpSolution& sol, const DfsTree& t) {
  if (!is_subquartic(g)) throw InputError("classify: support is not subquartic");
  VertexClassification c = compute_classification(g, sol, t);
  for (const auto& chk : audit_tree(g, sol, t, c))
    if (!chk.passed) throw InvariantViolation(chk.name, chk.witness);
  return c;
}

/// Debug dump: parent array, back edges, per-vertex flags.
inline nlohmann::ordered_json tree_to_json(const DfsTree& t, const VertexClassification* c = nullptr) {
  nlohmann::ordered_json j;
  j["root"] = t.root;
  j["parent"] = t.parent;
  auto be = nlohmann::ordered_json::array();
  for (const auto& b : t.back_edges) be.push_back({b.tail, b.head});
  j["back_edges"] = std::move(be);
  if (c) {
    auto flags = nlohmann::ordered_json::array();
    for (int v = 0; v < t.num_vertices(); ++v) {
      nlohmann::ordered_json f;
      f["v"] = v;
      f["internal"] = c->internal[v] != 0;
      f["branch"] = c->branch[v] != 0;
      f["expensive"] = c->expensive[v] != 0;
      f["heavy"] = c->heavy[v] != 0;
      f["lp_satisfied"] = c->internal[v] ? nlohmann::ordered_json(c->lp_satisfied[v] != 0) : nlohmann::ordered_json(nullptr);
      if (c->unsat_cut[v] >= 0) f["unsat_cut"] = {v, c->unsat_cut[v]};
      flags.push_back(std::move(f));
    }
    j["flags"] = std::move(flags);
  }
  return j;
}

}  // namespace sqtsp
