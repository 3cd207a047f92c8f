#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "sqtsp/errors.hpp"

namespace sqtsp {

template <class W>
struct WeightedEdge {
  int u;
  int v;
  W weight;
};

template <class W>
struct CutResult {
  W value{};
  /// One shore of the cut, sorted. Nonempty and proper.
  std::vector<int> side;
};

/// Global minimum cut of an undirected graph with nonnegative weights
/// (Stoer-Wagner). Works for any ordered field or ring W; the selection in
/// each maximum-adjacency phase breaks ties by the smaller representative.
template <class W>
CutResult<W> stoer_wagner_min_cut(int n, std::span<const WeightedEdge<W>> edges) {
  if (n < 2) throw InputError("min cut needs at least two vertices");
  std::vector<std::vector<W>> w(n, std::vector<W>(n, W(0)));
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    w[e.u][e.v] += e.weight;
    w[e.v][e.u] += e.weight;
  }
  std::vector<std::vector<int>> members(n);
  for (int v = 0; v < n; ++v) members[v] = {v};
  std::vector<int> active(n);
  for (int v = 0; v < n; ++v) active[v] = v;

  CutResult<W> best;
  bool have_best = false;
  std::vector<W> key(n);
  std::vector<char> added(n);

  while (active.size() > 1) {
    for (int v : active) {
      key[v] = W(0);
      added[v] = 0;
    }
    int prev = -1, last = -1;
    for (std::size_t step = 0; step < active.size(); ++step) {
      int pick = -1;
      for (int v : active)
        if (!added[v] && (pick < 0 || key[pick] < key[v])) pick = v;
      if (pick < 0) break;
      added[pick] = 1;
      prev = last;
      last = pick;
      for (int v : active)
        if (!added[v]) key[v] += w[pick][v];
    }
    // Cut of the phase: `last` alone against the rest.
    if (!have_best || key[last] < best.value) {
      best.value = key[last];
      best.side = members[last];
      have_best = true;
    }
    // Merge last into prev.
    for (int v : active) {
      if (v == last || v == prev) continue;
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
    active.erase(std::find(active.begin(), active.end(), last));
  }
  std::sort(best.side.begin(), best.side.end());
  return best;
}

/// Minimum s-t cut by shortest augmenting paths. `side` is the set of
/// vertices reachable from s in the final residual graph.
template <class W>
CutResult<W> min_st_cut(int n, std::span<const WeightedEdge<W>> edges, int s, int t) {
  if (s == t || s < 0 || t < 0 || s >= n || t >= n) throw InputError("min_st_cut: bad terminals");
  struct Arc {
    int to;
    W cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(n);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    out[e.u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e.v, e.weight});
    out[e.v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e.u, e.weight});
  }
  W flow(0);
  std::vector<int> via(n);
  while (true) {
    std::fill(via.begin(), via.end(), -1);
    std::deque<int> queue{s};
    via[s] = -2;
    while (!queue.empty() && via[t] == -1) {
      int v = queue.front();
      queue.pop_front();
      for (int a : out[v])
        if (via[arcs[a].to] == -1 && W(0) < arcs[a].cap) {
          via[arcs[a].to] = a;
          queue.push_back(arcs[a].to);
        }
    }
    if (via[t] == -1) break;
    W push = arcs[via[t]].cap;
    for (int v = t; v != s; v = arcs[via[v] ^ 1].to) push = std::min(push, arcs[via[v]].cap);
    for (int v = t; v != s; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].cap -= push;
      arcs[via[v] ^ 1].cap += push;
    }
    flow += push;
  }
  CutResult<W> result;
  result.value = flow;
  for (int v = 0; v < n; ++v)
    if (via[v] != -1) result.side.push_back(v);
  return result;
}

}  // namespace sqtsp
