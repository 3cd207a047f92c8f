#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sqtsp/errors.hpp"

namespace sqtsp {

struct Edge {
  int u = 0;
  int v = 0;  // u < v

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
 public:
  Graph() = default;

  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), incident_(n < 0 ? 0 : n) {
    if (n < 0) throw InputError("negative vertex count");
    std::vector<Edge> seen;
    seen.reserve(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto& [u, v] = edges_[e];
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
      if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
      seen.push_back(edges_[e]);
      incident_[u].push_back(static_cast<int>(e));
      incident_[v].push_back(static_cast<int>(e));
    }
    std::sort(seen.begin(), seen.end());
    auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end())
      throw InputError("parallel edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
  }

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  std::span<const int> incident(int v) const { return incident_.at(v); }
  int degree(int v) const { return static_cast<int>(incident_.at(v).size()); }

  int other(int e, int v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }

  std::optional<int> find_edge(int u, int v) const {
    for (int e : incident_.at(u))
      if (other(e, u) == v) return e;
    return std::nullopt;
  }

  int max_degree() const {
    int d = 0;
    for (const auto& inc : incident_) d = std::max(d, static_cast<int>(inc.size()));
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

inline Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

inline Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

inline Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

/// Two degree-3 vertices (0 and 1) joined by three internally disjoint paths
/// with the given numbers of interior vertices.
inline Graph theta_graph(int a, int b, int c) {
  std::vector<Edge> edges;
  int next = 2;
  for (int len : {a, b, c}) {
    int prev = 0;
    for (int i = 0; i < len; ++i) {
      edges.push_back({prev, next});
      prev = next++;
    }
    edges.push_back({prev, 1});
  }
  return Graph(next, std::move(edges));
}

inline bool is_subquartic(const Graph& g) { return g.max_degree() <= 4; }

inline bool is_connected(const Graph& g) {
  const int n = g.num_vertices();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

/// Biconnected components as lists of edge ids (Hopcroft-Tarjan low-link),
/// together with the articulation points. Isolated vertices produce nothing.
struct BlockDecomposition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> cut_vertices;
};

inline BlockDecomposition biconnected_components(const Graph& g) {
  const int n = g.num_vertices();
  BlockDecomposition out;
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_cut(n, 0);
  std::vector<int> edge_stack;
  int timer = 0;

  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
    int children;
  };

  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root, -1, 0, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto inc = g.incident(f.v);
      if (f.next < inc.size()) {
        int e = inc[f.next++];
        if (e == f.parent_edge) continue;
        int w = g.other(e, f.v);
        if (disc[w] == -1) {
          edge_stack.push_back(e);
          ++f.children;
          disc[w] = low[w] = timer++;
          stack.push_back({w, e, 0, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.push_back(e);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      Frame done = f;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children >= 2) is_cut[done.v] = 1;
        continue;
      }
      Frame& parent = stack.back();
      low[parent.v] = std::min(low[parent.v], low[done.v]);
      if (low[done.v] >= disc[parent.v]) {
        if (parent.parent_edge != -1) is_cut[parent.v] = 1;
        std::vector<int> block;
        while (true) {
          int e = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(e);
          if (e == done.parent_edge) break;
        }
        std::sort(block.begin(), block.end());
        out.blocks.push_back(std::move(block));
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (is_cut[v]) out.cut_vertices.push_back(v);
  return out;
}

inline bool is_two_vertex_connected(const Graph& g) {
  if (g.num_vertices() < 3) throw InputError("2-vertex-connectivity needs at least 3 vertices");
  if (!is_connected(g)) return false;
  return biconnected_components(g).cut_vertices.empty();
}

/// Subgraph on the given edge ids, vertices re-indexed densely in increasing
/// order of their original id. `vertex_map[new] = old`.
struct Subgraph {
  Graph graph;
  std::vector<int> vertex_map;
  std::vector<int> edge_map;
};

inline Subgraph induced_by_edges(const Graph& g, std::span<const int> edge_ids) {
  std::vector<int> verts;
  for (int e : edge_ids) {
    verts.push_back(g.edge(e).u);
    verts.push_back(g.edge(e).v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::vector<int> index(g.num_vertices(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (int e : edge_ids) edges.push_back({index[g.edge(e).u], index[g.edge(e).v]});
  return {Graph(static_cast<int>(verts.size()), std::move(edges)), std::move(verts),
          std::vector<int>(edge_ids.begin(), edge_ids.end())};
}

// ---------------------------------------------------------------------------
// Instance generation

/// Uniform integer in [0, bound) from a 64-bit engine, independent of the
/// standard library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % bound;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct GeneratorOptions {
  /// Probability of attempting to delete each edge after the 4-regular sample
  /// is accepted. Deletions that would break 2-vertex-connectivity are skipped.
  double sparsity = 0.0;
  int max_retries = 10'000;
};

inline Graph generate_random_subquartic(int n, std::uint64_t seed, const GeneratorOptions& opts = {}) {
  if (n < 5) throw InputError("generator needs n >= 5, got " + std::to_string(n));
  if (!(opts.sparsity >= 0.0 && opts.sparsity <= 1.0)) throw InputError("sparsity must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::vector<int> stubs(4 * static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<int>(i / 4);
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[uniform_below(rng, i + 1)]);
    std::vector<Edge> edges;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      edges.push_back({std::min(u, v), std::max(u, v)});
    }
    if (!simple) continue;
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    Graph g(n, std::move(sorted));
    if (!is_two_vertex_connected(g)) continue;
    if (opts.sparsity <= 0.0) return g;

    std::vector<Edge> kept = g.edges();
    std::vector<int> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[uniform_below(rng, i + 1)]);
    std::vector<char> alive(kept.size(), 1);
    for (int idx : order) {
      if (uniform_unit(rng) >= opts.sparsity) continue;
      alive[idx] = 0;
      std::vector<Edge> trial;
      for (std::size_t i = 0; i < kept.size(); ++i)
        if (alive[i]) trial.push_back(kept[i]);
      if (!is_two_vertex_connected(Graph(n, std::move(trial)))) alive[idx] = 1;
    }
    std::vector<Edge> result;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (alive[i]) result.push_back(kept[i]);
    return Graph(n, std::move(result));
  }
  throw InputError("generator exhausted " + std::to_string(opts.max_retries) + " retries for n=" + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m" then m lines "u v".

struct ParsedGraph {
  Graph graph;
  /// labels[i] is the token that was mapped to vertex i.
  std::vector<std::string> labels;
};

inline ParsedGraph parse_edge_list(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw InputError("edge list: missing header \"n m\"");
  if (n < 0 || m < 0) throw InputError("edge list: negative header value");
  std::vector<std::pair<std::string, std::string>> raw;
  for (long long i = 0; i < m; ++i) {
    std::string a, b;
    if (!(in >> a >> b)) throw InputError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    raw.emplace_back(std::move(a), std::move(b));
  }
  std::string extra;
  if (in >> extra) throw InputError("edge list: unexpected trailing token '" + extra + "'");

  auto as_index = [n](const std::string& s) -> std::optional<int> {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    int v = std::stoi(s);
    if (v >= n) return std::nullopt;
    return v;
  };
  bool dense = std::all_of(raw.begin(), raw.end(), [&](const auto& p) { return as_index(p.first) && as_index(p.second); });

  ParsedGraph out;
  std::vector<Edge> edges;
  if (dense) {
    out.labels.resize(n);
    for (int i = 0; i < n; ++i) out.labels[i] = std::to_string(i);
    for (const auto& [a, b] : raw) edges.push_back({*as_index(a), *as_index(b)});
  } else {
    std::map<std::string, int> ids;
    auto id_of = [&](const std::string& s) {
      auto [it, fresh] = ids.emplace(s, static_cast<int>(out.labels.size()));
      if (fresh) out.labels.push_back(s);
      return it->second;
    };
    for (const auto& [a, b] : raw) edges.push_back({id_of(a), id_of(b)});
    if (static_cast<long long>(out.labels.size()) > n)
      throw InputError("edge list: " + std::to_string(out.labels.size()) + " distinct labels exceed n=" + std::to_string(n));
    while (static_cast<long long>(out.labels.size()) < n) out.labels.push_back("#" + std::to_string(out.labels.size()));
  }
  for (const auto& e : edges)
    if (e.u == e.v) throw InputError("edge list: self-loop at '" + out.labels[e.u] + "'");
  out.graph = Graph(static_cast<int>(n), std::move(edges));
  return out;
}

inline ParsedGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

/// FNV-1a over the canonical edge-list text, as 16 hex digits.
inline std::string instance_hash(const Graph& g) {
  std::vector<Edge> sorted = g.edges();
  std::sort(sorted.begin(), sorted.end());
  std::string text = to_edge_list(Graph(g.num_vertices(), std::move(sorted)));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = hex[h & 0xf];
  return s;
}

// ---------------------------------------------------------------------------
// Exact graph-TSP by enumeration of edge multiplicities in {0,1,2}.

struct TourOracleResult {
  int opt_len = 0;
  std::vector<int> multiplicity;
};

inline constexpr int kBruteForceMaxEdges = 16;

inline TourOracleResult brute_force_graph_tsp(const Graph& g) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (m > kBruteForceMaxEdges)
    throw InputError("brute force refuses |E|=" + std::to_string(m) + " > " + std::to_string(kBruteForceMaxEdges));
  if (!is_connected(g)) throw InputError("brute force needs a connected graph");
  if (n <= 1) return {0, std::vector<int>(m, 0)};

  // Order edges by the BFS rank of their later endpoint so that vertices are
  // completed early and parity pruning bites.
  std::vector<int> rank(n, -1);
  std::vector<int> queue{0};
  rank[0] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int e : g.incident(queue[h])) {
      int w = g.other(e, queue[h]);
      if (rank[w] < 0) {
        rank[w] = static_cast<int>(queue.size());
        queue.push_back(w);
      }
    }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int e) {
    auto [a, b] = std::minmax(rank[g.edge(e).u], rank[g.edge(e).v]);
    return std::pair{b, a};
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<int> last(n, -1);
  for (int k = 0; k < m; ++k) {
    last[g.edge(order[k]).u] = k;
    last[g.edge(order[k]).v] = k;
  }

  std::vector<int> mult(m, 0), best_mult, deg(n, 0);
  int best = std::numeric_limits<int>::max();

  auto connected_support = [&]() {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    int comps = n;
    for (int e = 0; e < m; ++e)
      if (mult[e] > 0) {
        int a = find(g.edge(e).u), b = find(g.edge(e).v);
        if (a != b) {
          parent[a] = b;
          --comps;
        }
      }
    return comps == 1;
  };

  auto recurse = [&](auto&& self, int k, int cost) -> void {
    if (cost >= best) return;
    if (k == m) {
      if (connected_support()) {
        best = cost;
        best_mult = mult;
      }
      return;
    }
    const int e = order[k];
    const int u = g.edge(e).u, v = g.edge(e).v;
    for (int c : {1, 0, 2}) {
      mult[e] = c;
      deg[u] += c;
      deg[v] += c;
      bool ok = true;
      for (int w : {u, v})
        if (last[w] == k && (deg[w] % 2 != 0 || deg[w] == 0)) ok = false;
      if (ok) self(self, k + 1, cost + c);
      deg[u] -= c;
      deg[v] -= c;
    }
    mult[e] = 0;
  };
  recurse(recurse, 0, 0);

  std::vector<int> out(m, 0);
  for (int e = 0; e < m; ++e) out[e] = best_mult[e];
  return {best, std::move(out)};
}

}  // namespace sqtsp
