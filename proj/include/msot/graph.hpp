#pragma once

// Graphs as structures over {edg}: generators, adjacency masks, contraction,
// minor testing and exhaustive minor enumeration.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msot/error.hpp"
#include "msot/structure.hpp"
#include "msot/tree.hpp"

namespace msot {

using Edge = std::pair<std::string, std::string>;

/// Undirected loop-free graph from named vertices and edges.
inline Structure make_graph(const std::vector<std::string>& vertices, const std::vector<Edge>& edges) {
  std::vector<NamedTuple> es;
  for (const auto& [u, v] : edges) {
    if (u == v) throw ArgumentError("loop at '" + u + "' in simple graph");
    es.push_back({u, v});
    es.push_back({v, u});
  }
  return Structure(graph_signature(), vertices, {{kEdge, es}});
}

inline bool is_graph(const Structure& g) {
  if (g.signature().symbols().size() != 1 || g.signature().arity_of(kEdge) != 2) return false;
  for (const auto& t : g.relation(kEdge))
    if (t[0] == t[1] || !g.holds(kEdge, {t[1], t[0]})) return false;
  return true;
}

inline void require_graph(const Structure& g) {
  if (!is_graph(g)) throw SignatureError("expected an undirected loop-free graph over {edg}");
}

/// Gaifman adjacency as bitmasks (domain size <= 64).
inline std::vector<Mask> adjacency(const Structure& s) {
  if (s.size() > 64) throw BudgetError("adjacency masks limited to 64 elements");
  std::vector<Mask> adj(static_cast<std::size_t>(s.size()), 0);
  for (const auto& [_, ts] : s.relations())
    for (const auto& t : ts)
      for (auto u : t)
        for (auto v : t)
          if (u != v) adj[static_cast<std::size_t>(u)] |= bit(v);
  return adj;
}

/// Undirected edges u < v.
inline std::vector<std::pair<int, int>> edge_list(const Structure& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : g.relation(kEdge))
    if (t[0] < t[1]) out.push_back({t[0], t[1]});
  return out;
}

/// Connected components of the subgraph induced by `within`.
inline std::vector<Mask> components(const std::vector<Mask>& adj, Mask within) {
  std::vector<Mask> out;
  Mask rest = within;
  while (rest) {
    Mask comp = rest & (~rest + 1);
    Mask frontier = comp;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      next &= within & ~comp;
      comp |= next;
      frontier = next;
    }
    out.push_back(comp);
    rest &= ~comp;
  }
  return out;
}

inline bool is_connected(const std::vector<Mask>& adj, Mask within) { return components(adj, within).size() <= 1; }

/// Vertex count of a longest simple path (0 for the empty graph).
inline int longest_path_vertices(const Structure& g) {
  auto adj = adjacency(g);
  int best = 0;
  std::function<void(int, Mask, int)> rec = [&](int v, Mask used, int len) {
    best = std::max(best, len);
    for (Mask m = adj[static_cast<std::size_t>(v)] & ~used; m; m &= m - 1) {
      int w = std::countr_zero(m);
      rec(w, used | bit(w), len + 1);
    }
  };
  for (int v = 0; v < g.size(); ++v) rec(v, bit(v), 1);
  return best;
}

// ---------------------------------------------------------------------------
// Generators

/// Path with l edges on vertices v1 .. v{l+1}.
inline Structure path_graph(int l) {
  if (l < 0) throw ArgumentError("path length must be >= 0");
  std::vector<std::string> vs;
  std::vector<Edge> es;
  for (int i = 1; i <= l + 1; ++i) vs.push_back("v" + std::to_string(i));
  for (int i = 1; i <= l; ++i) es.push_back({vs[static_cast<std::size_t>(i - 1)], vs[static_cast<std::size_t>(i)]});
  return make_graph(vs, es);
}

inline std::string grid_vertex(int i, int k) { return "(" + std::to_string(i) + "," + std::to_string(k) + ")"; }

/// m × n grid on [m] × [n], edges at Manhattan distance 1.
inline Structure grid_graph(int m, int n) {
  if (m < 0 || n < 0) throw ArgumentError("grid dimensions must be >= 0");
  std::vector<std::string> vs;
  std::vector<Edge> es;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) {
      vs.push_back(grid_vertex(i, k));
      if (i + 1 < m) es.push_back({grid_vertex(i, k), grid_vertex(i + 1, k)});
      if (k + 1 < n) es.push_back({grid_vertex(i, k), grid_vertex(i, k + 1)});
    }
  return make_graph(vs, es);
}

inline Structure complete_graph(int n) {
  std::vector<std::string> vs;
  std::vector<Edge> es;
  for (int i = 1; i <= n; ++i) vs.push_back("v" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]});
  return make_graph(vs, es);
}

inline ColouredTree complete_tree(int m, int n) { return {complete_tree_domain(m, n), TreeMode::Successor, {}}; }
inline ColouredTree binary_tree(int n) { return complete_tree(2, n); }

// ---------------------------------------------------------------------------
// Contraction and minors

/// Quotient by the equivalence generated by `contracted`; each class is named
/// by its lexicographically least member. Loops are dropped.
inline Structure contract_edges(const Structure& g, const std::vector<Edge>& contracted) {
  require_graph(g);
  std::vector<int> parent(static_cast<std::size_t>(g.size()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  for (const auto& [u, v] : contracted) {
    auto a = g.index(u), b = g.index(v);
    if (!a || !b || !g.holds(kEdge, {*a, *b})) throw ArgumentError("contracted pair {" + u + "," + v + "} is not an edge");
    int ra = find(*a), rb = find(*b);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  // Root of each class is its least index, which is the least name.
  std::set<std::string> vs;
  std::vector<Edge> es;
  for (int v = 0; v < g.size(); ++v) vs.insert(g.name(find(v)));
  std::set<std::pair<std::string, std::string>> seen;
  for (auto [u, v] : edge_list(g)) {
    int a = find(u), b = find(v);
    if (a == b) continue;
    auto e = std::minmax(g.name(a), g.name(b));
    if (seen.insert({e.first, e.second}).second) es.push_back({e.first, e.second});
  }
  return make_graph({vs.begin(), vs.end()}, es);
}

/// Branch sets: H-vertex -> set of G-vertices (by name).
using MinorCertificate = std::map<std::string, std::set<std::string>>;

struct MinorResult {
  bool is_minor = false;
  MinorCertificate certificate;
};

/// Certificate check: disjoint, nonempty, connected branch sets with an edge
/// between the sets of every H-edge.
inline bool check_minor_certificate(const Structure& h, const Structure& g, const MinorCertificate& cert) {
  auto adj = adjacency(g);
  std::vector<Mask> sets(static_cast<std::size_t>(h.size()), 0);
  Mask used = 0;
  for (int x = 0; x < h.size(); ++x) {
    auto it = cert.find(h.name(x));
    if (it == cert.end() || it->second.empty()) return false;
    for (const auto& n : it->second) {
      auto i = g.index(n);
      if (!i || (used & bit(*i))) return false;
      used |= bit(*i);
      sets[static_cast<std::size_t>(x)] |= bit(*i);
    }
    if (!is_connected(adj, sets[static_cast<std::size_t>(x)])) return false;
  }
  for (auto [a, b] : edge_list(h)) {
    bool ok = false;
    for (Mask m = sets[static_cast<std::size_t>(a)]; m && !ok; m &= m - 1)
      ok = (adj[static_cast<std::size_t>(std::countr_zero(m))] & sets[static_cast<std::size_t>(b)]) != 0;
    if (!ok) return false;
  }
  return true;
}

/// Exhaustive branch-set search. `budget` bounds |G|.
inline MinorResult is_minor(const Structure& h, const Structure& g, int budget = 10) {
  require_graph(h);
  require_graph(g);
  if (g.size() > budget) throw BudgetError("is_minor: host graph exceeds budget of " + std::to_string(budget));
  MinorResult res;
  const int nh = h.size(), ng = g.size();
  if (nh > ng || edge_list(h).size() > edge_list(g).size()) return res;
  auto adj_g = adjacency(g);
  auto adj_h = adjacency(h);
  std::vector<Mask> connected_sets;
  for (Mask m = 1; m < bit(ng); ++m)
    if (is_connected(adj_g, m)) connected_sets.push_back(m);
  std::sort(connected_sets.begin(), connected_sets.end(), [](Mask a, Mask b) {
    return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
  });
  // Visit H-vertices so that each has many already placed neighbours.
  std::vector<int> order;
  Mask placed = 0;
  while (static_cast<int>(order.size()) < nh) {
    int best = -1, score = -1;
    for (int x = 0; x < nh; ++x) {
      if (placed & bit(x)) continue;
      int s = popcount(adj_h[static_cast<std::size_t>(x)] & placed) * 64 + popcount(adj_h[static_cast<std::size_t>(x)]);
      if (s > score) { score = s; best = x; }
    }
    order.push_back(best);
    placed |= bit(best);
  }
  std::vector<Mask> branch(static_cast<std::size_t>(nh), 0);
  std::function<bool(std::size_t, Mask)> rec = [&](std::size_t i, Mask used) {
    if (i == order.size()) return true;
    int x = order[i];
    int remaining = static_cast<int>(order.size() - i) - 1;
    for (Mask s : connected_sets) {
      if (s & used) continue;
      if (popcount(used | s) + remaining > ng) break;
      Mask nbr = 0;
      for (Mask m = s; m; m &= m - 1) nbr |= adj_g[static_cast<std::size_t>(std::countr_zero(m))];
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if ((adj_h[static_cast<std::size_t>(x)] & bit(order[j])) && !(nbr & branch[static_cast<std::size_t>(order[j])])) ok = false;
      if (!ok) continue;
      branch[static_cast<std::size_t>(x)] = s;
      if (rec(i + 1, used | s)) return true;
    }
    branch[static_cast<std::size_t>(x)] = 0;
    return false;
  };
  if (!rec(0, 0)) return res;
  res.is_minor = true;
  for (int x = 0; x < nh; ++x) {
    auto& set = res.certificate[h.name(x)];
    for (Mask m = branch[static_cast<std::size_t>(x)]; m; m &= m - 1) set.insert(g.name(std::countr_zero(m)));
  }
  return res;
}

/// Certificate for H ≤ K from certificates for H ≤ G and G ≤ K.
inline MinorCertificate compose_certificates(const MinorCertificate& h_in_g, const MinorCertificate& g_in_k) {
  MinorCertificate out;
  for (const auto& [x, set] : h_in_g) {
    auto& target = out[x];
    for (const auto& y : set) {
      const auto& s = g_in_k.at(y);
      target.insert(s.begin(), s.end());
    }
  }
  return out;
}

/// All minors of g up to isomorphism, keyed by canonical form (includes the
/// empty graph and g itself).
inline std::map<std::string, Structure> all_minors(const Structure& g) {
  require_graph(g);
  std::map<std::string, Structure> seen;
  std::vector<Structure> stack{g};
  seen.emplace(canonical_key(g), g);
  while (!stack.empty()) {
    Structure cur = stack.back();
    stack.pop_back();
    std::vector<Structure> next;
    for (int v = 0; v < cur.size(); ++v) {
      std::vector<Element> keep;
      for (int u = 0; u < cur.size(); ++u)
        if (u != v) keep.push_back(u);
      next.push_back(cur.induced(keep));
    }
    for (auto [u, v] : edge_list(cur)) {
      std::vector<Edge> rest;
      for (auto [a, b] : edge_list(cur))
        if (!(a == u && b == v)) rest.push_back({cur.name(a), cur.name(b)});
      next.push_back(make_graph(cur.domain(), rest));
      next.push_back(contract_edges(cur, {{cur.name(u), cur.name(v)}}));
    }
    for (auto& s : next) {
      auto key = canonical_key(s);
      if (seen.emplace(key, s).second) stack.push_back(std::move(s));
    }
  }
  return seen;
}

}  // namespace msot
