#pragma once

// Seeded generators for random structures, graphs, trees, decompositions and
// partition refinements.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "msot/decomposition.hpp"
#include "msot/graph.hpp"
#include "msot/partition.hpp"
#include "msot/structure.hpp"
#include "msot/tree.hpp"

namespace msot::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::string> element_names(int n, const std::string& prefix = "e") {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Uniformly chosen tuples: each relation gets up to `max_tuples` random tuples.
inline Structure random_structure(Rng& rng, const Signature& sig, int n, int max_tuples = 4) {
  auto names = element_names(n);
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& s : sig.symbols()) {
    auto& ts = rels[s.name];
    if (n == 0) continue;
    int count = uniform(rng, 0, max_tuples);
    for (int i = 0; i < count; ++i) {
      NamedTuple t;
      for (int j = 0; j < s.arity; ++j) t.push_back(names[static_cast<std::size_t>(uniform(rng, 0, n - 1))]);
      ts.push_back(t);
    }
  }
  return Structure(sig, names, rels);
}

/// A random signature with 1..3 symbols of arity 1..max_arity.
inline Signature random_signature(Rng& rng, int max_arity = 3) {
  Signature sig;
  int count = uniform(rng, 1, 3);
  for (int i = 0; i < count; ++i) sig.add("R" + std::to_string(i), uniform(rng, 1, max_arity));
  return sig;
}

inline Structure random_graph(Rng& rng, int n, double p) {
  auto names = element_names(n, "v");
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng, p)) es.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
  return make_graph(names, es);
}

/// Random spanning tree plus independent extra edges.
inline Structure random_connected_graph(Rng& rng, int n, double p) {
  auto names = element_names(n, "v");
  std::set<std::pair<int, int>> es;
  for (int i = 1; i < n; ++i) es.insert({uniform(rng, 0, i - 1), i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng, p)) es.insert({i, j});
  std::vector<Edge> edges;
  for (const auto& [i, j] : es) edges.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
  return make_graph(names, edges);
}

/// Each new node becomes a child of a uniformly chosen earlier node.
inline TreeDomain random_tree_domain(Rng& rng, int nodes, int max_height = 0) {
  std::vector<Path> ps{Path{}};
  std::map<Path, int> kids;
  while (static_cast<int>(ps.size()) < nodes) {
    const Path& parent = ps[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ps.size()) - 1))];
    if (max_height > 0 && static_cast<int>(parent.size()) + 1 >= max_height) continue;
    Path c = parent;
    c.push_back(kids[parent]++);
    ps.push_back(c);
  }
  return TreeDomain(std::set<Path>(ps.begin(), ps.end()));
}

struct GraphWithDecomposition {
  Structure graph;
  TreeDecomposition decomposition;
};

/// Each vertex occupies a random connected subtree; edges are drawn among the
/// pairs whose subtrees meet, so the decomposition is valid by construction.
inline GraphWithDecomposition random_decomposition(Rng& rng, int vertices, int nodes, double p = 0.6,
                                                   int max_height = 0) {
  TreeDomain t = random_tree_domain(rng, nodes, max_height);
  std::vector<Path> all(t.nodes().begin(), t.nodes().end());
  std::vector<std::set<Path>> occ(static_cast<std::size_t>(vertices));
  for (auto& o : occ) {
    o.insert(all[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(all.size()) - 1))]);
    int grow = uniform(rng, 0, 2);
    for (int g = 0; g < grow; ++g) {
      std::vector<Path> frontier;
      for (const auto& v : o) {
        if (!v.empty() && !o.count(parent_of(v))) frontier.push_back(parent_of(v));
        for (const auto& c : t.children(v))
          if (!o.count(c)) frontier.push_back(c);
      }
      if (frontier.empty()) break;
      o.insert(frontier[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(frontier.size()) - 1))]);
    }
  }
  auto names = element_names(vertices, "v");
  std::vector<Edge> es;
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j) {
      bool meet = std::any_of(occ[static_cast<std::size_t>(i)].begin(), occ[static_cast<std::size_t>(i)].end(),
                              [&](const Path& v) { return occ[static_cast<std::size_t>(j)].count(v) > 0; });
      if (meet && coin(rng, p)) es.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]});
    }
  GraphWithDecomposition out{make_graph(names, es), {t, {}}};
  for (const auto& v : all) out.decomposition.bags[v];
  for (int i = 0; i < vertices; ++i)
    for (const auto& v : occ[static_cast<std::size_t>(i)]) out.decomposition.bags[v].insert(out.graph.require_index(names[static_cast<std::size_t>(i)]));
  return out;
}

/// Balanced binary splits of a shuffled domain. At each vertex u, two
/// elements are equivalent iff they lie in the same successor v of u, have
/// the same sort, and agree on all incidences outside W_v.
inline PartitionRefinement random_refinement(Rng& rng, const IncidenceStructure& inc) {
  const auto& s = inc.structure;
  std::vector<Element> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  msot::detail::IncidenceIndex idx(inc);
  PartitionRefinement pi;
  std::set<Path> nodes;
  std::function<void(const Path&, std::vector<Element>)> build = [&](const Path& u, std::vector<Element> w) {
    nodes.insert(u);
    auto& cls = pi.classes[u];
    if (w.size() <= 1) {
      if (!w.empty()) cls.push_back(w);
      return;
    }
    std::size_t half = w.size() / 2;
    std::vector<Element> left(w.begin(), w.begin() + static_cast<long>(half)), right(w.begin() + static_cast<long>(half), w.end());
    for (const auto* part : {&left, &right}) {
      std::set<Element> excluded(part->begin(), part->end());
      std::map<std::pair<bool, std::set<std::pair<int, Element>>>, std::vector<Element>> groups;
      for (auto x : *part) groups[{idx.is_e[static_cast<std::size_t>(x)], idx.outside(x, excluded)}].push_back(x);
      for (auto& [_, xs] : groups) {
        std::sort(xs.begin(), xs.end());
        cls.push_back(xs);
      }
    }
    Path l = u, r = u;
    l.push_back(0);
    r.push_back(1);
    build(l, left);
    build(r, right);
  };
  build({}, order);
  pi.tree = TreeDomain(std::move(nodes));
  return pi;
}

}  // namespace msot::gen
