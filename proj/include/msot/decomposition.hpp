#pragma once

// Tree decompositions: validation, exact widths (twd, pwd, twd_n), μ and
// up-sets, strictness and strictification, contraction, DFS decompositions,
// height reduction, and recovering a strict decomposition from its levels.

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "msot/error.hpp"
#include "msot/graph.hpp"
#include "msot/structure.hpp"
#include "msot/tree.hpp"

namespace msot {

using Bag = std::set<Element>;

struct TreeDecomposition {
  TreeDomain tree;
  std::map<Path, Bag> bags;

  /// max |U_v| - 1; -1 when every bag is empty.
  int width() const {
    int w = -1;
    for (const auto& [_, b] : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }
  int height() const { return tree.height(); }
  const Bag& bag(const Path& v) const {
    static const Bag none;
    auto it = bags.find(v);
    return it == bags.end() ? none : it->second;
  }

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

inline TreeDecomposition single_bag(const Structure& a) {
  TreeDecomposition d{TreeDomain::single(), {}};
  auto& b = d.bags[{}];
  for (int e = 0; e < a.size(); ++e) b.insert(e);
  return d;
}

struct Validation {
  bool valid = true;
  std::vector<std::string> violations;
};

/// Checks both decomposition axioms and that bags are indexed by tree nodes.
inline Validation validate(const Structure& a, const TreeDecomposition& d) {
  Validation res;
  auto fail = [&](std::string msg) {
    res.valid = false;
    res.violations.push_back(std::move(msg));
  };
  for (const auto& [v, b] : d.bags) {
    if (!d.tree.contains(v)) fail("bag at '" + path_name(v) + "' outside the tree");
    for (auto e : b)
      if (e < 0 || e >= a.size()) fail("bag at '" + path_name(v) + "' contains a non-element");
  }
  if (d.tree.empty() && a.size() > 0) fail("empty tree cannot cover a nonempty structure");
  for (int e = 0; e < a.size(); ++e) {
    int tops = 0, count = 0;
    for (const auto& v : d.tree.nodes()) {
      if (!d.bag(v).count(e)) continue;
      ++count;
      if (v.empty() || !d.bag(parent_of(v)).count(e)) ++tops;
    }
    if (count == 0) fail("element '" + a.name(e) + "' occurs in no bag");
    else if (tops > 1) fail("bags containing '" + a.name(e) + "' are not connected");
  }
  for (const auto& [r, ts] : a.relations())
    for (const auto& t : ts) {
      bool covered = false;
      for (const auto& [_, b] : d.bags) {
        covered = std::all_of(t.begin(), t.end(), [&](Element e) { return b.count(e) > 0; });
        if (covered) break;
      }
      if (!covered) fail("tuple " + tuple_element_name(r, a.names_of(t)) + " is not contained in any bag");
    }
  return res;
}

inline void require_valid(const Structure& a, const TreeDecomposition& d) {
  auto v = validate(a, d);
  if (!v.valid) throw StructuralError("invalid tree decomposition: " + v.violations.front());
}

// ---------------------------------------------------------------------------
// μ, up-sets, strictness

struct StrictnessReport {
  std::map<Element, Path> mu;
  std::map<Path, Bag> up;
  bool strict = true;
  std::vector<std::string> violations;
};

/// μ(a) = the ⪯-least node whose bag contains a; U_{↑v} = {a : v ⪯ μ(a)}.
inline StrictnessReport mu(const Structure& a, const TreeDecomposition& d) {
  require_valid(a, d);
  StrictnessReport rep;
  for (const auto& v : d.tree.nodes())
    for (auto e : d.bag(v))
      if (!rep.mu.count(e)) rep.mu[e] = v;  // lexicographic order visits ancestors first
  for (const auto& v : d.tree.nodes()) rep.up[v];
  for (const auto& [e, v] : rep.mu)
    for (Path p = v;; p.pop_back()) {
      rep.up[p].insert(e);
      if (p.empty()) break;
    }
  return rep;
}

inline StrictnessReport is_strict(const Structure& a, const TreeDecomposition& d) {
  auto rep = mu(a, d);
  if (a.size() == 0) return rep;
  std::map<Path, int> introduced;
  for (const auto& [e, v] : rep.mu) ++introduced[v];
  auto adj = adjacency(a);
  for (const auto& v : d.tree.nodes()) {
    if (!introduced[v]) {
      rep.strict = false;
      rep.violations.push_back("bag at '" + path_name(v) + "' introduces no element");
    }
    if (v.empty()) continue;
    Mask up = 0;
    for (auto e : rep.up[v]) up |= bit(e);
    if (!is_connected(adj, up)) {
      rep.strict = false;
      rep.violations.push_back("up-set of '" + path_name(v) + "' is disconnected");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// A mutable tree used while rebuilding decompositions.

namespace detail {

struct BagNode {
  Bag bag;
  std::vector<BagNode> kids;
};

inline BagNode to_nodes(const TreeDecomposition& d, const Path& v = {}) {
  BagNode n{d.bag(v), {}};
  for (const auto& c : d.tree.children(v)) n.kids.push_back(to_nodes(d, c));
  return n;
}

inline void from_nodes(const BagNode& n, const Path& at, std::set<Path>& nodes, std::map<Path, Bag>& bags) {
  nodes.insert(at);
  bags[at] = n.bag;
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    Path c = at;
    c.push_back(static_cast<int>(i));
    from_nodes(n.kids[i], c, nodes, bags);
  }
}

inline TreeDecomposition from_nodes(const BagNode& root) {
  std::set<Path> nodes;
  std::map<Path, Bag> bags;
  from_nodes(root, {}, nodes, bags);
  return {TreeDomain(std::move(nodes)), std::move(bags)};
}

}  // namespace detail

/// D/F: contracts the tree edges (parent, child) in `f`; merged bags are unions.
inline TreeDecomposition contract_decomposition(const TreeDecomposition& d,
                                                const std::vector<std::pair<Path, Path>>& f) {
  std::set<Path> contracted;
  for (const auto& [u, v] : f) {
    if (!d.tree.contains(u) || !d.tree.contains(v) || v.empty() || parent_of(v) != u)
      throw ArgumentError("(" + path_name(u) + "," + path_name(v) + ") is not a tree edge");
    contracted.insert(v);
  }
  std::function<void(const Path&, detail::BagNode&)> absorb = [&](const Path& v, detail::BagNode& into) {
    for (const auto& c : d.tree.children(v)) {
      if (contracted.count(c)) {
        const auto& b = d.bag(c);
        into.bag.insert(b.begin(), b.end());
        absorb(c, into);
      } else {
        detail::BagNode child{d.bag(c), {}};
        absorb(c, child);
        into.kids.push_back(std::move(child));
      }
    }
  };
  if (d.tree.empty()) return d;
  detail::BagNode root{d.bag({}), {}};
  absorb({}, root);
  return detail::from_nodes(root);
}

/// A strict decomposition of no larger width or height.
///
/// Level by level, the subtree at each vertex v is replaced by one copy per
/// connected component C of U_{↑v}, where copy i keeps from each bag the
/// elements of C_i and those outside U_{↑v}. Copies for an empty up-set are
/// dropped. Edges into bags that introduce no element are then contracted.
inline TreeDecomposition strictify(const Structure& a, const TreeDecomposition& d) {
  require_valid(a, d);
  if (a.size() == 0) return {TreeDomain::single(), {{Path{}, Bag{}}}};
  auto adj = adjacency(a);
  detail::BagNode root = detail::to_nodes(d);

  std::function<Mask(const detail::BagNode&)> subtree_elements = [&](const detail::BagNode& n) {
    Mask m = 0;
    for (auto e : n.bag) m |= bit(e);
    for (const auto& k : n.kids) m |= subtree_elements(k);
    return m;
  };
  std::function<void(detail::BagNode&, Mask)> restrict_to = [&](detail::BagNode& n, Mask drop) {
    for (auto it = n.bag.begin(); it != n.bag.end();)
      it = (drop & bit(*it)) ? n.bag.erase(it) : std::next(it);
    for (auto& k : n.kids) restrict_to(k, drop);
  };
  // Split the children of `n`, whose ancestors (including n) hold `above`.
  std::function<void(detail::BagNode&, Mask)> split = [&](detail::BagNode& n, Mask above) {
    std::vector<detail::BagNode> kids;
    for (auto& child : n.kids) {
      Mask up = subtree_elements(child) & ~above;
      for (Mask comp : components(adj, up)) {
        detail::BagNode copy = child;
        restrict_to(copy, up & ~comp);
        kids.push_back(std::move(copy));
      }
    }
    n.kids = std::move(kids);
    for (auto& child : n.kids) {
      Mask own = 0;
      for (auto e : child.bag) own |= bit(e);
      split(child, above | own);
    }
  };
  Mask root_elems = 0;
  for (auto e : root.bag) root_elems |= bit(e);
  split(root, root_elems);

  TreeDecomposition mid = detail::from_nodes(root);
  auto rep = mu(a, mid);
  std::set<Path> introducing;
  for (const auto& [e, v] : rep.mu) introducing.insert(v);
  std::vector<std::pair<Path, Path>> f;
  for (const auto& [u, v] : mid.tree.edges())
    if (!introducing.count(v)) f.push_back({u, v});
  TreeDecomposition out = contract_decomposition(mid, f);
  // An empty root is merged into its first child.
  if (out.bag({}).empty() && !out.tree.children({}).empty())
    out = contract_decomposition(out, {{Path{}, out.tree.children({})[0]}});
  return out;
}

// ---------------------------------------------------------------------------
// DFS decomposition

/// Depth-first spanning order-tree with bags U_v = ancestors of v (inclusive).
/// Disconnected graphs get a fresh empty root above the DFS forest.
inline TreeDecomposition dfs_decomposition(const Structure& a) {
  auto adj = adjacency(a);
  const int n = a.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<detail::BagNode> forest;
  std::function<detail::BagNode(int, Bag)> visit = [&](int v, Bag anc) {
    seen[static_cast<std::size_t>(v)] = true;
    anc.insert(v);
    detail::BagNode node{anc, {}};
    for (int w = 0; w < n; ++w)
      if ((adj[static_cast<std::size_t>(v)] & bit(w)) && !seen[static_cast<std::size_t>(w)]) node.kids.push_back(visit(w, anc));
    return node;
  };
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) forest.push_back(visit(v, {}));
  if (forest.empty()) return {TreeDomain::single(), {{Path{}, Bag{}}}};
  if (forest.size() == 1) return detail::from_nodes(forest[0]);
  return detail::from_nodes(detail::BagNode{{}, std::move(forest)});
}

// ---------------------------------------------------------------------------
// Height reduction

/// Contracts the edges entering P, where P is the least set containing the
/// leaves at level n and every vertex with at least m children in P.
/// Requires height(D) <= n+1 and that m^{<n+1} does not embed into the tree.
inline TreeDecomposition reduce_height(const Structure& a, const TreeDecomposition& d, int n, int m) {
  require_valid(a, d);
  if (n < 0 || m < 1) throw ArgumentError("reduce_height requires n >= 0 and m >= 1");
  if (d.height() > n + 1) throw ArgumentError("decomposition height exceeds n+1");
  if (complete_embedding_height(d.tree, m) >= n + 1)
    throw ArgumentError("m^{<n+1} embeds into the decomposition tree");
  std::set<Path> p;
  for (const auto& v : d.tree.nodes())
    if (static_cast<int>(v.size()) == n && d.tree.is_leaf(v)) p.insert(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& v : d.tree.nodes()) {
      if (p.count(v)) continue;
      int in_p = 0;
      for (const auto& c : d.tree.children(v)) in_p += p.count(c) ? 1 : 0;
      if (in_p >= m) {
        p.insert(v);
        changed = true;
      }
    }
  }
  if (p.count(Path{})) throw StructuralError("root entered P although no embedding exists");
  std::vector<std::pair<Path, Path>> f;
  for (const auto& [u, v] : d.tree.edges())
    if (!p.count(u) && p.count(v)) f.push_back({u, v});
  return contract_decomposition(d, f);
}

// ---------------------------------------------------------------------------
// Levels: the definable strict order and tree extraction

using Levels = std::vector<std::vector<Element>>;

/// L_i = elements first appearing at level i.
inline Levels levels_of(const Structure& a, const TreeDecomposition& d) {
  auto rep = mu(a, d);
  Levels out(static_cast<std::size_t>(std::max(1, d.height())));
  for (const auto& [e, v] : rep.mu) out[v.size()].push_back(e);
  return out;
}

inline std::vector<int> level_index(const Structure& a, const Levels& levels) {
  std::vector<int> level(static_cast<std::size_t>(a.size()), -1);
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (auto e : levels[i]) {
      if (e < 0 || e >= a.size()) throw ArgumentError("level set contains a non-element");
      if (level[static_cast<std::size_t>(e)] >= 0) throw ArgumentError("level sets overlap at '" + a.name(e) + "'");
      level[static_cast<std::size_t>(e)] = static_cast<int>(i);
    }
  for (int e = 0; e < a.size(); ++e)
    if (level[static_cast<std::size_t>(e)] < 0) throw ArgumentError("element '" + a.name(e) + "' has no level");
  return level;
}

/// le[a][b] iff level(a) <= level(b) and a, b share a component of the
/// subgraph induced by the levels >= level(a); level-0 elements lie below all.
inline std::vector<std::vector<bool>> level_order(const Structure& a, const Levels& levels) {
  auto level = level_index(a, levels);
  auto adj = adjacency(a);
  const int n = a.size();
  std::vector<Mask> comp_of(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    Mask above = 0;
    for (int e = 0; e < n; ++e)
      if (level[static_cast<std::size_t>(e)] >= static_cast<int>(i)) above |= bit(e);
    // Level 0 is the root: below everything, whatever its components.
    auto parts = i == 0 ? std::vector<Mask>{above} : components(adj, above);
    for (Mask c : parts)
      for (Mask m = c; m; m &= m - 1) {
        int e = std::countr_zero(m);
        if (level[static_cast<std::size_t>(e)] == static_cast<int>(i)) comp_of[static_cast<std::size_t>(e)] = c;
      }
  }
  std::vector<std::vector<bool>> le(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      le[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          level[static_cast<std::size_t>(x)] <= level[static_cast<std::size_t>(y)] && (comp_of[static_cast<std::size_t>(x)] & bit(y));
  return le;
}

struct ExtractedTree {
  TreeDecomposition decomposition;
  /// Tree node of each ∼-class member.
  std::map<Element, Path> node_of;
};

/// Arranges the ∼-classes of level_order as a tree (all of L_0 forms the
/// root) with minimal bags: a class plus the outside neighbours of its up-set.
inline ExtractedTree extract_tree(const Structure& a, const Levels& levels) {
  auto level = level_index(a, levels);
  auto le = level_order(a, levels);
  const int n = a.size();
  auto adj = adjacency(a);
  // Classes: L_0, then mutual-order classes.
  std::vector<int> cls(static_cast<std::size_t>(n), -1);
  std::vector<Mask> members;
  members.push_back(0);
  for (int e = 0; e < n; ++e)
    if (level[static_cast<std::size_t>(e)] == 0) {
      cls[static_cast<std::size_t>(e)] = 0;
      members[0] |= bit(e);
    }
  for (int e = 0; e < n; ++e) {
    if (cls[static_cast<std::size_t>(e)] >= 0) continue;
    int id = static_cast<int>(members.size());
    members.push_back(0);
    for (int f = 0; f < n; ++f)
      if (cls[static_cast<std::size_t>(f)] < 0 && le[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)] &&
          le[static_cast<std::size_t>(f)][static_cast<std::size_t>(e)]) {
        cls[static_cast<std::size_t>(f)] = id;
        members.back() |= bit(f);
      }
  }
  const int k = static_cast<int>(members.size());
  auto rep = [&](int c) { return std::countr_zero(members[static_cast<std::size_t>(c)]); };
  auto below = [&](int c, int d) {  // class c strictly below class d
    if (c == d) return false;
    if (c == 0) return true;
    if (d == 0) return false;
    return static_cast<bool>(le[static_cast<std::size_t>(rep(c))][static_cast<std::size_t>(rep(d))]);
  };
  auto class_level = [&](int c) { return c == 0 ? 0 : level[static_cast<std::size_t>(rep(c))]; };
  std::vector<int> parent(static_cast<std::size_t>(k), -1);
  for (int c = 1; c < k; ++c) {
    std::vector<int> preds;
    for (int d = 0; d < k; ++d)
      if (below(d, c)) preds.push_back(d);
    for (std::size_t i = 0; i < preds.size(); ++i)
      for (std::size_t j = i + 1; j < preds.size(); ++j)
        if (!below(preds[i], preds[j]) && !below(preds[j], preds[i]))
          throw StructuralError("level order is not tree-shaped: classes of '" + a.name(rep(preds[i])) + "' and '" +
                                a.name(rep(preds[j])) + "' are incomparable below '" + a.name(rep(c)) + "'");
    int best = 0;
    for (int d : preds)
      if (below(best, d)) best = d;
    if (class_level(best) + 1 != class_level(c))
      throw StructuralError("level order skips a level between classes of '" +
                            (best == 0 ? std::string("root") : a.name(rep(best))) + "' and '" + a.name(rep(c)) + "'");
    parent[static_cast<std::size_t>(c)] = best;
  }
  // Lay out the tree; siblings ordered by their least element.
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(k));
  for (int c = 1; c < k; ++c) kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(c)])].push_back(c);
  std::vector<Path> at(static_cast<std::size_t>(k));
  std::set<Path> nodes;
  std::function<void(int, const Path&)> place = [&](int c, const Path& p) {
    at[static_cast<std::size_t>(c)] = p;
    nodes.insert(p);
    for (std::size_t i = 0; i < kids[static_cast<std::size_t>(c)].size(); ++i) {
      Path q = p;
      q.push_back(static_cast<int>(i));
      place(kids[static_cast<std::size_t>(c)][i], q);
    }
  };
  place(0, {});
  ExtractedTree out;
  out.decomposition.tree = TreeDomain(std::move(nodes));
  std::vector<Mask> up(static_cast<std::size_t>(k), 0);
  std::function<Mask(int)> up_of = [&](int c) {
    Mask m = members[static_cast<std::size_t>(c)];
    for (int d : kids[static_cast<std::size_t>(c)]) m |= up_of(d);
    return up[static_cast<std::size_t>(c)] = m;
  };
  up_of(0);
  for (int c = 0; c < k; ++c) {
    Mask nbr = 0;
    for (Mask m = up[static_cast<std::size_t>(c)]; m; m &= m - 1) nbr |= adj[static_cast<std::size_t>(std::countr_zero(m))];
    Mask bag = members[static_cast<std::size_t>(c)] | (nbr & ~up[static_cast<std::size_t>(c)]);
    auto& b = out.decomposition.bags[at[static_cast<std::size_t>(c)]];
    for (Mask m = bag; m; m &= m - 1) b.insert(std::countr_zero(m));
    for (Mask m = members[static_cast<std::size_t>(c)]; m; m &= m - 1) out.node_of[std::countr_zero(m)] = at[static_cast<std::size_t>(c)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact widths

enum class WidthMode { Tree, Path, Depth };

struct WidthResult {
  int width = -1;
  TreeDecomposition witness;
};

inline constexpr int kExactBudget = 10;

namespace detail {

/// Decomposition from an elimination ordering: bag(v) = v plus its later
/// neighbours in the fill-in graph; parent = earliest such neighbour.
inline TreeDecomposition from_elimination(const std::vector<Mask>& adj0, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  std::vector<Mask> adj = adj0;
  std::vector<int> pos(adj.size());
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
  std::vector<Mask> bag(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  Mask eliminated = 0;
  for (int i = 0; i < n; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    Mask later = adj[static_cast<std::size_t>(v)] & ~eliminated & ~bit(v);
    bag[static_cast<std::size_t>(i)] = later | bit(v);
    for (Mask m = later; m; m &= m - 1) adj[static_cast<std::size_t>(std::countr_zero(m))] |= later & ~bit(std::countr_zero(m));
    int best = -1;
    for (Mask m = later; m; m &= m - 1) {
      int u = std::countr_zero(m);
      if (best < 0 || pos[static_cast<std::size_t>(u)] < pos[static_cast<std::size_t>(best)]) best = u;
    }
    parent[static_cast<std::size_t>(i)] = best < 0 ? -1 : pos[static_cast<std::size_t>(best)];
    eliminated |= bit(v);
  }
  // Components without a later neighbour hang from the last bag.
  std::vector<BagNode> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (Mask m = bag[static_cast<std::size_t>(i)]; m; m &= m - 1) nodes[static_cast<std::size_t>(i)].bag.insert(std::countr_zero(m));
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  for (int i = 0; i < n - 1; ++i) kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)] < 0 ? n - 1 : parent[static_cast<std::size_t>(i)])].push_back(i);
  std::function<BagNode(int)> build = [&](int i) {
    BagNode b = nodes[static_cast<std::size_t>(i)];
    for (int c : kids[static_cast<std::size_t>(i)]) b.kids.push_back(build(c));
    return b;
  };
  return from_nodes(build(n - 1));
}

/// Path decomposition from a vertex ordering: bag i = v_i plus the earlier
/// vertices with a neighbour at position >= i.
inline TreeDecomposition from_layout(const std::vector<Mask>& adj, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  std::set<Path> nodes;
  std::map<Path, Bag> bags;
  Mask prefix = 0;
  for (int i = 0; i < n; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    Bag b{v};
    for (Mask m = prefix; m; m &= m - 1) {
      int u = std::countr_zero(m);
      if (adj[static_cast<std::size_t>(u)] & ~prefix) b.insert(u);
    }
    Path p(static_cast<std::size_t>(i), 0);
    nodes.insert(p);
    bags[p] = b;
    prefix |= bit(v);
  }
  return {TreeDomain(std::move(nodes)), std::move(bags)};
}

inline TreeDecomposition empty_decomposition() { return {TreeDomain::single(), {{Path{}, Bag{}}}}; }

}  // namespace detail

/// Exact tree-width, path-width or n-depth tree-width by dynamic programming
/// over vertex subsets of the Gaifman graph.
inline WidthResult exact_width(const Structure& a, WidthMode mode, int depth = 0, int budget = kExactBudget) {
  const int n = a.size();
  if (n > budget) throw BudgetError("exact_width: " + std::to_string(n) + " elements exceed budget " + std::to_string(budget));
  if (mode == WidthMode::Depth && depth < 1) throw ArgumentError("twd_n requires n >= 1");
  WidthResult res;
  if (n == 0) {
    res.witness = detail::empty_decomposition();
    return res;
  }
  auto adj = adjacency(a);
  const Mask all = full_mask(n);
  auto boundary = [&](Mask s) {  // vertices of s with a neighbour outside s
    Mask out = 0;
    for (Mask m = s; m; m &= m - 1) {
      int v = std::countr_zero(m);
      if (adj[static_cast<std::size_t>(v)] & ~s) out |= bit(v);
    }
    return out;
  };
  if (mode == WidthMode::Tree || mode == WidthMode::Path) {
    // best[S]: optimal value for eliminating / laying out S first; choice[S]: last vertex.
    std::vector<int> best(static_cast<std::size_t>(all) + 1, INT_MAX), choice(static_cast<std::size_t>(all) + 1, -1);
    best[0] = -1;
    for (Mask s = 1; s <= all; ++s) {
      for (Mask m = s; m; m &= m - 1) {
        int v = std::countr_zero(m);
        Mask rest = s & ~bit(v);
        int cost;
        if (mode == WidthMode::Tree) {
          // |Q(rest, v)|: outside vertices reachable from v through rest.
          Mask reach = bit(v), frontier = bit(v);
          while (frontier) {
            Mask next = 0;
            for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
            next &= rest & ~reach;
            reach |= next;
            frontier = next;
          }
          Mask q = 0;
          for (Mask f = reach; f; f &= f - 1) q |= adj[static_cast<std::size_t>(std::countr_zero(f))];
          q &= ~s;
          cost = popcount(q);
        } else {
          cost = popcount(boundary(s));
        }
        int val = std::max(best[static_cast<std::size_t>(rest)], cost);
        if (val < best[static_cast<std::size_t>(s)]) {
          best[static_cast<std::size_t>(s)] = val;
          choice[static_cast<std::size_t>(s)] = v;
        }
      }
    }
    std::vector<int> order;
    for (Mask s = all; s; s &= ~bit(choice[static_cast<std::size_t>(s)])) order.push_back(choice[static_cast<std::size_t>(s)]);
    std::reverse(order.begin(), order.end());
    res.witness = mode == WidthMode::Tree ? detail::from_elimination(adj, order) : detail::from_layout(adj, order);
    res.width = res.witness.width();
    return res;
  }
  // n-depth: g(C, h) for a component C whose outside neighbours are already
  // placed above; the root bag of the subtree is N(C) ∪ X for nonempty X ⊆ C.
  struct Entry {
    int value;
    Mask x;
  };
  std::vector<std::unordered_map<Mask, Entry>> memo(static_cast<std::size_t>(depth) + 1);
  auto outside = [&](Mask c) {
    Mask nb = 0;
    for (Mask m = c; m; m &= m - 1) nb |= adj[static_cast<std::size_t>(std::countr_zero(m))];
    return nb & ~c;
  };
  std::function<int(Mask, int)> g = [&](Mask c, int h) -> int {
    if (c == 0) return -1;
    if (h == 0) return INT_MAX;
    auto& table = memo[static_cast<std::size_t>(h)];
    if (auto it = table.find(c); it != table.end()) return it->second.value;
    const int base = popcount(outside(c));
    Entry e{INT_MAX, 0};
    for (Mask x = c; x; x = (x - 1) & c) {
      int val = base + popcount(x) - 1;
      if (val >= e.value) continue;
      for (Mask comp : components(adj, c & ~x)) {
        val = std::max(val, g(comp, h - 1));
        if (val >= e.value) break;
      }
      if (val < e.value) e = {val, x};
    }
    table[c] = e;
    return e.value;
  };
  // Root: the whole domain with no outside neighbours.
  g(all, depth);
  std::function<detail::BagNode(Mask, int)> build = [&](Mask c, int h) {
    Mask x = memo[static_cast<std::size_t>(h)].at(c).x;
    detail::BagNode node;
    for (Mask m = outside(c) | x; m; m &= m - 1) node.bag.insert(std::countr_zero(m));
    for (Mask comp : components(adj, c & ~x)) node.kids.push_back(build(comp, h - 1));
    return node;
  };
  res.witness = detail::from_nodes(build(all, depth));
  res.width = res.witness.width();
  return res;
}

/// Independent exhaustive computation for small structures: all elimination
/// orderings (twd), all layouts (pwd), or all level assignments through
/// extract_tree (twd_n).
inline int exact_width_exhaustive(const Structure& a, WidthMode mode, int depth = 0, int budget = 8) {
  const int n = a.size();
  if (n > budget) throw BudgetError("exhaustive width search limited to " + std::to_string(budget) + " elements");
  if (n == 0) return -1;
  auto adj = adjacency(a);
  if (mode != WidthMode::Depth) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    int best = INT_MAX;
    do {
      int w = 0;
      if (mode == WidthMode::Tree) {
        std::vector<Mask> fill = adj;
        Mask done = 0;
        for (int v : order) {
          Mask later = fill[static_cast<std::size_t>(v)] & ~done & ~bit(v);
          w = std::max(w, popcount(later));
          for (Mask m = later; m; m &= m - 1) fill[static_cast<std::size_t>(std::countr_zero(m))] |= later & ~bit(std::countr_zero(m));
          done |= bit(v);
        }
      } else {
        // Vertex separation: after placing a prefix, count placed vertices
        // with an unplaced neighbour.
        Mask placed = 0;
        for (int v : order) {
          placed |= bit(v);
          int sep = 0;
          for (Mask m = placed; m; m &= m - 1)
            if (adj[static_cast<std::size_t>(std::countr_zero(m))] & ~placed) ++sep;
          w = std::max(w, sep);
        }
      }
      best = std::min(best, w);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
  }
  if (depth < 1) throw ArgumentError("twd_n requires n >= 1");
  int best = INT_MAX;
  std::vector<int> lv(static_cast<std::size_t>(n), 0);
  for (;;) {
    Levels levels(static_cast<std::size_t>(depth));
    for (int e = 0; e < n; ++e) levels[static_cast<std::size_t>(lv[static_cast<std::size_t>(e)])].push_back(e);
    try {
      auto t = extract_tree(a, levels);
      if (t.decomposition.height() <= depth && validate(a, t.decomposition).valid)
        best = std::min(best, t.decomposition.width());
    } catch (const StructuralError&) {
    }
    int q = n - 1;
    while (q >= 0 && ++lv[static_cast<std::size_t>(q)] == depth) lv[static_cast<std::size_t>(q--)] = 0;
    if (q < 0) break;
  }
  return best;
}

}  // namespace msot
