#pragma once

// Tree domains (prefix-closed sets of direction sequences), coloured order- and
// successor-trees, and order-tree embeddings.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msot/error.hpp"
#include "msot/structure.hpp"

namespace msot {

using Path = std::vector<int>;

inline constexpr const char* kDirectionDigits =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
inline constexpr int kMaxDirection = 62;

/// Direction sequence as a string; the root is "". Character order matches
/// numeric order, so string order equals sequence order.
inline std::string path_name(const Path& p) {
  std::string s;
  for (int d : p) {
    if (d < 0 || d >= kMaxDirection) throw ArgumentError("tree direction out of range: " + std::to_string(d));
    s += kDirectionDigits[d];
  }
  return s;
}

inline Path parse_path(const std::string& s) {
  Path p;
  const std::string digits = kDirectionDigits;
  for (char c : s) {
    auto pos = digits.find(c);
    if (pos == std::string::npos) throw FormatError(std::string("invalid tree direction '") + c + "'");
    p.push_back(static_cast<int>(pos));
  }
  return p;
}

inline bool is_prefix(const Path& u, const Path& v) {
  return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

inline Path infimum(const Path& u, const Path& v) {
  Path out;
  for (std::size_t i = 0; i < std::min(u.size(), v.size()) && u[i] == v[i]; ++i) out.push_back(u[i]);
  return out;
}

inline Path parent_of(const Path& v) {
  if (v.empty()) throw ArgumentError("root has no parent");
  return Path(v.begin(), v.end() - 1);
}

class TreeDomain {
 public:
  TreeDomain() = default;
  explicit TreeDomain(std::set<Path> nodes) : nodes_(std::move(nodes)) {
    for (const auto& v : nodes_)
      if (!v.empty() && !nodes_.count(parent_of(v)))
        throw StructuralError("tree domain not prefix-closed at '" + path_name(v) + "'");
  }
  static TreeDomain single() { return TreeDomain(std::set<Path>{Path{}}); }

  static TreeDomain from_names(const std::vector<std::string>& names) {
    std::set<Path> nodes;
    for (const auto& n : names) nodes.insert(parse_path(n));
    return TreeDomain(std::move(nodes));
  }

  bool empty() const { return nodes_.empty(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool contains(const Path& v) const { return nodes_.count(v) > 0; }
  /// Nodes in lexicographic (pre-)order.
  const std::set<Path>& nodes() const { return nodes_; }

  std::vector<Path> children(const Path& v) const {
    std::vector<Path> out;
    Path c = v;
    c.push_back(0);
    for (auto it = nodes_.lower_bound(c); it != nodes_.end() && is_prefix(v, *it); ++it)
      if (it->size() == v.size() + 1) out.push_back(*it);
    return out;
  }
  int out_degree(const Path& v) const { return static_cast<int>(children(v).size()); }
  bool is_leaf(const Path& v) const { return out_degree(v) == 0; }

  /// Number of levels: 0 for the empty tree, 1 for a single vertex.
  int height() const {
    int h = 0;
    for (const auto& v : nodes_) h = std::max(h, static_cast<int>(v.size()) + 1);
    return h;
  }

  std::vector<Path> leaves() const {
    std::vector<Path> out;
    for (const auto& v : nodes_)
      if (is_leaf(v)) out.push_back(v);
    return out;
  }

  /// Nodes of the subtree rooted at v.
  std::vector<Path> subtree(const Path& v) const {
    std::vector<Path> out;
    for (auto it = nodes_.lower_bound(v); it != nodes_.end() && is_prefix(v, *it); ++it) out.push_back(*it);
    return out;
  }

  /// Subtree at v re-rooted at the empty sequence.
  TreeDomain subtree_domain(const Path& v) const {
    std::set<Path> out;
    for (const auto& u : subtree(v)) out.insert(Path(u.begin() + static_cast<long>(v.size()), u.end()));
    return TreeDomain(std::move(out));
  }

  /// Tree edges (parent, child).
  std::vector<std::pair<Path, Path>> edges() const {
    std::vector<std::pair<Path, Path>> out;
    for (const auto& v : nodes_)
      if (!v.empty()) out.push_back({parent_of(v), v});
    return out;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& v : nodes_) out.push_back(path_name(v));
    return out;
  }

  friend bool operator==(const TreeDomain&, const TreeDomain&) = default;

 private:
  std::set<Path> nodes_;
};

/// m^{<n}: all sequences over [m] of length < n.
inline TreeDomain complete_tree_domain(int m, int n) {
  if (m < 0 || n < 0) throw ArgumentError("complete_tree parameters must be >= 0");
  std::set<Path> nodes;
  if (n == 0) return TreeDomain(nodes);
  std::function<void(Path&)> rec = [&](Path& p) {
    nodes.insert(p);
    if (static_cast<int>(p.size()) + 1 >= n) return;
    for (int d = 0; d < m; ++d) {
      p.push_back(d);
      rec(p);
      p.pop_back();
    }
  };
  Path root;
  rec(root);
  return TreeDomain(std::move(nodes));
}

/// Renumbers children so that directions are 0, 1, ... in sibling order.
inline TreeDomain normalize_directions(const TreeDomain& t) {
  std::set<Path> out;
  if (t.empty()) return TreeDomain(out);
  std::function<void(const Path&, const Path&)> rec = [&](const Path& src, const Path& dst) {
    out.insert(dst);
    auto ch = t.children(src);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      Path d = dst;
      d.push_back(static_cast<int>(i));
      rec(ch[i], d);
    }
  };
  rec(Path{}, Path{});
  return TreeDomain(std::move(out));
}

/// Canonical string of the unordered rooted shape; equal iff the trees are isomorphic.
inline std::string tree_shape_key(const TreeDomain& t, const Path& v = {}) {
  if (t.empty()) return "";
  std::vector<std::string> ch;
  for (const auto& c : t.children(v)) ch.push_back(tree_shape_key(t, c));
  std::sort(ch.begin(), ch.end());
  std::string s = "(";
  for (const auto& c : ch) s += c;
  return s + ")";
}

// ---------------------------------------------------------------------------

enum class TreeMode { Order, Successor };

inline constexpr const char* kOrderRel = "le";
inline constexpr const char* kSuccessorRel = "suc";
inline std::string colour_name(int i) { return "P" + std::to_string(i); }

struct ColouredTree {
  TreeDomain domain;
  TreeMode mode = TreeMode::Successor;
  std::vector<std::set<Path>> colours;

  /// The tree as a relational structure: elements are direction strings,
  /// `le` (order mode) or `suc` (successor mode), plus unary colours P0, P1, ...
  Structure to_structure() const {
    Signature sig;
    const char* rel = mode == TreeMode::Order ? kOrderRel : kSuccessorRel;
    sig.add(rel, 2);
    for (std::size_t i = 0; i < colours.size(); ++i) sig.add(colour_name(static_cast<int>(i)), 1);
    std::map<std::string, std::vector<NamedTuple>> rels;
    auto& r = rels[rel];
    for (const auto& u : domain.nodes()) {
      if (mode == TreeMode::Order) {
        for (const auto& v : domain.subtree(u)) r.push_back({path_name(u), path_name(v)});
      } else {
        for (const auto& c : domain.children(u)) r.push_back({path_name(u), path_name(c)});
      }
    }
    for (std::size_t i = 0; i < colours.size(); ++i) {
      auto& p = rels[colour_name(static_cast<int>(i))];
      for (const auto& v : colours[i]) {
        if (!domain.contains(v)) throw StructuralError("colour set contains a non-node");
        p.push_back({path_name(v)});
      }
    }
    return Structure(sig, domain.names(), rels);
  }

  /// Reads a tree back from its relational form. Parent links come from the
  /// relation alone; siblings are numbered in element-name order.
  static ColouredTree from_structure(const Structure& s, TreeMode mode, int colour_count) {
    const int n = s.size();
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    if (mode == TreeMode::Successor) {
      for (const auto& t : s.relation(kSuccessorRel)) {
        if (parent[static_cast<std::size_t>(t[1])] >= 0) throw StructuralError("vertex with two parents");
        parent[static_cast<std::size_t>(t[1])] = t[0];
      }
    } else {
      // Parent = the strict ancestor with the most strict ancestors.
      std::vector<std::vector<int>> anc(static_cast<std::size_t>(n));
      for (const auto& t : s.relation(kOrderRel))
        if (t[0] != t[1]) anc[static_cast<std::size_t>(t[1])].push_back(t[0]);
      for (int v = 0; v < n; ++v) {
        int best = -1;
        for (int a : anc[static_cast<std::size_t>(v)])
          if (best < 0 || anc[static_cast<std::size_t>(a)].size() > anc[static_cast<std::size_t>(best)].size()) best = a;
        parent[static_cast<std::size_t>(v)] = best;
      }
    }
    std::vector<int> roots;
    std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (parent[static_cast<std::size_t>(v)] < 0) roots.push_back(v);
      else kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);
    }
    ColouredTree out;
    out.mode = mode;
    out.colours.resize(static_cast<std::size_t>(colour_count));
    if (n == 0) return out;
    if (roots.size() != 1) throw StructuralError("relation does not describe a rooted tree");
    std::vector<Path> pos(static_cast<std::size_t>(n));
    std::set<Path> nodes;
    int seen = 0;
    std::function<void(int, const Path&)> rec = [&](int v, const Path& p) {
      if (++seen > n) throw StructuralError("cycle in tree relation");
      pos[static_cast<std::size_t>(v)] = p;
      nodes.insert(p);
      for (std::size_t i = 0; i < kids[static_cast<std::size_t>(v)].size(); ++i) {
        Path c = p;
        c.push_back(static_cast<int>(i));
        rec(kids[static_cast<std::size_t>(v)][i], c);
      }
    };
    rec(roots[0], {});
    if (seen != n) throw StructuralError("relation does not describe a rooted tree");
    out.domain = TreeDomain(std::move(nodes));
    for (int i = 0; i < colour_count; ++i)
      for (const auto& t : s.relation(colour_name(i))) out.colours[static_cast<std::size_t>(i)].insert(pos[static_cast<std::size_t>(t[0])]);
    return out;
  }

  friend bool operator==(const ColouredTree&, const ColouredTree&) = default;
};

/// Switches between order- and successor-tree representations by way of the
/// relational form of the source mode.
inline ColouredTree convert_tree(const ColouredTree& t, TreeMode target) {
  ColouredTree read = ColouredTree::from_structure(t.to_structure(), t.mode, static_cast<int>(t.colours.size()));
  read.mode = target;
  return read;
}

/// Successor tree seen as an undirected graph on direction strings.
inline Structure tree_graph(const TreeDomain& t) {
  std::map<std::string, std::vector<NamedTuple>> rels;
  auto& e = rels["edg"];
  for (const auto& [p, c] : t.edges()) {
    e.push_back({path_name(p), path_name(c)});
    e.push_back({path_name(c), path_name(p)});
  }
  return Structure(Signature{{"edg", 2}}, t.names(), rels);
}

/// Order-preserving injective map S -> T (u ⪯ v iff f(u) ⪯ f(v)), if any.
inline std::optional<std::map<Path, Path>> embed_order_tree(const TreeDomain& s, const TreeDomain& t,
                                                            int budget = 24) {
  if (s.size() > budget) throw BudgetError("embed_order_tree: source tree exceeds budget");
  std::vector<Path> src(s.nodes().begin(), s.nodes().end());
  std::vector<Path> dst(t.nodes().begin(), t.nodes().end());
  std::map<Path, Path> f;
  std::set<Path> used;
  long steps = 0;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == src.size()) return true;
    if (++steps > 50'000'000) throw BudgetError("embed_order_tree: search budget exhausted");
    const Path& u = src[i];
    const Path* lower = nullptr;
    if (!u.empty()) lower = &f.at(parent_of(u));
    for (const auto& x : dst) {
      if (used.count(x)) continue;
      if (lower && !(is_prefix(*lower, x) && *lower != x)) continue;
      bool ok = true;
      for (const auto& [w, fw] : f)
        if (is_prefix(w, u) != is_prefix(fw, x) || is_prefix(u, w) != is_prefix(x, fw)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      f[u] = x;
      used.insert(x);
      if (rec(i + 1)) return true;
      f.erase(u);
      used.erase(x);
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return f;
}

/// Largest h such that m^{<h} order-embeds into the subtree at v.
inline int complete_embedding_height(const TreeDomain& t, int m, const Path& v = {}) {
  if (m < 1) throw ArgumentError("branching must be >= 1");
  if (!t.contains(v)) return 0;
  std::vector<int> hs;
  for (const auto& c : t.children(v)) hs.push_back(complete_embedding_height(t, m, c));
  std::sort(hs.rbegin(), hs.rend());
  int best = hs.empty() ? 1 : std::max(1, hs[0]);
  if (static_cast<int>(hs.size()) >= m) best = std::max(best, 1 + hs[static_cast<std::size_t>(m - 1)]);
  return best;
}

/// Vertex w with v_i ⊓ v_j = w for all i ≠ j, provided all v_i share a level.
inline std::optional<Path> horizontally_related(const TreeDomain& t, const std::vector<Path>& vs) {
  if (vs.empty()) return std::nullopt;
  for (const auto& v : vs)
    if (!t.contains(v)) throw ArgumentError("vertex '" + path_name(v) + "' not in tree");
  for (const auto& v : vs)
    if (v.size() != vs[0].size()) return std::nullopt;
  if (vs.size() == 1) return vs[0];
  std::optional<Path> w;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (vs[i] == vs[j]) throw ArgumentError("horizontally_related expects distinct vertices");
      auto m = infimum(vs[i], vs[j]);
      if (w && *w != m) return std::nullopt;
      w = m;
    }
  return w;
}

}  // namespace msot
