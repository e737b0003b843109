#pragma once

// Partition refinements of incidence structures, their validation, the
// conversion to tree decompositions, and refinements obtained from
// leaves-only interpretations of coloured trees.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "msot/decomposition.hpp"
#include "msot/error.hpp"
#include "msot/structure.hpp"
#include "msot/transduction.hpp"
#include "msot/tree.hpp"
#include "msot/types.hpp"

namespace msot {

using ClassList = std::vector<std::vector<Element>>;

/// (W_v, ≈_v) for every tree vertex, W_v given as the union of its ≈_v-classes.
struct PartitionRefinement {
  TreeDomain tree;
  std::map<Path, ClassList> classes;

  std::set<Element> w(const Path& v) const {
    std::set<Element> out;
    if (auto it = classes.find(v); it != classes.end())
      for (const auto& c : it->second) out.insert(c.begin(), c.end());
    return out;
  }
  int width() const {
    int wd = 0;
    for (const auto& [_, cs] : classes) wd = std::max(wd, static_cast<int>(cs.size()));
    return wd;
  }
};

namespace detail {

/// incidence[x] = set of (i, partner) with (a, e) ∈ in_i and x one of a, e.
struct IncidenceIndex {
  std::vector<bool> is_e;
  std::vector<std::set<std::pair<int, Element>>> links;
  int r = 0;

  explicit IncidenceIndex(const IncidenceStructure& inc) {
    const auto& s = inc.structure;
    is_e.assign(static_cast<std::size_t>(s.size()), false);
    links.resize(static_cast<std::size_t>(s.size()));
    for (auto e : inc.e_part) is_e[static_cast<std::size_t>(e)] = true;
    for (const auto& sym : inc.original.symbols()) r = std::max(r, sym.arity);
    for (int i = 0; i < r; ++i) {
      auto pos = incidence_position(i);
      if (!s.signature().contains(pos)) continue;
      for (const auto& t : s.relation(pos)) {
        links[static_cast<std::size_t>(t[0])].insert({i, t[1]});
        links[static_cast<std::size_t>(t[1])].insert({i, t[0]});
      }
    }
  }

  /// Incidences of x with partners outside `excluded`.
  std::set<std::pair<int, Element>> outside(Element x, const std::set<Element>& excluded) const {
    std::set<std::pair<int, Element>> out;
    for (const auto& l : links[static_cast<std::size_t>(x)])
      if (!excluded.count(l.second)) out.insert(l);
    return out;
  }
};

}  // namespace detail

struct RefinementReport {
  bool valid = true;
  int width = 0;
  std::vector<std::string> violations;
};

inline RefinementReport validate_refinement(const IncidenceStructure& inc, const PartitionRefinement& pi) {
  RefinementReport rep;
  const auto& s = inc.structure;
  auto fail = [&](std::string m) {
    rep.valid = false;
    rep.violations.push_back(std::move(m));
  };
  auto name = [&](Element x) { return x >= 0 && x < s.size() ? s.name(x) : "#" + std::to_string(x); };
  detail::IncidenceIndex idx(inc);
  if (pi.tree.empty()) {
    fail("empty index tree");
    return rep;
  }
  for (const auto& [v, cs] : pi.classes)
    if (!pi.tree.contains(v)) fail("classes at '" + path_name(v) + "' outside the tree");
  // ≈_v is a partition of W_v into nonempty classes of a single sort.
  std::map<Path, std::map<Element, int>> class_of;
  for (const auto& v : pi.tree.nodes()) {
    auto it = pi.classes.find(v);
    if (it == pi.classes.end()) {
      fail("no classes at '" + path_name(v) + "'");
      continue;
    }
    for (std::size_t c = 0; c < it->second.size(); ++c) {
      if (it->second[c].empty()) fail("empty class at '" + path_name(v) + "'");
      for (auto x : it->second[c]) {
        if (x < 0 || x >= s.size()) {
          fail("class at '" + path_name(v) + "' contains a non-element");
          continue;
        }
        if (!class_of[v].emplace(x, static_cast<int>(c)).second)
          fail("element '" + name(x) + "' in two classes at '" + path_name(v) + "'");
        if (idx.is_e[static_cast<std::size_t>(x)] != idx.is_e[static_cast<std::size_t>(it->second[c].front())])
          fail("class at '" + path_name(v) + "' mixes '" + name(it->second[c].front()) + "' and '" + name(x) + "'");
      }
    }
  }
  if (!rep.valid) return rep;
  if (static_cast<int>(pi.w({}).size()) != s.size()) fail("root set is not the whole domain");
  for (const auto& u : pi.tree.nodes()) {
    auto wu = pi.w(u);
    auto kids = pi.tree.children(u);
    if (kids.empty()) {
      if (wu.size() != 1) fail("leaf '" + path_name(u) + "' has " + std::to_string(wu.size()) + " elements");
      continue;
    }
    std::map<Element, Path> child_of;
    for (const auto& v : kids)
      for (auto x : pi.w(v))
        if (!child_of.emplace(x, v).second) fail("successor sets of '" + path_name(u) + "' overlap at '" + name(x) + "'");
    for (auto x : wu)
      if (!child_of.count(x)) fail("element '" + name(x) + "' of '" + path_name(u) + "' missing from every successor");
    for (const auto& [x, v] : child_of)
      if (!wu.count(x)) fail("element '" + name(x) + "' of successor '" + path_name(v) + "' not in '" + path_name(u) + "'");
    // Upward coarsening (one step suffices by induction).
    for (const auto& v : kids)
      for (const auto& cls : pi.classes.at(v))
        for (std::size_t i = 1; i < cls.size(); ++i)
          if (class_of[u][cls[0]] != class_of[u][cls[i]])
            fail("coarsening fails: '" + name(cls[0]) + "' and '" + name(cls[i]) + "' equivalent at '" +
                 path_name(v) + "' but not at '" + path_name(u) + "'");
    if (!rep.valid) continue;
    // External connections agree for equivalent elements.
    for (const auto& cls : pi.classes.at(u))
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j) {
          Element x = cls[i], y = cls[j];
          auto excluded = pi.w(child_of.at(x));
          auto wy = pi.w(child_of.at(y));
          excluded.insert(wy.begin(), wy.end());
          if (idx.outside(x, excluded) != idx.outside(y, excluded))
            fail("'" + name(x) + "' and '" + name(y) + "' equivalent at '" + path_name(u) +
                 "' but connected differently outside their successors");
        }
  }
  rep.width = pi.width();
  return rep;
}

struct RefinementDecomposition {
  /// The structure encoded by the incidence structure; bags index its elements.
  Structure original;
  TreeDecomposition decomposition;
};

/// U_u = B_u ∪ C_u ∪ D_u over the leaf map l. Elements without incidences go
/// into the bag of their own leaf.
inline RefinementDecomposition to_tree_decomposition(const IncidenceStructure& inc, const PartitionRefinement& pi) {
  auto rep = validate_refinement(inc, pi);
  if (!rep.valid) throw StructuralError("invalid partition refinement: " + rep.violations.front());
  RefinementDecomposition out{from_incidence(inc), {pi.tree, {}}};
  const auto& s = inc.structure;
  std::map<Element, Path> leaf;
  for (const auto& v : pi.tree.leaves()) leaf[*pi.w(v).begin()] = v;
  detail::IncidenceIndex idx(inc);
  std::vector<Element> to_original(static_cast<std::size_t>(s.size()), -1);
  for (auto a : inc.a_part) to_original[static_cast<std::size_t>(a)] = out.original.require_index(s.name(a));
  for (const auto& u : pi.tree.nodes()) out.decomposition.bags[u];
  for (auto a : inc.a_part) {
    const Element oa = to_original[static_cast<std::size_t>(a)];
    const Path& la = leaf.at(a);
    out.decomposition.bags[la].insert(oa);
    for (const auto& link : idx.links[static_cast<std::size_t>(a)]) {
      const Path& le = leaf.at(link.second);
      Path meet = infimum(la, le);
      // B: (meet, l(a)], C: (meet, l(e)], D: meet. The C-part is the path to l(e).
      for (Path p = la; p.size() > meet.size(); p.pop_back()) out.decomposition.bags[p].insert(oa);
      for (Path p = le; p.size() > meet.size(); p.pop_back()) out.decomposition.bags[p].insert(oa);
      out.decomposition.bags[meet].insert(oa);
    }
  }
  return out;
}

/// Width bound of the conversion: (r + 3) · wd(Π).
inline int conversion_bound(const IncidenceStructure& inc, const PartitionRefinement& pi) {
  return (detail::IncidenceIndex(inc).r + 3) * pi.width();
}

// ---------------------------------------------------------------------------
// Refinements from leaves-only interpretations

struct InterpretedRefinement {
  IncidenceStructure incidence;
  PartitionRefinement refinement;
  /// Node of the tree carried by each incidence element.
  std::map<Element, Path> leaf_of;
};

/// Applies a basic scheme to a coloured order-tree whose output domain must be
/// exactly the leaves; x ≈_u y iff the rank-h types of (T_v, x) and (T_w, y)
/// agree, v and w being the successors of u above x and y.
inline InterpretedRefinement refinement_from_interpretation(const DefinitionScheme& scheme, const ColouredTree& t,
                                                            const Signature& original, int h,
                                                            int budget = kTypeBudget) {
  if (t.mode != TreeMode::Order) throw ArgumentError("refinement_from_interpretation expects an order-tree");
  Structure ts = t.to_structure();
  PreparedScheme prepared(scheme, ts.signature());
  auto img = prepared.apply(ts);
  if (!img) throw ArgumentError("scheme's χ fails on the tree");
  std::set<std::string> leaf_names;
  for (const auto& v : t.domain.leaves()) leaf_names.insert(path_name(v));
  std::set<std::string> out_names(img->domain().begin(), img->domain().end());
  if (out_names != leaf_names) throw ArgumentError("scheme is not leaves-only: output domain differs from the leaves");

  InterpretedRefinement res;
  res.incidence = IncidenceStructure::from_labelled(*img, original);
  const auto& s = res.incidence.structure;
  for (int x = 0; x < s.size(); ++x) res.leaf_of[x] = parse_path(s.name(x));
  std::map<Path, Element> elem_at;
  for (const auto& [x, p] : res.leaf_of) elem_at[p] = x;

  // Rank-h type of (T_v, x) for every node v and leaf x below it, interned.
  std::map<RankType, int> type_ids;
  auto type_of = [&](const Path& v, const Path& x) {
    std::vector<Element> keep;
    for (const auto& p : t.domain.subtree(v)) keep.push_back(ts.require_index(path_name(p)));
    Structure sub = ts.induced(keep);
    Mask param = bit(sub.require_index(path_name(x)));
    auto ty = mtype(sub, {param}, h, 1, budget);
    return type_ids.emplace(std::move(ty), static_cast<int>(type_ids.size())).first->second;
  };
  res.refinement.tree = t.domain;
  for (const auto& u : t.domain.nodes()) {
    auto& cls = res.refinement.classes[u];
    auto kids = t.domain.children(u);
    if (kids.empty()) {
      cls.push_back({elem_at.at(u)});
      continue;
    }
    std::map<int, std::vector<Element>> by_type;
    for (const auto& v : kids)
      for (const auto& p : t.domain.subtree(v))
        if (t.domain.is_leaf(p)) by_type[type_of(v, p)].push_back(elem_at.at(p));
    for (auto& [_, xs] : by_type) {
      std::sort(xs.begin(), xs.end());
      cls.push_back(std::move(xs));
    }
    std::sort(cls.begin(), cls.end());
  }
  return res;
}

}  // namespace msot
