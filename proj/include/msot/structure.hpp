#pragma once

// Finite relational structures, signatures, incidence encodings, Gaifman
// graphs, disjoint unions, sparsity and isomorphism.
//
// Elements are opaque strings. A Structure keeps its domain sorted
// lexicographically and refers to elements internally by their position in
// that order, so enumeration order is reproducible.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "msot/error.hpp"

namespace msot {

using Element = int;
using Tuple = std::vector<Element>;
using Mask = std::uint64_t;

inline Mask bit(int i) { return Mask{1} << i; }
inline int popcount(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }

struct Symbol {
  std::string name;
  int arity = 1;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<Symbol> symbols) {
    for (const auto& s : symbols) add(s.name, s.arity);
  }
  explicit Signature(const std::vector<Symbol>& symbols) {
    for (const auto& s : symbols) add(s.name, s.arity);
  }

  void add(const std::string& name, int arity) {
    if (arity < 1) throw SignatureError("symbol '" + name + "' must have arity >= 1");
    if (auto a = arity_of(name)) {
      if (*a != arity) throw SignatureError("symbol '" + name + "' declared with two arities");
      return;
    }
    if (std::find(constants_.begin(), constants_.end(), name) != constants_.end())
      throw SignatureError("name '" + name + "' used as both constant and relation");
    symbols_.push_back({name, arity});
  }

  void add_constant(const std::string& name) {
    if (arity_of(name)) throw SignatureError("name '" + name + "' used as both constant and relation");
    if (std::find(constants_.begin(), constants_.end(), name) == constants_.end())
      constants_.push_back(name);
  }

  std::optional<int> arity_of(const std::string& name) const {
    for (const auto& s : symbols_)
      if (s.name == name) return s.arity;
    return std::nullopt;
  }
  bool contains(const std::string& name) const { return arity_of(name).has_value(); }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<std::string>& constants() const { return constants_; }

  int max_arity() const {
    int r = 0;
    for (const auto& s : symbols_) r = std::max(r, s.arity);
    return r;
  }

  /// Union of two signatures; a shared name must agree on its arity.
  static Signature merge(const Signature& a, const Signature& b) {
    Signature out = a;
    for (const auto& s : b.symbols_) out.add(s.name, s.arity);
    for (const auto& c : b.constants_) out.add_constant(c);
    return out;
  }

  /// Same symbol set (order-insensitive).
  bool same_as(const Signature& o) const {
    if (symbols_.size() != o.symbols_.size() || constants_.size() != o.constants_.size()) return false;
    for (const auto& s : symbols_)
      if (o.arity_of(s.name) != s.arity) return false;
    for (const auto& c : constants_)
      if (std::find(o.constants_.begin(), o.constants_.end(), c) == o.constants_.end()) return false;
    return true;
  }

  friend bool operator==(const Signature& a, const Signature& b) { return a.same_as(b); }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::string> constants_;
};

using NamedTuple = std::vector<std::string>;

/// Immutable finite relational structure.
class Structure {
 public:
  Structure() = default;

  /// Builds a structure from element names; tuples are given by name.
  Structure(Signature signature, std::vector<std::string> domain,
            const std::map<std::string, std::vector<NamedTuple>>& relations,
            const std::map<std::string, std::string>& constants = {})
      : signature_(std::move(signature)), domain_(std::move(domain)) {
    std::sort(domain_.begin(), domain_.end());
    if (std::adjacent_find(domain_.begin(), domain_.end()) != domain_.end())
      throw StructuralError("duplicate element in domain");
    for (const auto& s : signature_.symbols()) relations_[s.name];
    for (const auto& [name, tuples] : relations) {
      auto arity = signature_.arity_of(name);
      if (!arity) throw SignatureError("relation '" + name + "' not in signature");
      auto& target = relations_[name];
      for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != *arity)
          throw StructuralError("tuple of wrong arity in relation '" + name + "'");
        Tuple idx;
        idx.reserve(t.size());
        for (const auto& e : t) idx.push_back(require_index(e));
        target.insert(std::move(idx));
      }
    }
    for (const auto& c : signature_.constants()) {
      auto it = constants.find(c);
      if (it == constants.end()) throw StructuralError("constant '" + c + "' has no interpretation");
      constants_[c] = require_index(it->second);
    }
  }

  /// Builds from already-indexed data; `domain` must be sorted and unique.
  static Structure from_indices(Signature signature, std::vector<std::string> domain,
                                std::map<std::string, std::set<Tuple>> relations,
                                std::map<std::string, Element> constants = {}) {
    Structure s;
    s.signature_ = std::move(signature);
    s.domain_ = std::move(domain);
    if (!std::is_sorted(s.domain_.begin(), s.domain_.end()) ||
        std::adjacent_find(s.domain_.begin(), s.domain_.end()) != s.domain_.end())
      throw StructuralError("domain must be sorted and duplicate-free");
    for (const auto& sym : s.signature_.symbols()) s.relations_[sym.name];
    const int n = s.size();
    for (auto& [name, tuples] : relations) {
      auto arity = s.signature_.arity_of(name);
      if (!arity) throw SignatureError("relation '" + name + "' not in signature");
      for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != *arity) throw StructuralError("tuple of wrong arity in '" + name + "'");
        for (auto e : t)
          if (e < 0 || e >= n) throw StructuralError("tuple component outside domain in '" + name + "'");
      }
      s.relations_[name] = std::move(tuples);
    }
    for (const auto& c : s.signature_.constants()) {
      auto it = constants.find(c);
      if (it == constants.end() || it->second < 0 || it->second >= n)
        throw StructuralError("constant '" + c + "' has no valid interpretation");
      s.constants_[c] = it->second;
    }
    return s;
  }

  const Signature& signature() const { return signature_; }
  int size() const { return static_cast<int>(domain_.size()); }
  bool empty() const { return domain_.empty(); }
  const std::vector<std::string>& domain() const { return domain_; }
  const std::string& name(Element e) const { return domain_.at(static_cast<std::size_t>(e)); }

  std::optional<Element> index(const std::string& name) const {
    auto it = std::lower_bound(domain_.begin(), domain_.end(), name);
    if (it == domain_.end() || *it != name) return std::nullopt;
    return static_cast<Element>(it - domain_.begin());
  }
  Element require_index(const std::string& name) const {
    auto i = index(name);
    if (!i) throw StructuralError("element '" + name + "' not in domain");
    return *i;
  }

  const std::set<Tuple>& relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw SignatureError("relation '" + name + "' not in signature");
    return it->second;
  }
  const std::map<std::string, std::set<Tuple>>& relations() const { return relations_; }
  const std::map<std::string, Element>& constants() const { return constants_; }

  bool holds(const std::string& rel, const Tuple& t) const { return relation(rel).count(t) > 0; }

  int tuple_count() const {
    int c = 0;
    for (const auto& [_, ts] : relations_) c += static_cast<int>(ts.size());
    return c;
  }

  NamedTuple names_of(const Tuple& t) const {
    NamedTuple out;
    for (auto e : t) out.push_back(name(e));
    return out;
  }

  /// Relations by element name, in canonical order.
  std::map<std::string, std::vector<NamedTuple>> named_relations() const {
    std::map<std::string, std::vector<NamedTuple>> out;
    for (const auto& [r, ts] : relations_) {
      auto& v = out[r];
      for (const auto& t : ts) v.push_back(names_of(t));
    }
    return out;
  }

  std::map<std::string, std::string> named_constants() const {
    std::map<std::string, std::string> out;
    for (const auto& [c, e] : constants_) out[c] = name(e);
    return out;
  }

  /// Same structure expanded by an extra relation (replacing one of the same name).
  Structure with_relation(const std::string& rel, int arity, std::set<Tuple> tuples) const {
    Structure s = *this;
    s.signature_.add(rel, arity);
    for (const auto& t : tuples)
      if (static_cast<int>(t.size()) != arity) throw StructuralError("tuple of wrong arity in '" + rel + "'");
    s.relations_[rel] = std::move(tuples);
    return s;
  }

  /// Expansion by a unary predicate given as a bitmask (domain size <= 64).
  Structure with_unary(const std::string& rel, Mask members) const {
    std::set<Tuple> ts;
    for (int i = 0; i < size(); ++i)
      if (members & bit(i)) ts.insert(Tuple{i});
    return with_relation(rel, 1, std::move(ts));
  }

  /// Substructure induced by the given elements (their names are kept).
  Structure induced(const std::vector<Element>& keep) const {
    std::vector<Element> ks = keep;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<int> remap(domain_.size(), -1);
    std::vector<std::string> dom;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      remap[static_cast<std::size_t>(ks[i])] = static_cast<int>(i);
      dom.push_back(name(ks[i]));
    }
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [r, ts] : relations_) {
      auto& out = rels[r];
      for (const auto& t : ts) {
        Tuple nt;
        bool inside = true;
        for (auto e : t) {
          if (remap[static_cast<std::size_t>(e)] < 0) { inside = false; break; }
          nt.push_back(remap[static_cast<std::size_t>(e)]);
        }
        if (inside) out.insert(std::move(nt));
      }
    }
    Signature sig;
    for (const auto& s : signature_.symbols()) sig.add(s.name, s.arity);
    return from_indices(sig, std::move(dom), std::move(rels));
  }

  /// Renames every element; the renaming must be injective.
  Structure renamed(const std::function<std::string(const std::string&)>& f) const {
    std::vector<std::string> dom;
    for (const auto& d : domain_) dom.push_back(f(d));
    return Structure(signature_, dom, renamed_relations(f), renamed_constants(f));
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.signature_ == b.signature_ && a.domain_ == b.domain_ && a.relations_ == b.relations_ &&
           a.constants_ == b.constants_;
  }
  friend bool operator<(const Structure& a, const Structure& b) {
    if (a.domain_ != b.domain_) return a.domain_ < b.domain_;
    return a.relations_ < b.relations_;
  }

 private:
  std::map<std::string, std::vector<NamedTuple>> renamed_relations(
      const std::function<std::string(const std::string&)>& f) const {
    std::map<std::string, std::vector<NamedTuple>> out;
    for (const auto& [r, ts] : relations_) {
      auto& v = out[r];
      for (const auto& t : ts) {
        NamedTuple nt;
        for (auto e : t) nt.push_back(f(name(e)));
        v.push_back(std::move(nt));
      }
    }
    return out;
  }
  std::map<std::string, std::string> renamed_constants(
      const std::function<std::string(const std::string&)>& f) const {
    std::map<std::string, std::string> out;
    for (const auto& [c, e] : constants_) out[c] = f(name(e));
    return out;
  }

  Signature signature_;
  std::vector<std::string> domain_;
  std::map<std::string, std::set<Tuple>> relations_;
  std::map<std::string, Element> constants_;
};

// ---------------------------------------------------------------------------
// Incidence structures

inline std::string incidence_label(const std::string& rel) { return "P_" + rel; }
inline std::string incidence_position(int i) { return "in_" + std::to_string(i); }

/// The incidence structure of some structure: one element per relation tuple,
/// unary labels P_R and position relations in_i.
struct IncidenceStructure {
  Structure structure;
  /// Signature of the encoded structure (arities are needed for decoding).
  Signature original;
  std::vector<Element> a_part;
  std::vector<Element> e_part;
  /// E-element -> (relation symbol, tuple by element name).
  std::map<Element, std::pair<std::string, NamedTuple>> origin;

  /// Recovers the bipartition from the labels: E-part = elements carrying a P_R label.
  static IncidenceStructure from_labelled(Structure s, Signature original) {
    IncidenceStructure inc;
    std::vector<bool> is_e(static_cast<std::size_t>(s.size()), false);
    for (const auto& sym : original.symbols()) {
      auto label = incidence_label(sym.name);
      if (!s.signature().contains(label)) continue;
      for (const auto& t : s.relation(label)) is_e[static_cast<std::size_t>(t[0])] = true;
    }
    for (int i = 0; i < s.size(); ++i) (is_e[static_cast<std::size_t>(i)] ? inc.e_part : inc.a_part).push_back(i);
    inc.structure = std::move(s);
    inc.original = std::move(original);
    return inc;
  }
};

inline Signature incidence_signature(const Signature& sig) {
  Signature out;
  for (const auto& s : sig.symbols()) out.add(incidence_label(s.name), 1);
  for (int i = 0; i < sig.max_arity(); ++i) out.add(incidence_position(i), 2);
  return out;
}

inline std::string tuple_element_name(const std::string& rel, const NamedTuple& t) {
  std::string s = rel + "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

/// One E-element per (relation symbol, tuple) pair.
inline IncidenceStructure to_incidence(const Structure& a) {
  Signature sig = incidence_signature(a.signature());
  std::vector<std::string> names = a.domain();
  std::set<std::string> used(names.begin(), names.end());
  std::vector<std::pair<std::string, std::pair<std::string, NamedTuple>>> tuples;
  for (const auto& sym : a.signature().symbols()) {
    for (const auto& t : a.relation(sym.name)) {
      auto nt = a.names_of(t);
      std::string n = tuple_element_name(sym.name, nt);
      while (used.count(n)) n += "'";
      used.insert(n);
      names.push_back(n);
      tuples.push_back({n, {sym.name, nt}});
    }
  }
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& [n, o] : tuples) {
    rels[incidence_label(o.first)].push_back({n});
    for (std::size_t i = 0; i < o.second.size(); ++i)
      rels[incidence_position(static_cast<int>(i))].push_back({o.second[i], n});
  }
  Structure s(sig, names, rels);
  IncidenceStructure inc;
  for (const auto& d : a.domain()) inc.a_part.push_back(s.require_index(d));
  for (const auto& [n, o] : tuples) {
    auto idx = s.require_index(n);
    inc.e_part.push_back(idx);
    inc.origin[idx] = o;
  }
  std::sort(inc.a_part.begin(), inc.a_part.end());
  std::sort(inc.e_part.begin(), inc.e_part.end());
  inc.structure = std::move(s);
  inc.original = a.signature();
  return inc;
}

/// Decodes an incidence structure from its relations alone.
inline Structure from_incidence(const IncidenceStructure& inc) {
  const Structure& s = inc.structure;
  std::vector<bool> is_e(static_cast<std::size_t>(s.size()), false);
  for (auto e : inc.e_part) is_e[static_cast<std::size_t>(e)] = true;
  std::vector<std::string> dom;
  for (auto a : inc.a_part) {
    if (is_e[static_cast<std::size_t>(a)]) throw StructuralError("element in both A-part and E-part");
    dom.push_back(s.name(a));
  }
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (auto e : inc.e_part) {
    std::optional<std::string> rel;
    for (const auto& sym : inc.original.symbols()) {
      auto label = incidence_label(sym.name);
      if (s.signature().contains(label) && s.holds(label, {e})) {
        if (rel) throw StructuralError("E-element '" + s.name(e) + "' carries two relation labels");
        rel = sym.name;
      }
    }
    if (!rel) throw StructuralError("E-element '" + s.name(e) + "' carries no relation label");
    const int arity = *inc.original.arity_of(*rel);
    NamedTuple t;
    for (int i = 0; i < arity; ++i) {
      auto pos = incidence_position(i);
      std::optional<Element> comp;
      if (s.signature().contains(pos))
        for (const auto& p : s.relation(pos))
          if (p[1] == e) {
            if (comp) throw StructuralError("E-element '" + s.name(e) + "' has two components at " + pos);
            comp = p[0];
          }
      if (!comp) throw StructuralError("E-element '" + s.name(e) + "' missing " + pos);
      if (is_e[static_cast<std::size_t>(*comp)]) throw StructuralError("in_i links two E-elements");
      t.push_back(s.name(*comp));
    }
    rels[*rel].push_back(std::move(t));
  }
  return Structure(inc.original, dom, rels);
}

// ---------------------------------------------------------------------------

inline const char* kEdge = "edg";

inline Signature graph_signature() { return Signature{{kEdge, 2}}; }

/// Gaifman graph: symmetric, loop-free edg joining co-occurring elements.
inline Structure gaifman(const Structure& a) {
  std::set<Tuple> edges;
  for (const auto& [_, ts] : a.relations())
    for (const auto& t : ts)
      for (auto u : t)
        for (auto v : t)
          if (u != v) edges.insert({u, v});
  return Structure::from_indices(graph_signature(), a.domain(), {{kEdge, std::move(edges)}});
}

/// Tagged disjoint union; the signature is the union of both signatures.
inline Structure disjoint_union(const Structure& a, const Structure& b) {
  Signature sig = Signature::merge(a.signature(), b.signature());
  std::vector<std::string> dom;
  for (const auto& d : a.domain()) dom.push_back("0." + d);
  for (const auto& d : b.domain()) dom.push_back("1." + d);
  std::map<std::string, std::vector<NamedTuple>> rels;
  auto add = [&](const Structure& s, const std::string& tag) {
    for (const auto& [r, ts] : s.relations()) {
      auto& v = rels[r];
      for (const auto& t : ts) {
        NamedTuple nt;
        for (auto e : t) nt.push_back(tag + s.name(e));
        v.push_back(std::move(nt));
      }
    }
  };
  add(a, "0.");
  add(b, "1.");
  std::map<std::string, std::string> consts;
  for (const auto& [c, e] : a.constants()) consts[c] = "0." + a.name(e);
  for (const auto& [c, e] : b.constants()) {
    if (consts.count(c)) throw SignatureError("constant '" + c + "' interpreted in both operands");
    consts[c] = "1." + b.name(e);
  }
  return Structure(sig, dom, rels, consts);
}

// ---------------------------------------------------------------------------
// k-sparsity

struct SparsityResult {
  bool sparse = true;
  /// On failure: a violating subset and the relation it violates.
  std::vector<std::string> witness_subset;
  std::string witness_relation;
};

/// Exhaustive check of |R ∩ X^ar(R)| <= k|X| over all X ⊆ A.
///
/// Only elements occurring in R matter, and a violating X always has a
/// violating tuple-connected component, so the enumeration runs per component
/// of each relation's support. `budget` bounds the domain size.
inline SparsityResult is_k_sparse(const Structure& a, long k, int budget = 20) {
  if (a.size() > budget)
    throw BudgetError("is_k_sparse: domain of size " + std::to_string(a.size()) + " exceeds budget " +
                      std::to_string(budget));
  SparsityResult res;
  for (const auto& [rel, ts] : a.relations()) {
    // Union-find over elements occurring in R.
    std::vector<int> parent(static_cast<std::size_t>(a.size()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
    };
    std::vector<bool> occurs(static_cast<std::size_t>(a.size()), false);
    for (const auto& t : ts)
      for (auto e : t) {
        occurs[static_cast<std::size_t>(e)] = true;
        parent[static_cast<std::size_t>(find(e))] = find(t[0]);
      }
    std::map<int, std::vector<Element>> comps;
    for (int e = 0; e < a.size(); ++e)
      if (occurs[static_cast<std::size_t>(e)]) comps[find(e)].push_back(e);
    for (const auto& [root, members] : comps) {
      const int m = static_cast<int>(members.size());
      std::vector<int> local(static_cast<std::size_t>(a.size()), -1);
      for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = i;
      std::vector<Mask> tmasks;
      for (const auto& t : ts) {
        if (find(t[0]) != root) continue;
        Mask tm = 0;
        for (auto e : t) tm |= bit(local[static_cast<std::size_t>(e)]);
        tmasks.push_back(tm);
      }
      for (Mask x = 1; x < bit(m); ++x) {
        long count = 0;
        for (auto tm : tmasks)
          if ((tm & ~x) == 0) ++count;
        if (count > k * popcount(x)) {
          res.sparse = false;
          res.witness_relation = rel;
          for (int i = 0; i < m; ++i)
            if (x & bit(i)) res.witness_subset.push_back(a.name(members[static_cast<std::size_t>(i)]));
          return res;
        }
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  v *= 0x9e3779b97f4a7c15ULL;
  v ^= v >> 29;
  return (h ^ v) * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL;
}

/// Colour refinement over all relations. An element's signature is a hash of
/// its colour and the sorted hashes of its incident tuples (position, tuple
/// colours, equality pattern). Colours are ranks of the sorted signatures, so
/// they are comparable across structures refined together.
inline std::vector<std::vector<int>> refine_colours(const std::vector<const Structure*>& ss) {
  std::vector<std::vector<int>> colour;
  for (const auto* s : ss) colour.emplace_back(static_cast<std::size_t>(s->size()), 0);
  std::size_t classes = 1;
  std::vector<std::uint64_t> entries;
  for (int round = 0;; ++round) {
    std::vector<std::vector<std::uint64_t>> sigs(ss.size());
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const Structure& s = *ss[k];
      const auto& col = colour[k];
      std::vector<std::vector<std::uint64_t>> per(static_cast<std::size_t>(s.size()));
      std::uint64_t rel_id = 0;
      for (const auto& [r, ts] : s.relations()) {
        ++rel_id;
        for (const auto& t : ts) {
          std::uint64_t th = mix(rel_id, t.size());
          for (auto x : t) th = mix(th, static_cast<std::uint64_t>(col[static_cast<std::size_t>(x)]));
          for (std::size_t i = 0; i < t.size(); ++i) {
            std::uint64_t h = mix(th, i);
            for (std::size_t j = 0; j < t.size(); ++j) h = mix(h, t[j] == t[i]);
            per[static_cast<std::size_t>(t[i])].push_back(h);
          }
        }
      }
      auto& sg = sigs[k];
      sg.resize(static_cast<std::size_t>(s.size()));
      for (std::size_t e = 0; e < sg.size(); ++e) {
        auto& p = per[e];
        std::sort(p.begin(), p.end());
        std::uint64_t h = mix(static_cast<std::uint64_t>(col[e]), p.size());
        for (auto v : p) h = mix(h, v);
        sg[e] = h;
      }
    }
    entries.clear();
    for (const auto& sg : sigs) entries.insert(entries.end(), sg.begin(), sg.end());
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    for (std::size_t k = 0; k < ss.size(); ++k)
      for (std::size_t e = 0; e < sigs[k].size(); ++e)
        colour[k][e] = static_cast<int>(std::lower_bound(entries.begin(), entries.end(), sigs[k][e]) - entries.begin());
    if ((entries.size() == classes && round > 0) || static_cast<std::size_t>(round) > entries.size()) break;
    classes = entries.size();
  }
  return colour;
}

}  // namespace detail

/// Returns a bijection f : dom(a) -> dom(b) preserving every relation and
/// constant, or nullopt.
inline std::optional<std::vector<Element>> find_isomorphism(const Structure& a, const Structure& b) {
  if (a.size() != b.size() || !(a.signature() == b.signature())) return std::nullopt;
  for (const auto& [r, ts] : a.relations())
    if (b.relation(r).size() != ts.size()) return std::nullopt;
  const int n = a.size();
  auto colours = detail::refine_colours({&a, &b});
  {
    auto ca = colours[0], cb = colours[1];
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return std::nullopt;
  }
  // Tuples incident to each element, for incremental checking.
  auto incident = [](const Structure& s) {
    std::vector<std::vector<std::pair<const std::string*, const Tuple*>>> inc(static_cast<std::size_t>(s.size()));
    for (const auto& [r, ts] : s.relations())
      for (const auto& t : ts) {
        std::set<Element> seen(t.begin(), t.end());
        for (auto e : seen) inc[static_cast<std::size_t>(e)].push_back({&r, &t});
      }
    return inc;
  };
  auto inc_a = incident(a), inc_b = incident(b);
  std::vector<Element> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::map<int, int> class_size;
  for (auto c : colours[0]) ++class_size[c];
  std::stable_sort(order.begin(), order.end(), [&](Element x, Element y) {
    return class_size[colours[0][static_cast<std::size_t>(x)]] < class_size[colours[0][static_cast<std::size_t>(y)]];
  });
  std::vector<Element> f(static_cast<std::size_t>(n), -1), g(static_cast<std::size_t>(n), -1);
  auto consistent = [&](Element x) {
    for (const auto& [r, t] : inc_a[static_cast<std::size_t>(x)]) {
      Tuple img;
      for (auto e : *t) {
        if (f[static_cast<std::size_t>(e)] < 0) { img.clear(); break; }
        img.push_back(f[static_cast<std::size_t>(e)]);
      }
      if (!img.empty() && !b.holds(*r, img)) return false;
    }
    Element y = f[static_cast<std::size_t>(x)];
    for (const auto& [r, t] : inc_b[static_cast<std::size_t>(y)]) {
      Tuple pre;
      for (auto e : *t) {
        if (g[static_cast<std::size_t>(e)] < 0) { pre.clear(); break; }
        pre.push_back(g[static_cast<std::size_t>(e)]);
      }
      if (!pre.empty() && !a.holds(*r, pre)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t depth) {
    if (depth == order.size()) return true;
    Element x = order[depth];
    for (Element y = 0; y < n; ++y) {
      if (g[static_cast<std::size_t>(y)] >= 0 || colours[1][static_cast<std::size_t>(y)] != colours[0][static_cast<std::size_t>(x)]) continue;
      f[static_cast<std::size_t>(x)] = y;
      g[static_cast<std::size_t>(y)] = x;
      if (consistent(x) && search(depth + 1)) return true;
      f[static_cast<std::size_t>(x)] = -1;
      g[static_cast<std::size_t>(y)] = -1;
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  for (const auto& [c, e] : a.constants())
    if (b.constants().at(c) != f[static_cast<std::size_t>(e)]) return std::nullopt;
  return f;
}

inline bool are_isomorphic(const Structure& a, const Structure& b) { return find_isomorphism(a, b).has_value(); }

/// Canonical isomorphism-invariant key. Searches permutations within colour
/// classes, so it is meant for small structures; `budget` caps the number of
/// labellings tried.
inline std::string canonical_key(const Structure& s, long budget = 2'000'000) {
  const int n = s.size();
  auto colour = detail::refine_colours({&s})[0];
  std::vector<Element> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Element x, Element y) {
    return colour[static_cast<std::size_t>(x)] < colour[static_cast<std::size_t>(y)];
  });
  // Cells of equal colour.
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && colour[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] ==
                        colour[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      ++j;
    cells.push_back({i, j});
    i = j;
  }
  long total = 1;
  for (auto [lo, hi] : cells)
    for (int i = 2; i <= hi - lo; ++i) {
      total *= i;
      if (total > budget) throw BudgetError("canonical_key: too many symmetric labellings");
    }
  std::string best;
  bool have = false;
  std::vector<int> pos(static_cast<std::size_t>(n));
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == cells.size()) {
      for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
      std::ostringstream key;
      key << n << '|';
      for (int i = 0; i < n; ++i) key << colour[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] << ',';
      for (const auto& [r, ts] : s.relations()) {
        std::vector<Tuple> mapped;
        for (const auto& t : ts) {
          Tuple m;
          for (auto e : t) m.push_back(pos[static_cast<std::size_t>(e)]);
          mapped.push_back(std::move(m));
        }
        std::sort(mapped.begin(), mapped.end());
        key << '|' << r << ':';
        for (const auto& t : mapped) {
          for (auto e : t) key << e << '.';
          key << ';';
        }
      }
      for (const auto& [cn, e] : s.constants()) key << '|' << cn << '=' << pos[static_cast<std::size_t>(e)];
      std::string k = key.str();
      if (!have || k < best) {
        best = std::move(k);
        have = true;
      }
      return;
    }
    auto [lo, hi] = cells[c];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      rec(c + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  rec(0);
  return best;
}

}  // namespace msot
