#pragma once

// Encodings between levels of the hierarchy: trees as words, structures in
// grids, bounded-width structures as coloured trees, and minors selected by
// four parameter sets.

#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msot/decomposition.hpp"
#include "msot/error.hpp"
#include "msot/graph.hpp"
#include "msot/logic.hpp"
#include "msot/structure.hpp"
#include "msot/transduction.hpp"
#include "msot/tree.hpp"

namespace msot {

// ---------------------------------------------------------------------------
// Trees of bounded height as words

using Word = std::vector<int>;

/// Levels of the vertices in lexicographic order.
inline Word tree_word_encode(const TreeDomain& t, int n) {
  if (t.height() > n) throw ArgumentError("tree height " + std::to_string(t.height()) + " exceeds " + std::to_string(n));
  Word w;
  for (const auto& v : t.nodes()) w.push_back(static_cast<int>(v.size()));
  return w;
}

/// The predecessor of position i is the last earlier position with a smaller label.
inline TreeDomain tree_word_decode(const Word& w) {
  std::vector<Path> at;
  std::set<Path> nodes;
  std::vector<int> kids;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw FormatError("negative label at position " + std::to_string(i));
    std::optional<std::size_t> pred;
    for (std::size_t j = i; j-- > 0;)
      if (w[j] < w[i]) {
        pred = j;
        break;
      }
    Path p;
    if (i == 0) {
      if (w[0] != 0) throw FormatError("word must begin with label 0");
    } else {
      if (!pred) throw FormatError("position " + std::to_string(i) + " has no earlier smaller label");
      p = at[*pred];
      p.push_back(kids[*pred]++);
    }
    at.push_back(p);
    kids.push_back(0);
    nodes.insert(p);
  }
  return TreeDomain(std::move(nodes));
}

inline std::string word_to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
  return s;
}

inline Word parse_word(const std::string& s) {
  Word w;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == ',') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw FormatError("word must consist of decimal labels");
    w.push_back(std::stoi(s.substr(i, j - i)));
    i = j;
  }
  return w;
}

inline constexpr const char* kWordOrder = "lt";
inline std::string word_label(int i) { return "L" + std::to_string(i); }

/// A word over [n] as a structure: positions p0, p1, ..., strict order lt, labels L_i.
inline Structure word_structure(const Word& w, int n) {
  Signature sig;
  sig.add(kWordOrder, 2);
  for (int i = 0; i < n; ++i) sig.add(word_label(i), 1);
  std::vector<std::string> dom;
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (std::size_t i = 0; i < w.size(); ++i) {
    dom.push_back("p" + std::to_string(i));
    if (w[i] < 0 || w[i] >= n) throw ArgumentError("label outside [n]");
    rels[word_label(w[i])].push_back({dom.back()});
  }
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) rels[kWordOrder].push_back({dom[i], dom[j]});
  return Structure(sig, dom, rels);
}

namespace detail {

inline std::string label_less(int n, const std::string& a, const std::string& b) {
  std::string s = "(or";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += " (and (rel " + word_label(i) + " " + a + ") (rel " + word_label(j) + " " + b + "))";
  return s + ")";
}

}  // namespace detail

/// Definition scheme of the word decoder, producing a successor tree.
inline Transduction tree_word_transduction(int n) {
  Transduction t;
  t.name = "tree_word_decode";
  t.input = word_structure({}, n).signature();
  t.scheme.chi = parse_formula("(forallF y (or (forallF x (not (rel lt x y))) (existsF x (and (rel lt x y) " +
                               detail::label_less(n, "x", "y") + "))))");
  t.scheme.relations.push_back(
      {kSuccessorRel, 2,
       parse_formula("(and (rel lt x0 x1) " + detail::label_less(n, "x0", "x1") +
                     " (not (existsF z (and (rel lt x0 z) (rel lt z x1) " + detail::label_less(n, "z", "x1") + "))))")});
  return t;
}

// ---------------------------------------------------------------------------
// Orienting grids

inline constexpr const char* kRowEdge = "E0";
inline constexpr const char* kColumnEdge = "E1";

/// P_m = vertices with row ≡ m (mod 3), Q_m = vertices with column ≡ m.
struct GridOrientation {
  std::array<std::set<std::string>, 3> p, q;
};

inline GridOrientation grid_orientation_params(int m, int n, int row_shift = 0, int col_shift = 0) {
  GridOrientation o;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) {
      o.p[static_cast<std::size_t>(((i + row_shift) % 3 + 3) % 3)].insert(grid_vertex(i, k));
      o.q[static_cast<std::size_t>(((k + col_shift) % 3 + 3) % 3)].insert(grid_vertex(i, k));
    }
  return o;
}

inline Signature grid_orient_input_signature() {
  Signature sig = graph_signature();
  for (int m = 0; m < 3; ++m) {
    sig.add("P" + std::to_string(m), 1);
    sig.add("Q" + std::to_string(m), 1);
  }
  return sig;
}

/// The grid expanded by the six parameter sets as unary relations.
inline Structure grid_with_orientation(const Structure& g, const GridOrientation& o) {
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& t : g.relation(kEdge)) rels[kEdge].push_back(g.names_of(t));
  for (int m = 0; m < 3; ++m) {
    for (const auto& v : o.p[static_cast<std::size_t>(m)]) rels["P" + std::to_string(m)].push_back({v});
    for (const auto& v : o.q[static_cast<std::size_t>(m)]) rels["Q" + std::to_string(m)].push_back({v});
  }
  return Structure(grid_orient_input_signature(), g.domain(), rels);
}

/// Recovers E0 (row increments) and E1 (column increments) from edg and the
/// parameters; rejects parameters that are not the mod-3 classes of an axis
/// labelling of a grid.
inline Structure grid_orient(const Structure& g, const GridOrientation& o) {
  require_graph(g);
  const int size = g.size();
  std::vector<int> pc(static_cast<std::size_t>(size), -1), qc(static_cast<std::size_t>(size), -1);
  for (int m = 0; m < 3; ++m) {
    for (const auto& v : o.p[static_cast<std::size_t>(m)]) {
      auto e = g.index(v);
      if (!e) throw ArgumentError("parameter P" + std::to_string(m) + " names unknown vertex '" + v + "'");
      if (pc[static_cast<std::size_t>(*e)] >= 0) throw ArgumentError("vertex '" + v + "' in two row classes");
      pc[static_cast<std::size_t>(*e)] = m;
    }
    for (const auto& v : o.q[static_cast<std::size_t>(m)]) {
      auto e = g.index(v);
      if (!e) throw ArgumentError("parameter Q" + std::to_string(m) + " names unknown vertex '" + v + "'");
      if (qc[static_cast<std::size_t>(*e)] >= 0) throw ArgumentError("vertex '" + v + "' in two column classes");
      qc[static_cast<std::size_t>(*e)] = m;
    }
  }
  for (int v = 0; v < size; ++v)
    if (pc[static_cast<std::size_t>(v)] < 0 || qc[static_cast<std::size_t>(v)] < 0)
      throw ArgumentError("vertex '" + g.name(v) + "' lacks a row or column class");
  std::set<Tuple> e0, e1;
  std::vector<int> next_row(static_cast<std::size_t>(size), -1), next_col(static_cast<std::size_t>(size), -1);
  std::vector<int> indeg(static_cast<std::size_t>(size), 0);
  auto step = [](int a, int b) { return (b - a + 3) % 3; };
  for (const auto& t : g.relation(kEdge)) {
    int u = t[0], v = t[1];
    int dp = step(pc[static_cast<std::size_t>(u)], pc[static_cast<std::size_t>(v)]);
    int dq = step(qc[static_cast<std::size_t>(u)], qc[static_cast<std::size_t>(v)]);
    if ((dp == 0) == (dq == 0))
      throw ArgumentError("edge {" + g.name(u) + "," + g.name(v) + "} changes " + (dp == 0 ? "neither" : "both") +
                          " row and column class");
    auto& target = dq == 0 ? e0 : e1;
    auto& next = dq == 0 ? next_row : next_col;
    if ((dq == 0 ? dp : dq) != 1) continue;  // the reverse direction is handled by the symmetric tuple
    target.insert({u, v});
    if (next[static_cast<std::size_t>(u)] >= 0) throw ArgumentError("vertex '" + g.name(u) + "' has two successors in one direction");
    next[static_cast<std::size_t>(u)] = v;
    ++indeg[static_cast<std::size_t>(v)];
  }
  // Global shape: walk rows from the unique source.
  if (size > 0) {
    std::vector<int> sources;
    for (int v = 0; v < size; ++v)
      if (indeg[static_cast<std::size_t>(v)] == 0) sources.push_back(v);
    if (sources.size() != 1) throw ArgumentError("orientation has " + std::to_string(sources.size()) + " sources");
    std::vector<std::vector<int>> rows;
    std::vector<bool> seen(static_cast<std::size_t>(size), false);
    for (int s = sources[0]; s >= 0; s = next_row[static_cast<std::size_t>(s)]) {
      rows.emplace_back();
      for (int v = s; v >= 0; v = next_col[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(v)]) throw ArgumentError("orientation contains a cycle");
        seen[static_cast<std::size_t>(v)] = true;
        rows.back().push_back(v);
      }
    }
    std::size_t cols = rows[0].size();
    for (const auto& r : rows)
      if (r.size() != cols) throw ArgumentError("orientation does not form a rectangular grid");
    if (rows.size() * cols != static_cast<std::size_t>(size)) throw ArgumentError("orientation misses vertices");
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        int v = rows[i][k];
        int down = i + 1 < rows.size() ? rows[i + 1][k] : -1;
        int right = k + 1 < cols ? rows[i][k + 1] : -1;
        if (next_row[static_cast<std::size_t>(v)] != down || next_col[static_cast<std::size_t>(v)] != right)
          throw ArgumentError("orientation is inconsistent at '" + g.name(v) + "'");
      }
  }
  Signature sig;
  sig.add(kRowEdge, 2);
  sig.add(kColumnEdge, 2);
  std::map<std::string, std::set<Tuple>> rels{{kRowEdge, e0}, {kColumnEdge, e1}};
  return Structure::from_indices(sig, g.domain(), rels);
}

namespace detail {

inline std::string class_step(const std::string& c, const std::string& a, const std::string& b) {
  std::string s = "(or";
  for (int m = 0; m < 3; ++m)
    s += " (and (rel " + c + std::to_string(m) + " " + a + ") (rel " + c + std::to_string((m + 1) % 3) + " " + b + "))";
  return s + ")";
}

inline std::string class_same(const std::string& c, const std::string& a, const std::string& b) {
  std::string s = "(or";
  for (int m = 0; m < 3; ++m) s += " (and (rel " + c + std::to_string(m) + " " + a + ") (rel " + c + std::to_string(m) + " " + b + "))";
  return s + ")";
}

inline std::string exactly_one_class(const std::string& c, const std::string& a) {
  std::string s = "(or";
  for (int m = 0; m < 3; ++m) {
    s += " (and";
    for (int j = 0; j < 3; ++j)
      s += j == m ? " (rel " + c + std::to_string(j) + " " + a + ")" : " (not (rel " + c + std::to_string(j) + " " + a + "))";
    s += ")";
  }
  return s + ")";
}

}  // namespace detail

/// Definition scheme for grid_orient over the parameter-expanded grid. Its χ
/// checks the local conditions; the direct algorithm also checks the shape.
inline Transduction grid_orient_transduction() {
  using namespace detail;
  Transduction t;
  t.name = "grid_orient";
  t.input = grid_orient_input_signature();
  std::string per_edge = "(or (and " + class_same("P", "x", "y") + " (or " + class_step("Q", "x", "y") + " " +
                         class_step("Q", "y", "x") + ")) (and " + class_same("Q", "x", "y") + " (or " +
                         class_step("P", "x", "y") + " " + class_step("P", "y", "x") + ")))";
  t.scheme.chi = parse_formula("(forallF x (and " + exactly_one_class("P", "x") + " " + exactly_one_class("Q", "x") +
                               " (forallF y (or (not (rel edg x y)) " + per_edge + "))))");
  t.scheme.relations.push_back(
      {kRowEdge, 2, parse_formula("(and (rel edg x0 x1) " + class_same("Q", "x0", "x1") + " " + class_step("P", "x0", "x1") + ")")});
  t.scheme.relations.push_back(
      {kColumnEdge, 2, parse_formula("(and (rel edg x0 x1) " + class_same("P", "x0", "x1") + " " + class_step("Q", "x0", "x1") + ")")});
  return t;
}

// ---------------------------------------------------------------------------
// Structures in grids

using Cell = std::pair<int, int>;

struct GridCode {
  int rows = 1, cols = 1;
  Signature original;
  std::set<Cell> a_cells, e_cells;
  std::map<std::string, std::set<Cell>> labels;  // P'_R
  std::vector<std::set<Cell>> positions;         // I'_l
  GridOrientation orientation;
  std::vector<std::string> a_names, e_names;

  Structure grid() const { return grid_graph(rows, cols); }
};

/// a_i at (i+1, 0), e_k at (0, k+1), I'_l = {(i+1, k+1) : (a_i, e_k) ∈ in_l}.
inline GridCode grid_encode(const Structure& a) {
  auto inc = to_incidence(a);
  const auto& s = inc.structure;
  GridCode code;
  code.original = a.signature();
  code.rows = static_cast<int>(inc.a_part.size()) + 1;
  code.cols = static_cast<int>(inc.e_part.size()) + 1;
  std::map<Element, int> row, col;
  for (std::size_t i = 0; i < inc.a_part.size(); ++i) {
    row[inc.a_part[i]] = static_cast<int>(i) + 1;
    code.a_cells.insert({static_cast<int>(i) + 1, 0});
    code.a_names.push_back(s.name(inc.a_part[i]));
  }
  for (std::size_t k = 0; k < inc.e_part.size(); ++k) {
    col[inc.e_part[k]] = static_cast<int>(k) + 1;
    code.e_cells.insert({0, static_cast<int>(k) + 1});
    code.e_names.push_back(s.name(inc.e_part[k]));
  }
  for (const auto& sym : a.signature().symbols()) {
    auto& cells = code.labels[sym.name];
    for (const auto& t : s.relation(incidence_label(sym.name))) cells.insert({0, col.at(t[0])});
  }
  code.positions.resize(static_cast<std::size_t>(a.signature().max_arity()));
  for (int l = 0; l < a.signature().max_arity(); ++l)
    for (const auto& t : s.relation(incidence_position(l))) code.positions[static_cast<std::size_t>(l)].insert({row.at(t[0]), col.at(t[1])});
  code.orientation = grid_orientation_params(code.rows, code.cols);
  return code;
}

inline IncidenceStructure grid_decode(const GridCode& code) {
  if (code.rows < 1 || code.cols < 1) throw FormatError("grid dimensions must be positive");
  // The orientation must be a consistent labelling of this grid.
  Structure directed = grid_orient(code.grid(), code.orientation);
  auto in_grid = [&](const Cell& c) { return c.first >= 0 && c.first < code.rows && c.second >= 0 && c.second < code.cols; };
  std::map<int, std::string> a_at, e_at;
  for (const auto& c : code.a_cells) {
    if (!in_grid(c) || c.second != 0 || c.first == 0) throw FormatError("A-cell outside column 0 (rows >= 1)");
    auto i = static_cast<std::size_t>(c.first - 1);
    a_at[c.first] = i < code.a_names.size() ? code.a_names[i] : "a" + std::to_string(i);
  }
  for (const auto& c : code.e_cells) {
    if (!in_grid(c) || c.first != 0 || c.second == 0) throw FormatError("E-cell outside row 0 (columns >= 1)");
    auto k = static_cast<std::size_t>(c.second - 1);
    e_at[c.second] = k < code.e_names.size() ? code.e_names[k] : "e" + std::to_string(k);
  }
  Signature sig = incidence_signature(code.original);
  std::vector<std::string> dom;
  for (const auto& [_, n] : a_at) dom.push_back(n);
  for (const auto& [_, n] : e_at) dom.push_back(n);
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& [r, cells] : code.labels) {
    if (!code.original.contains(r)) throw FormatError("label for unknown relation '" + r + "'");
    for (const auto& c : cells) {
      if (c.first != 0 || !e_at.count(c.second)) throw FormatError("label cell is not an E-cell");
      rels[incidence_label(r)].push_back({e_at.at(c.second)});
    }
  }
  if (static_cast<int>(code.positions.size()) > code.original.max_arity()) throw FormatError("too many position sets");
  for (std::size_t l = 0; l < code.positions.size(); ++l)
    for (const auto& c : code.positions[l]) {
      if (!a_at.count(c.first) || !e_at.count(c.second)) throw FormatError("position cell outside the A×E block");
      rels[incidence_position(static_cast<int>(l))].push_back({a_at.at(c.first), e_at.at(c.second)});
    }
  auto inc = IncidenceStructure::from_labelled(Structure(sig, dom, rels), code.original);
  from_incidence(inc);  // rejects codes that are not incidence structures
  return inc;
}

// ---------------------------------------------------------------------------
// Bounded-width structures as coloured trees

/// Catalogue of structures on [s]: index = Σ_{s' < s} 2^{bits(s')} + code,
/// where the code lists tuples per relation (sorted by name) in
/// lexicographic order.
inline int catalogue_bits(const Signature& sig, int s) {
  long bits = 0;
  for (const auto& sym : sig.symbols()) {
    long p = 1;
    for (int i = 0; i < sym.arity; ++i) p *= s;
    bits += p;
  }
  if (bits > 62) throw BudgetError("catalogue code for size " + std::to_string(s) + " exceeds 62 bits");
  return static_cast<int>(bits);
}

inline std::uint64_t catalogue_offset(const Signature& sig, int s) {
  std::uint64_t off = 0;
  for (int t = 0; t < s; ++t) {
    std::uint64_t add = std::uint64_t{1} << catalogue_bits(sig, t);
    if (off > (std::uint64_t{1} << 63) - add) throw BudgetError("catalogue index overflow");
    off += add;
  }
  return off;
}

namespace detail {

inline std::vector<std::pair<std::string, Tuple>> catalogue_slots(const Signature& sig, int s) {
  std::vector<std::pair<std::string, Tuple>> slots;
  std::vector<Symbol> syms = sig.symbols();
  std::sort(syms.begin(), syms.end(), [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
  for (const auto& sym : syms) {
    if (s == 0 && sym.arity > 0) continue;
    Tuple t(static_cast<std::size_t>(sym.arity), 0);
    for (;;) {
      slots.push_back({sym.name, t});
      int p = sym.arity - 1;
      while (p >= 0 && ++t[static_cast<std::size_t>(p)] == s) t[static_cast<std::size_t>(p--)] = 0;
      if (p < 0) break;
    }
  }
  return slots;
}

inline std::vector<std::string> catalogue_names(int s) {
  const std::size_t digits = std::to_string(std::max(0, s - 1)).size();
  std::vector<std::string> n;
  for (int i = 0; i < s; ++i) {
    auto d = std::to_string(i);
    n.push_back(std::string(digits - d.size(), '0') + d);
  }
  return n;
}

}  // namespace detail

inline std::uint64_t catalogue_index(const Structure& c) {
  const int s = c.size();
  std::uint64_t code = 0;
  auto slots = detail::catalogue_slots(c.signature(), s);
  for (std::size_t b = 0; b < slots.size(); ++b)
    if (c.holds(slots[b].first, slots[b].second)) code |= std::uint64_t{1} << b;
  return catalogue_offset(c.signature(), s) + code;
}

inline Structure catalogue_structure(const Signature& sig, std::uint64_t index, int max_size) {
  for (int s = 0; s <= max_size; ++s) {
    std::uint64_t count = std::uint64_t{1} << catalogue_bits(sig, s);
    if (index < count) {
      auto slots = detail::catalogue_slots(sig, s);
      std::map<std::string, std::set<Tuple>> rels;
      for (std::size_t b = 0; b < slots.size(); ++b)
        if (index >> b & 1) rels[slots[b].first].insert(slots[b].second);
      return Structure::from_indices(sig, detail::catalogue_names(s), rels);
    }
    index -= count;
  }
  throw FormatError("catalogue index exceeds structures of size " + std::to_string(max_size));
}

struct DecompositionCode {
  int k = 0;
  Signature original;
  TreeDomain tree;
  std::map<Path, std::uint64_t> colour;
  /// R(u, v) for each tree edge (parent, child).
  std::map<std::pair<Path, Path>, std::set<std::pair<int, int>>> links;
};

/// λ(v) = catalogue index of A↾U_v under the order-preserving π_v : U_v → [|U_v|].
inline DecompositionCode decomposition_encode(const Structure& a, const TreeDecomposition& d, int k) {
  require_valid(a, d);
  if (d.width() > k) throw ArgumentError("decomposition width " + std::to_string(d.width()) + " exceeds k = " + std::to_string(k));
  DecompositionCode code{k, a.signature(), d.tree, {}, {}};
  std::map<Path, std::map<Element, int>> pi;
  for (const auto& v : d.tree.nodes()) {
    std::vector<Element> bag(d.bag(v).begin(), d.bag(v).end());
    auto& p = pi[v];
    for (std::size_t i = 0; i < bag.size(); ++i) p[bag[i]] = static_cast<int>(i);
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [r, ts] : a.relations())
      for (const auto& t : ts) {
        Tuple img;
        for (auto e : t) {
          auto it = p.find(e);
          if (it == p.end()) break;
          img.push_back(it->second);
        }
        if (img.size() == t.size()) rels[r].insert(img);
      }
    code.colour[v] = catalogue_index(Structure::from_indices(a.signature(), detail::catalogue_names(static_cast<int>(bag.size())), rels));
  }
  for (const auto& [u, v] : d.tree.edges()) {
    auto& r = code.links[{u, v}];
    for (const auto& [e, i] : pi[u])
      if (auto it = pi[v].find(e); it != pi[v].end()) r.insert({i, it->second});
  }
  return code;
}

/// Glues the catalogue structures along the R-identifications.
inline IncidenceStructure decomposition_decode(const DecompositionCode& code) {
  std::map<Path, Structure> parts;
  for (const auto& v : code.tree.nodes()) {
    auto it = code.colour.find(v);
    if (it == code.colour.end()) throw FormatError("vertex '" + path_name(v) + "' has no colour");
    parts.emplace(v, catalogue_structure(code.original, it->second, code.k + 1));
  }
  // Union-find over (vertex, slot).
  std::map<std::pair<Path, int>, std::pair<Path, int>> parent;
  std::function<std::pair<Path, int>(const std::pair<Path, int>&)> find = [&](const std::pair<Path, int>& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    auto root = find(it->second);
    parent[x] = root;
    return root;
  };
  for (const auto& [edge, r] : code.links) {
    const auto& [u, v] = edge;
    if (!code.tree.contains(u) || !code.tree.contains(v) || v.empty() || parent_of(v) != u)
      throw FormatError("link between non-adjacent vertices");
    std::set<int> left, right;
    for (const auto& [i, j] : r) {
      if (i < 0 || i >= parts.at(u).size() || j < 0 || j >= parts.at(v).size()) throw FormatError("link outside the catalogue domain");
      if (!left.insert(i).second || !right.insert(j).second)
        throw FormatError("R(" + path_name(u) + "," + path_name(v) + ") is not a partial bijection");
      auto a = find({u, i}), b = find({v, j});
      if (a != b) parent[std::max(a, b)] = std::min(a, b);  // the ⪯-earlier slot names the class
    }
  }
  std::map<std::pair<Path, int>, std::string> class_name;
  std::vector<std::string> dom;
  for (const auto& [v, s] : parts)
    for (int i = 0; i < s.size(); ++i) {
      auto root = find({v, i});
      if (!class_name.count(root)) {
        class_name[root] = "u" + path_name(root.first) + "." + std::to_string(root.second);
        dom.push_back(class_name[root]);
      }
    }
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& [v, s] : parts)
    for (const auto& [r, ts] : s.relations())
      for (const auto& t : ts) {
        NamedTuple nt;
        for (auto e : t) nt.push_back(class_name.at(find({v, e})));
        rels[r].push_back(nt);
      }
  for (const auto& sym : code.original.symbols()) rels[sym.name];
  return to_incidence(Structure(code.original, dom, rels));
}

// ---------------------------------------------------------------------------
// Minors from four parameter sets

struct MinorParams {
  std::set<std::string> deleted_vertices;
  std::set<Edge> deleted_edges;
  std::set<Edge> contracted_edges;
  std::set<std::string> representatives;
};

/// Deletes, then contracts; absent when the parameters are inconsistent
/// (an edge both deleted and contracted, a contracted edge at a deleted
/// vertex, or not exactly one representative per contracted class). A
/// single-vertex class without a listed representative represents itself.
inline std::optional<Structure> minor_apply(const Structure& g, const MinorParams& p) {
  require_graph(g);
  auto norm = [](const Edge& e) { return e.first < e.second ? e : Edge{e.second, e.first}; };
  std::set<Edge> del, con;
  for (const auto& e : p.deleted_edges) del.insert(norm(e));
  for (const auto& e : p.contracted_edges) con.insert(norm(e));
  for (const auto& v : p.deleted_vertices)
    if (!g.index(v)) return std::nullopt;
  for (const auto& e : del)
    if (!g.index(e.first) || !g.index(e.second) || !g.holds(kEdge, {*g.index(e.first), *g.index(e.second)})) return std::nullopt;
  for (const auto& e : con) {
    if (del.count(e) || p.deleted_vertices.count(e.first) || p.deleted_vertices.count(e.second)) return std::nullopt;
    if (!g.index(e.first) || !g.index(e.second) || !g.holds(kEdge, {*g.index(e.first), *g.index(e.second)})) return std::nullopt;
  }
  // Classes of the remaining vertices under the contracted edges.
  std::map<std::string, std::string> cls;
  for (const auto& v : g.domain())
    if (!p.deleted_vertices.count(v)) cls[v] = v;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) {
    return cls[v] == v ? v : cls[v] = find(cls[v]);
  };
  for (const auto& [u, v] : con) {
    auto a = find(u), b = find(v);
    if (a != b) cls[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::string, std::string> rep_of;  // class root -> representative
  for (const auto& r : p.representatives) {
    if (!cls.count(r)) return std::nullopt;
    if (!rep_of.emplace(find(r), r).second) return std::nullopt;
  }
  std::map<std::string, int> class_size;
  for (const auto& [v, _] : cls) ++class_size[find(v)];
  std::vector<std::string> vs;
  for (const auto& [root, size] : class_size) {
    if (!rep_of.count(root)) {
      if (size > 1) return std::nullopt;
      rep_of[root] = root;
    }
    vs.push_back(rep_of.at(root));
  }
  std::set<Edge> es;
  for (const auto& [u, v] : edge_list(g)) {
    Edge e = norm({g.name(u), g.name(v)});
    if (del.count(e) || con.count(e) || !cls.count(e.first) || !cls.count(e.second)) continue;
    auto a = rep_of.at(find(e.first)), b = rep_of.at(find(e.second));
    if (a != b) es.insert(norm({a, b}));
  }
  return make_graph(vs, std::vector<Edge>(es.begin(), es.end()));
}

/// Incidence encoding of a graph with one element per undirected edge:
/// P_edg marks edge elements, in_0/in_1 attach the smaller/larger endpoint.
inline Structure edge_incidence(const Structure& g) {
  require_graph(g);
  std::vector<std::string> dom = g.domain();
  std::map<std::string, std::vector<NamedTuple>> rels{{"P_edg", {}}, {"in_0", {}}, {"in_1", {}}};
  for (const auto& [u, v] : edge_list(g)) {
    auto a = g.name(u), b = g.name(v);
    if (b < a) std::swap(a, b);
    auto e = std::string(kEdge) + "(" + a + "," + b + ")";
    dom.push_back(e);
    rels["P_edg"].push_back({e});
    rels["in_0"].push_back({a, e});
    rels["in_1"].push_back({b, e});
  }
  return Structure(Signature{{"P_edg", 1}, {"in_0", 2}, {"in_1", 2}}, dom, rels);
}

/// Minors as an MSO-transduction on edge_incidence(G). param0 marks deleted
/// vertices and deleted edges, param1 marks representatives and contracted
/// edges; inconsistent choices leave the output undefined.
inline Transduction minor_transduction() {
  const std::string vert = "(not (rel P_edg V))";
  auto sub = [](std::string f, const std::string& from, const std::string& to) {
    for (std::size_t i = 0; (i = f.find(from, i)) != std::string::npos; i += to.size()) f.replace(i, from.size(), to);
    return f;
  };
  auto live = [&](const std::string& v) { return "(and " + sub(vert, "V", v) + " (not (rel param0 " + v + ")))"; };
  auto rep = [&](const std::string& v) { return "(and " + live(v) + " (rel param1 " + v + "))"; };
  // Contracted edge e joins a and b.
  auto joins = [](const std::string& e, const std::string& a, const std::string& b) {
    return "(or (and (rel in_0 " + a + " " + e + ") (rel in_1 " + b + " " + e + ")) (and (rel in_0 " + b + " " + e +
           ") (rel in_1 " + a + " " + e + ")))";
  };
  auto closed = [&](const std::string& z) {
    return "(forallF a (forallF b (or (not (in a " + z + ")) (in b " + z +
           ") (not (existsF e (and (rel P_edg e) (rel param1 e) " + joins("e", "a", "b") + "))))))";
  };
  auto same = [&](const std::string& x, const std::string& y) {
    return "(forall Z (or (not (in " + x + " Z)) (in " + y + " Z) (not " + closed("Z") + ")))";
  };
  std::string chi =
      "(and"
      " (forallF x (or (rel P_edg x) (not (rel param0 x)) (not (rel param1 x))))"
      " (forallF e (or (not (rel P_edg e)) (not (rel param1 e)) (and (not (rel param0 e))"
      " (forallF a (or (not (existsF b " + joins("e", "a", "b") + ")) " + live("a") + ")))))"
      " (forallF x (or (not " + live("x") + ") (existsF r (and " + rep("r") + " " + same("x", "r") +
      " (forallF s (or (eq s r) (not " + rep("s") + ") (not " + same("x", "s") + ")))))))"
      ")";
  std::string kept_edge = "(and (rel P_edg e) (not (rel param0 e)) (not (rel param1 e)))";
  std::string edge = "(and (not (eq x0 x1)) (existsF e (and " + kept_edge + " (existsF a (existsF b (and " +
                     joins("e", "a", "b") + " " + live("a") + " " + live("b") + " " + same("x0", "a") + " " +
                     same("x1", "b") + "))))))";
  Transduction t;
  t.name = "minor";
  t.input = Signature{{"P_edg", 1}, {"in_0", 2}, {"in_1", 2}};
  t.p = 2;
  t.scheme.chi = parse_formula(chi);
  t.scheme.delta = parse_formula(rep("x0"));
  t.scheme.relations.push_back({kEdge, 2, parse_formula(edge)});
  return t;
}

/// Images of minor_apply over all consistent parameter choices, up to
/// isomorphism. Representatives are fixed to each class's least vertex unless
/// `all_representatives` is set.
inline std::vector<Structure> minor_sweep(const Structure& g, bool all_representatives = false) {
  require_graph(g);
  if (g.size() > 16) throw BudgetError("minor_sweep limited to 16 vertices");
  std::map<std::string, Structure> seen;
  const auto edges = edge_list(g);
  const Mask all = full_mask(g.size());
  for (Mask keep = 0;; keep = (keep - all) & all) {  // every vertex subset
    std::vector<Edge> live;
    for (const auto& [u, v] : edges)
      if ((keep & bit(u)) && (keep & bit(v))) live.push_back({g.name(u), g.name(v)});
    MinorParams p;
    for (int v = 0; v < g.size(); ++v)
      if (!(keep & bit(v))) p.deleted_vertices.insert(g.name(v));
    std::vector<int> state(live.size(), 0);  // 0 keep, 1 delete, 2 contract
    for (;;) {
      p.deleted_edges.clear();
      p.contracted_edges.clear();
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (state[i] == 1) p.deleted_edges.insert(live[i]);
        if (state[i] == 2) p.contracted_edges.insert(live[i]);
      }
      // Contraction classes of the kept vertices.
      std::map<std::string, std::string> root;
      for (int v = 0; v < g.size(); ++v)
        if (keep & bit(v)) root[g.name(v)] = g.name(v);
      std::function<std::string(const std::string&)> find = [&](const std::string& v) {
        return root[v] == v ? v : root[v] = find(root[v]);
      };
      for (const auto& [u, v] : p.contracted_edges) {
        auto a = find(u), b = find(v);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
      std::map<std::string, std::vector<std::string>> classes;
      for (const auto& [v, _] : root) classes[find(v)].push_back(v);
      std::vector<std::vector<std::string>> options;
      for (const auto& [_, members] : classes)
        options.push_back(all_representatives ? members : std::vector<std::string>{members.front()});
      std::vector<std::size_t> pick(options.size(), 0);
      for (;;) {
        p.representatives.clear();
        for (std::size_t i = 0; i < options.size(); ++i) p.representatives.insert(options[i][pick[i]]);
        if (auto h = minor_apply(g, p)) {
          auto key = canonical_key(*h);
          if (!seen.count(key)) seen.emplace(std::move(key), std::move(*h));
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
      std::size_t i = 0;
      while (i < state.size() && ++state[i] == 3) state[i++] = 0;
      if (i == state.size()) break;
    }
    if (keep == all) break;
  }
  std::vector<Structure> out;
  for (auto& [_, h] : seen) out.push_back(std::move(h));
  return out;
}

}  // namespace msot
