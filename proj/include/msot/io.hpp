#pragma once

// JSON formats for every exchanged object.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "msot/decomposition.hpp"
#include "msot/encodings.hpp"
#include "msot/error.hpp"
#include "msot/hierarchy.hpp"
#include "msot/logic.hpp"
#include "msot/partition.hpp"
#include "msot/structure.hpp"
#include "msot/transduction.hpp"
#include "msot/tree.hpp"
#include "msot/types.hpp"

namespace msot::io {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError("malformed JSON in '" + path + "': " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("unexpected JSON shape: ") + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Signatures and structures

/// Relations as {"name", "arity"}; constants carry arity 0.
inline Json to_json(const Signature& sig) {
  Json out = Json::array();
  for (const auto& s : sig.symbols()) out.push_back({{"name", s.name}, {"arity", s.arity}});
  for (const auto& c : sig.constants()) out.push_back({{"name", c}, {"arity", 0}});
  return out;
}

inline Signature signature_from_json(const Json& j) {
  return detail::guarded([&] {
    if (!j.is_array()) throw FormatError("signature must be a list");
    Signature sig;
    for (const auto& s : j) {
      int arity = detail::field(s, "arity").get<int>();
      auto name = detail::field(s, "name").get<std::string>();
      if (arity == 0) sig.add_constant(name);
      else sig.add(name, arity);
    }
    return sig;
  });
}

inline Json to_json(const Structure& a) {
  Json rels = Json::object();
  for (const auto& s : a.signature().symbols()) {
    Json ts = Json::array();
    for (const auto& t : a.relation(s.name)) ts.push_back(a.names_of(t));
    rels[s.name] = ts;
  }
  Json out{{"signature", to_json(a.signature())}, {"domain", a.domain()}, {"relations", rels}};
  if (!a.constants().empty()) {
    Json cs = Json::object();
    for (const auto& [c, e] : a.constants()) cs[c] = a.name(e);
    out["constants"] = cs;
  }
  return out;
}

inline Structure structure_from_json(const Json& j) {
  return detail::guarded([&] {
    Signature sig = signature_from_json(detail::field(j, "signature"));
    auto dom = detail::field(j, "domain").get<std::vector<std::string>>();
    std::map<std::string, std::vector<NamedTuple>> rels;
    if (j.contains("relations"))
      for (const auto& [name, ts] : j.at("relations").items()) rels[name] = ts.get<std::vector<NamedTuple>>();
    std::map<std::string, std::string> cs;
    if (j.contains("constants")) cs = j.at("constants").get<std::map<std::string, std::string>>();
    return Structure(sig, dom, rels, cs);
  });
}

inline Structure read_structure(const std::string& path) { return structure_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Trees

inline Json to_json(const TreeDomain& t) { return t.names(); }

inline TreeDomain tree_from_json(const Json& j) {
  return detail::guarded([&] { return TreeDomain::from_names(j.get<std::vector<std::string>>()); });
}

inline Json to_json(const ColouredTree& t) {
  Json cols = Json::array();
  for (const auto& c : t.colours) {
    Json names = Json::array();
    for (const auto& v : c) names.push_back(path_name(v));
    cols.push_back(names);
  }
  return {{"mode", t.mode == TreeMode::Order ? "order" : "successor"}, {"tree", to_json(t.domain)}, {"colours", cols}};
}

inline ColouredTree coloured_tree_from_json(const Json& j) {
  return detail::guarded([&] {
    ColouredTree t;
    t.domain = tree_from_json(detail::field(j, "tree"));
    auto mode = j.value("mode", std::string("successor"));
    if (mode != "order" && mode != "successor") throw FormatError("tree mode must be 'order' or 'successor'");
    t.mode = mode == "order" ? TreeMode::Order : TreeMode::Successor;
    if (j.contains("colours"))
      for (const auto& c : j.at("colours")) {
        std::set<Path> s;
        for (const auto& n : c.get<std::vector<std::string>>()) s.insert(parse_path(n));
        t.colours.push_back(std::move(s));
      }
    return t;
  });
}

// ---------------------------------------------------------------------------
// Formulas, schemes, transductions

inline Json to_json(const Transduction& t) {
  Json rels = Json::array();
  for (const auto& r : t.scheme.relations)
    rels.push_back({{"name", r.symbol}, {"arity", r.arity}, {"phi", to_string(r.phi)}});
  return {{"name", t.name},          {"input", to_json(t.input)},
          {"k", t.k},                {"p", t.p},
          {"chi", to_string(t.scheme.chi)}, {"delta", to_string(t.scheme.delta)},
          {"relations", rels}};
}

inline Transduction transduction_from_json(const Json& j) {
  return detail::guarded([&] {
    Transduction t;
    t.name = j.value("name", std::string("scheme"));
    t.input = signature_from_json(detail::field(j, "input"));
    t.k = j.value("k", 1);
    t.p = j.value("p", 0);
    t.scheme.chi = parse_formula(j.value("chi", std::string("true")));
    t.scheme.delta = parse_formula(j.value("delta", std::string("true")));
    for (const auto& r : detail::field(j, "relations"))
      t.scheme.relations.push_back({detail::field(r, "name").get<std::string>(), detail::field(r, "arity").get<int>(),
                                    parse_formula(detail::field(r, "phi").get<std::string>())});
    t.validate();
    return t;
  });
}

inline Json to_json(const RankType& t) {
  Json out{{"rank", t.rank}, {"q", t.q}};
  if (t.rank == 0) {
    std::string bits;
    for (auto a : t.atoms) bits += a ? '1' : '0';
    out["atoms"] = bits;
  } else {
    Json kids = Json::array();
    for (const auto& c : t.children) kids.push_back(to_json(c));
    out["children"] = kids;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decompositions and refinements

inline Json to_json(const Structure& a, const TreeDecomposition& d) {
  Json bags = Json::object();
  for (const auto& v : d.tree.nodes()) {
    Json b = Json::array();
    for (auto e : d.bag(v)) b.push_back(a.name(e));
    bags[path_name(v)] = b;
  }
  return {{"tree", to_json(d.tree)}, {"bags", bags}};
}

inline TreeDecomposition decomposition_from_json(const Structure& a, const Json& j) {
  return detail::guarded([&] {
    TreeDecomposition d;
    d.tree = tree_from_json(detail::field(j, "tree"));
    for (const auto& [v, b] : detail::field(j, "bags").items()) {
      auto p = parse_path(v);
      if (!d.tree.contains(p)) throw FormatError("bag for '" + v + "' outside the tree");
      auto& bag = d.bags[p];
      for (const auto& n : b.get<std::vector<std::string>>()) {
        auto e = a.index(n);
        if (!e) throw FormatError("bag element '" + n + "' not in the structure");
        bag.insert(*e);
      }
    }
    for (const auto& v : d.tree.nodes()) d.bags[v];
    return d;
  });
}

inline Json to_json(const Structure& inc, const PartitionRefinement& pi) {
  Json classes = Json::object();
  for (const auto& v : pi.tree.nodes()) {
    Json cs = Json::array();
    if (auto it = pi.classes.find(v); it != pi.classes.end())
      for (const auto& c : it->second) {
        Json names = Json::array();
        for (auto e : c) names.push_back(inc.name(e));
        cs.push_back(names);
      }
    classes[path_name(v)] = cs;
  }
  return {{"tree", to_json(pi.tree)}, {"classes", classes}};
}

inline PartitionRefinement refinement_from_json(const Structure& inc, const Json& j) {
  return detail::guarded([&] {
    PartitionRefinement pi;
    pi.tree = tree_from_json(detail::field(j, "tree"));
    for (const auto& [v, cs] : detail::field(j, "classes").items()) {
      auto& out = pi.classes[parse_path(v)];
      for (const auto& c : cs) {
        std::vector<Element> cls;
        for (const auto& n : c.get<std::vector<std::string>>()) {
          auto e = inc.index(n);
          if (!e) throw FormatError("class element '" + n + "' not in the incidence structure");
          cls.push_back(*e);
        }
        out.push_back(std::move(cls));
      }
    }
    return pi;
  });
}

// ---------------------------------------------------------------------------
// Encodings

namespace detail {

inline Json cells_json(const std::set<Cell>& cs) {
  Json out = Json::array();
  for (const auto& [i, k] : cs) out.push_back({i, k});
  return out;
}

inline std::set<Cell> cells_from(const Json& j) {
  std::set<Cell> out;
  for (const auto& c : j) out.insert({c.at(0).get<int>(), c.at(1).get<int>()});
  return out;
}

inline std::pair<int, int> parse_cell_name(const std::string& v) {
  int i = 0, k = 0;
  if (std::sscanf(v.c_str(), "(%d,%d)", &i, &k) != 2) throw FormatError("grid vertex '" + v + "' is not a cell");
  return {i, k};
}

}  // namespace detail

inline Json to_json(const GridCode& g) {
  Json labels = Json::object();
  for (const auto& [r, cs] : g.labels) labels[r] = detail::cells_json(cs);
  Json pos = Json::array();
  for (const auto& cs : g.positions) pos.push_back(detail::cells_json(cs));
  Json p = Json::array(), q = Json::array();
  for (int m = 0; m < 3; ++m) {
    std::set<Cell> pc, qc;
    for (const auto& v : g.orientation.p[static_cast<std::size_t>(m)]) pc.insert(detail::parse_cell_name(v));
    for (const auto& v : g.orientation.q[static_cast<std::size_t>(m)]) qc.insert(detail::parse_cell_name(v));
    p.push_back(detail::cells_json(pc));
    q.push_back(detail::cells_json(qc));
  }
  return {{"rows", g.rows},        {"cols", g.cols},         {"signature", to_json(g.original)},
          {"A", detail::cells_json(g.a_cells)}, {"E", detail::cells_json(g.e_cells)}, {"labels", labels},
          {"positions", pos},      {"P", p},                 {"Q", q},
          {"a_names", g.a_names},  {"e_names", g.e_names}};
}

inline GridCode grid_code_from_json(const Json& j) {
  return detail::guarded([&] {
    GridCode g;
    g.rows = detail::field(j, "rows").get<int>();
    g.cols = detail::field(j, "cols").get<int>();
    g.original = signature_from_json(detail::field(j, "signature"));
    g.a_cells = detail::cells_from(detail::field(j, "A"));
    g.e_cells = detail::cells_from(detail::field(j, "E"));
    for (const auto& [r, cs] : detail::field(j, "labels").items()) g.labels[r] = detail::cells_from(cs);
    for (const auto& cs : detail::field(j, "positions")) g.positions.push_back(detail::cells_from(cs));
    for (int m = 0; m < 3; ++m) {
      for (const auto& [i, k] : detail::cells_from(detail::field(j, "P").at(static_cast<std::size_t>(m))))
        g.orientation.p[static_cast<std::size_t>(m)].insert(grid_vertex(i, k));
      for (const auto& [i, k] : detail::cells_from(detail::field(j, "Q").at(static_cast<std::size_t>(m))))
        g.orientation.q[static_cast<std::size_t>(m)].insert(grid_vertex(i, k));
    }
    g.a_names = j.value("a_names", std::vector<std::string>{});
    g.e_names = j.value("e_names", std::vector<std::string>{});
    return g;
  });
}

inline Json to_json(const DecompositionCode& c) {
  Json colour = Json::object();
  for (const auto& [v, x] : c.colour) colour[path_name(v)] = x;
  Json links = Json::array();
  for (const auto& [e, r] : c.links) {
    Json pairs = Json::array();
    for (const auto& [i, k] : r) pairs.push_back({i, k});
    links.push_back({{"parent", path_name(e.first)}, {"child", path_name(e.second)}, {"pairs", pairs}});
  }
  return {{"k", c.k}, {"signature", to_json(c.original)}, {"tree", to_json(c.tree)}, {"colour", colour}, {"links", links}};
}

inline DecompositionCode decomposition_code_from_json(const Json& j) {
  return detail::guarded([&] {
    DecompositionCode c;
    c.k = detail::field(j, "k").get<int>();
    c.original = signature_from_json(detail::field(j, "signature"));
    c.tree = tree_from_json(detail::field(j, "tree"));
    for (const auto& [v, x] : detail::field(j, "colour").items()) c.colour[parse_path(v)] = x.get<std::uint64_t>();
    for (const auto& l : detail::field(j, "links")) {
      auto& r = c.links[{parse_path(detail::field(l, "parent").get<std::string>()),
                         parse_path(detail::field(l, "child").get<std::string>())}];
      for (const auto& p : detail::field(l, "pairs")) r.insert({p.at(0).get<int>(), p.at(1).get<int>()});
    }
    return c;
  });
}

inline MinorParams minor_params_from_json(const Json& j) {
  return detail::guarded([&] {
    MinorParams p;
    auto edges = [&](const char* key) {
      std::set<Edge> out;
      if (j.contains(key))
        for (const auto& e : j.at(key)) out.insert({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
      return out;
    };
    if (j.contains("delete_vertices")) {
      auto v = j.at("delete_vertices").get<std::vector<std::string>>();
      p.deleted_vertices = {v.begin(), v.end()};
    }
    p.deleted_edges = edges("delete_edges");
    p.contracted_edges = edges("contract_edges");
    if (j.contains("representatives")) {
      auto v = j.at("representatives").get<std::vector<std::string>>();
      p.representatives = {v.begin(), v.end()};
    }
    return p;
  });
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const CountResult& r) {
  Json out{{"value", r.value.str()}};
  if (r.bounds_apply) {
    out["lower"] = r.lower.str();
    out["upper"] = r.upper.str();
    out["bounds_hold"] = r.bounds_hold;
  }
  return out;
}

inline Json to_json(const EvidenceReport& rep) {
  Json samples = Json::array();
  for (const auto& s : rep.samples) {
    Json j{{"index", s.index}, {"vertices", s.vertices}};
    if (s.skipped) {
      j["skipped"] = s.skip_reason;
    } else {
      j["twd"] = s.twd;
      j["pwd"] = s.pwd;
      j["twd_n"] = s.twd_n;
      j["longest_path"] = s.longest_path;
      j["binary_embedding"] = s.binary_embedding;
      j["grid_minor"] = s.grid_minor;
    }
    samples.push_back(j);
  }
  return {{"samples", samples},
          {"twd_n_bounded", rep.twd_n_bounded},
          {"pwd_bounded", rep.pwd_bounded},
          {"twd_bounded", rep.twd_bounded},
          {"verdict", rep.verdict + "-consistent"},
          {"note", rep.note}};
}

inline Json error_json(const Error& e) { return {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}; }

}  // namespace msot::io
