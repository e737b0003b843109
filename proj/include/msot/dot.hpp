#pragma once

// Graphviz DOT export for structures, trees and decompositions.

#include <sstream>
#include <string>

#include "msot/decomposition.hpp"
#include "msot/structure.hpp"
#include "msot/tree.hpp"

namespace msot::dot {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Graphs as undirected edges; other binary relations as labelled arcs, unary
/// relations as node labels. Higher arities are listed in a comment.
inline std::string structure(const Structure& a, const std::string& name = "structure") {
  std::ostringstream out;
  const bool graph = a.signature().symbols().size() == 1 && a.signature().arity_of(kEdge) == 2;
  out << (graph ? "graph " : "digraph ") << quote(name) << " {\n";
  for (int e = 0; e < a.size(); ++e) {
    std::string label = a.name(e);
    for (const auto& s : a.signature().symbols())
      if (s.arity == 1 && a.holds(s.name, {e})) label += "\\n" + s.name;
    out << "  " << quote(a.name(e)) << " [label=" << quote(label) << "];\n";
  }
  for (const auto& s : a.signature().symbols()) {
    if (s.arity == 2) {
      for (const auto& t : a.relation(s.name)) {
        if (graph) {
          if (t[0] < t[1]) out << "  " << quote(a.name(t[0])) << " -- " << quote(a.name(t[1])) << ";\n";
        } else {
          out << "  " << quote(a.name(t[0])) << " -> " << quote(a.name(t[1])) << " [label=" << quote(s.name) << "];\n";
        }
      }
    } else if (s.arity > 2) {
      for (const auto& t : a.relation(s.name)) {
        out << "  // " << s.name << "(";
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << a.name(t[i]);
        out << ")\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

inline std::string node_id(const Path& v) { return quote("n" + path_name(v)); }

inline std::string tree(const TreeDomain& t, const std::string& name = "tree") {
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n";
  for (const auto& v : t.nodes()) out << "  " << node_id(v) << " [label=" << quote(v.empty() ? "ε" : path_name(v)) << "];\n";
  for (const auto& [u, v] : t.edges()) out << "  " << node_id(u) << " -> " << node_id(v) << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string decomposition(const Structure& a, const TreeDecomposition& d, const std::string& name = "decomposition") {
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n  node [shape=box];\n";
  for (const auto& v : d.tree.nodes()) {
    std::string label = (v.empty() ? std::string("ε") : path_name(v)) + ": {";
    bool first = true;
    for (auto e : d.bag(v)) {
      label += (first ? "" : ",") + a.name(e);
      first = false;
    }
    out << "  " << node_id(v) << " [label=" << quote(label + "}") << "];\n";
  }
  for (const auto& [u, v] : d.tree.edges()) out << "  " << node_id(u) << " -> " << node_id(v) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace msot::dot
