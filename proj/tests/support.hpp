#pragma once

// Shared helpers for the test suites: small graph catalogues, fixture paths
// and brute-force oracles.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "msot/generators.hpp"
#include "msot/graph.hpp"
#include "msot/logic.hpp"
#include "msot/structure.hpp"

namespace msot::testing {

#ifdef MSOT_FIXTURES
inline std::string fixture(const std::string& name) { return std::string(MSOT_FIXTURES) + "/" + name; }
#endif

inline Structure graph_from(int n, const std::vector<std::pair<int, int>>& edges) {
  auto names = gen::element_names(n, "v");
  std::vector<Edge> es;
  for (const auto& [u, v] : edges) es.push_back({names[static_cast<std::size_t>(u)], names[static_cast<std::size_t>(v)]});
  return make_graph(names, es);
}

/// Every labelled graph on n vertices.
inline std::vector<Structure> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  std::vector<Structure> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs.size()); ++code) {
    std::vector<std::pair<int, int>> es;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (code >> b & 1) es.push_back(pairs[b]);
    out.push_back(graph_from(n, es));
  }
  return out;
}

/// One graph per isomorphism class, for every vertex count in [lo, hi].
inline std::vector<Structure> graph_catalogue(int lo, int hi, bool connected_only = false) {
  std::vector<Structure> out;
  for (int n = lo; n <= hi; ++n) {
    std::map<std::string, Structure> seen;
    for (auto& g : all_graphs(n)) {
      if (connected_only && n > 0 && !is_connected(adjacency(g), full_mask(n))) continue;
      seen.emplace(canonical_key(g), std::move(g));
    }
    for (auto& [_, g] : seen) out.push_back(std::move(g));
  }
  return out;
}

inline int edge_count(const Structure& g) { return static_cast<int>(edge_list(g).size()); }

/// Exhaustive oracle: does some X ⊆ A contain more than k|X| tuples of one relation?
inline bool sparse_oracle(const Structure& a, long k) {
  for (Mask x = 0; x <= full_mask(a.size()); ++x) {
    for (const auto& [rel, ts] : a.relations()) {
      long inside = 0;
      for (const auto& t : ts) {
        bool all = true;
        for (auto e : t) all = all && (x >> e & 1);
        inside += all;
      }
      if (inside > k * popcount(x)) return false;
    }
    if (x == full_mask(a.size())) break;
  }
  return true;
}

/// Random restricted formula: quantifier depth at most `depth`, Card moduli at
/// most `q`, atoms only over the variables in `bound`.
inline Formula random_formula(gen::Rng& rng, const Signature& sig, int depth, int q, std::vector<std::string> bound) {
  auto pick = [&] { return bound[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(bound.size()) - 1))]; };
  int choice = gen::uniform(rng, 0, 9);
  if (bound.empty() || (depth > 0 && choice < 3)) {
    if (depth == 0) return gen::coin(rng, 0.5) ? fm::top() : fm::bottom();
    std::string x = "X" + std::to_string(bound.size());
    bound.push_back(x);
    auto body = random_formula(rng, sig, depth - 1, q, bound);
    return gen::coin(rng, 0.5) ? fm::exists(x, body) : fm::forall(x, body);
  }
  if (choice < 5) {
    if (choice == 3) return fm::neg(random_formula(rng, sig, depth, q, bound));
    std::vector<Formula> kids{random_formula(rng, sig, depth, q, bound), random_formula(rng, sig, depth, q, bound)};
    return gen::coin(rng, 0.5) ? fm::conj(kids) : fm::disj(kids);
  }
  switch (gen::uniform(rng, 0, 4)) {
    case 0: return fm::sub(pick(), pick());
    case 1: return fm::sing(pick());
    case 2: return fm::empty(pick());
    case 3: {
      int mod = gen::uniform(rng, 1, q);
      return fm::card(pick(), gen::uniform(rng, 0, mod - 1), mod);
    }
    default: {
      const auto syms = sig.symbols();
      const auto& s = syms[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(syms.size()) - 1))];
      std::vector<std::string> args;
      for (int i = 0; i < s.arity; ++i) args.push_back(pick());
      return fm::rel(s.name, args);
    }
  }
}

inline Formula random_sentence(gen::Rng& rng, const Signature& sig, int depth, int q) {
  return random_formula(rng, sig, depth, q, {});
}

/// Random first-order sentence over edg with quantifier depth `depth`.
inline Formula random_fo_sentence(gen::Rng& rng, int depth, std::vector<std::string> bound = {}) {
  auto pick = [&] { return bound[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(bound.size()) - 1))]; };
  int c = gen::uniform(rng, 0, 7);
  if (bound.empty() || (depth > 0 && c < 3)) {
    if (depth == 0) return fm::top();
    std::string x = "x" + std::to_string(bound.size());
    bound.push_back(x);
    auto body = random_fo_sentence(rng, depth - 1, bound);
    return c % 2 ? Formula{Op::ExistsF, x, {}, 0, 1, {body}} : Formula{Op::ForallF, x, {}, 0, 1, {body}};
  }
  if (c == 3) return fm::neg(random_fo_sentence(rng, depth, bound));
  if (c == 4) return fm::conj({random_fo_sentence(rng, depth, bound), random_fo_sentence(rng, depth, bound)});
  if (c == 5) return fm::disj({random_fo_sentence(rng, depth, bound), random_fo_sentence(rng, depth, bound)});
  if (c == 6) return fm::eq(pick(), pick());
  return fm::rel(kEdge, {pick(), pick()});
}

/// The same structure with its domain renamed by a random permutation.
inline Structure shuffled_copy(gen::Rng& rng, const Structure& a) {
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> names;
  for (int i = 0; i < a.size(); ++i) names.push_back("p" + std::to_string(perm[static_cast<std::size_t>(i)]));
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& s : a.signature().symbols()) {
    auto& out = rels[s.name];
    for (const auto& t : a.relation(s.name)) {
      NamedTuple nt;
      for (auto e : t) nt.push_back(names[static_cast<std::size_t>(e)]);
      out.push_back(nt);
    }
  }
  return Structure(a.signature(), names, rels);
}

}  // namespace msot::testing
