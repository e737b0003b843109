#include <gtest/gtest.h>

#include <functional>

#include "msot/encodings.hpp"
#include "msot/io.hpp"
#include "support.hpp"

using namespace msot;
using namespace msot::testing;

namespace {

Structure example() {
  return Structure(Signature{{"R", 3}}, {"a", "b", "c", "d", "e"},
                   {{"R", {{"a", "b", "c"}, {"a", "b", "d"}, {"a", "b", "e"}}}});
}

/// Every ordered tree on n vertices as its preorder out-degree sequence: the
/// count of open child slots stays positive until the last vertex closes it.
std::vector<std::vector<int>> ordered_trees(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> seq;
  std::function<void(int)> go = [&](int open) {
    if (static_cast<int>(seq.size()) == n) {
      if (open == 0) out.push_back(seq);
      return;
    }
    if (open == 0) return;
    int left = n - static_cast<int>(seq.size()) - 1;
    for (int d = 0; d <= left; ++d) {
      seq.push_back(d);
      go(open + d - 1);
      seq.pop_back();
    }
  };
  go(1);
  return out;
}

TreeDomain from_degrees(const std::vector<int>& deg) {
  std::set<Path> nodes;
  std::size_t i = 0;
  std::function<void(const Path&)> build = [&](const Path& p) {
    nodes.insert(p);
    int d = deg[i++];
    for (int c = 0; c < d; ++c) {
      Path q = p;
      q.push_back(c);
      build(q);
    }
  };
  build({});
  return TreeDomain(std::move(nodes));
}

std::vector<TreeDomain> all_trees(int max_nodes) {
  std::vector<TreeDomain> out;
  for (int n = 1; n <= max_nodes; ++n)
    for (const auto& d : ordered_trees(n)) out.push_back(from_degrees(d));
  return out;
}

Structure successor(const TreeDomain& t) { return ColouredTree{t, TreeMode::Successor, {}}.to_structure(); }

std::set<std::string> keys(const std::vector<Structure>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(canonical_key(x));
  return out;
}

std::set<std::string> minor_keys(const Structure& g) {
  std::set<std::string> out;
  for (const auto& [k, _] : all_minors(g)) out.insert(k);
  return out;
}

std::set<std::pair<std::string, std::string>> named(const Structure& s, const char* rel) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& t : s.relation(rel)) out.insert({s.name(t[0]), s.name(t[1])});
  return out;
}

}  // namespace

TEST(TreeWord, Examples) {
  EXPECT_EQ(tree_word_encode(TreeDomain::single(), 1), (Word{0}));
  EXPECT_EQ(tree_word_encode(TreeDomain::from_names({"", "0", "1"}), 2), (Word{0, 1, 1}));
  EXPECT_EQ(tree_word_encode(TreeDomain::from_names({"", "0", "00"}), 3), (Word{0, 1, 2}));
  EXPECT_THROW(tree_word_encode(TreeDomain::from_names({"", "0", "00"}), 2), ArgumentError);
  EXPECT_EQ(tree_word_decode({0, 1, 1}), TreeDomain::from_names({"", "0", "1"}));
  EXPECT_EQ(tree_word_decode({0}), TreeDomain::single());
  EXPECT_EQ(word_to_string({0, 1, 1}), "0 1 1");
  EXPECT_EQ(parse_word("0 1 1"), (Word{0, 1, 1}));
}

TEST(TreeWord, InvalidWords) {
  EXPECT_THROW(tree_word_decode({1, 0}), FormatError);
  EXPECT_THROW(tree_word_decode({0, 0}), FormatError);
  EXPECT_THROW(tree_word_decode({0, 1, 0}), FormatError);
  EXPECT_THROW(parse_word("0 x"), FormatError);
}

TEST(TreeWord, EnumerationCountsAreCatalan) {
  std::vector<std::size_t> counts;
  for (int n = 1; n <= 6; ++n) counts.push_back(ordered_trees(n).size());
  EXPECT_EQ(counts, (std::vector<std::size_t>{1, 1, 2, 5, 14, 42}));
}

TEST(TreeWord, ExhaustiveRoundTrip) {
  int checked = 0;
  for (const auto& t : all_trees(6)) {
    if (t.height() > 3) continue;
    auto w = tree_word_encode(t, 3);
    EXPECT_EQ(static_cast<int>(w.size()), t.size());
    EXPECT_EQ(tree_word_decode(w), t);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(TreeWord, TransductionAgreesWithDecoder) {
  const int n = 3;
  auto tau = tree_word_transduction(n);
  for (const auto& t : all_trees(5)) {
    if (t.height() > n) continue;
    auto w = tree_word_encode(t, n);
    auto out = apply(tau, word_structure(w, n));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_TRUE(are_isomorphic(out[0], successor(tree_word_decode(w))));
  }
  for (const auto& bad : {Word{1, 0}, Word{0, 0}, Word{0, 2, 1, 0}}) EXPECT_TRUE(apply(tau, word_structure(bad, n)).empty());
}

TEST(TreeWord, BackwardsTranslationAgreesWithDecoder) {
  const int n = 3;
  auto tau = tree_word_transduction(n);
  std::vector<Formula> sentences{
      desugar(parse_formula("(existsF x (existsF y (existsF z (and (rel suc x y) (rel suc x z) (not (eq y z))))))")),
      desugar(parse_formula("(existsF x (existsF y (existsF z (and (rel suc x y) (rel suc y z)))))")),
      desugar(parse_formula("(forallF x (existsF y (or (rel suc y x) (rel suc x y))))"))};
  for (const auto& phi : sentences) {
    auto back = backwards(tau, phi);
    for (const auto& t : all_trees(5)) {
      if (t.height() > n) continue;
      auto w = tree_word_encode(t, n);
      EXPECT_EQ(eval(word_structure(w, n), back), eval(successor(t), phi)) << word_to_string(w);
    }
  }
}

TEST(GridOrient, Examples) {
  auto g = grid_graph(2, 2);
  auto o = grid_orient(g, grid_orientation_params(2, 2));
  EXPECT_EQ(o.relation(kRowEdge).size(), 2u);
  EXPECT_EQ(o.relation(kColumnEdge).size(), 2u);
  auto one = grid_orient(grid_graph(1, 1), grid_orientation_params(1, 1));
  EXPECT_TRUE(one.relation(kRowEdge).empty());
  EXPECT_TRUE(one.relation(kColumnEdge).empty());
}

TEST(GridOrient, RowAndColumnIncrements) {
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      auto o = grid_orient(grid_graph(m, n), grid_orientation_params(m, n));
      std::set<std::pair<std::string, std::string>> rows, cols;
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) {
          if (i + 1 < m) rows.insert({grid_vertex(i, k), grid_vertex(i + 1, k)});
          if (k + 1 < n) cols.insert({grid_vertex(i, k), grid_vertex(i, k + 1)});
        }
      EXPECT_EQ(named(o, kRowEdge), rows);
      EXPECT_EQ(named(o, kColumnEdge), cols);
    }
}

TEST(GridOrient, ShiftedParametersAccepted) {
  auto g = grid_graph(3, 4);
  auto base = grid_orient(g, grid_orientation_params(3, 4));
  auto shifted = grid_orient(g, grid_orientation_params(3, 4, 1, 0));
  EXPECT_EQ(named(shifted, kRowEdge), named(base, kRowEdge));
  EXPECT_EQ(named(shifted, kColumnEdge), named(base, kColumnEdge));
}

TEST(GridOrient, CorruptedParametersRejected) {
  auto g = grid_graph(3, 3);
  auto o = grid_orientation_params(3, 3);
  // Move one vertex to the wrong row class.
  auto v = grid_vertex(1, 1);
  o.p[1].erase(v);
  o.p[2].insert(v);
  EXPECT_THROW(grid_orient(g, o), ArgumentError);
  auto missing = grid_orientation_params(3, 3);
  missing.q[0].erase(grid_vertex(0, 0));
  EXPECT_THROW(grid_orient(g, missing), ArgumentError);
  // Reversed rows on the bottom half only: locally consistent, globally not a grid orientation.
  auto g4 = grid_graph(4, 1);
  GridOrientation bent;
  for (int i = 0; i < 4; ++i) {
    int cls[] = {0, 1, 0, 2};
    bent.p[static_cast<std::size_t>(cls[i])].insert(grid_vertex(i, 0));
    bent.q[0].insert(grid_vertex(i, 0));
  }
  EXPECT_THROW(grid_orient(g4, bent), ArgumentError);
}

TEST(GridOrient, TransductionAgreesWithDirectAlgorithm) {
  auto tau = grid_orient_transduction();
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n)
      for (int shift = 0; shift < 3; ++shift) {
        auto g = grid_graph(m, n);
        auto params = grid_orientation_params(m, n, shift, 2 * shift);
        auto out = apply(tau, grid_with_orientation(g, params));
        ASSERT_EQ(out.size(), 1u);
        auto direct = grid_orient(g, params);
        EXPECT_EQ(named(out[0], kRowEdge), named(direct, kRowEdge));
        EXPECT_EQ(named(out[0], kColumnEdge), named(direct, kColumnEdge));
      }
  auto g = grid_graph(3, 3);
  auto o = grid_orientation_params(3, 3);
  o.p[1].erase(grid_vertex(1, 1));
  o.p[2].insert(grid_vertex(1, 1));
  EXPECT_TRUE(apply(tau, grid_with_orientation(g, o)).empty());
}

TEST(GridOrient, BackwardsAgreesWithDirectAlgorithm) {
  auto tau = grid_orient_transduction();
  auto phi = desugar(parse_formula("(existsF x (existsF y (existsF z (and (rel E0 x y) (rel E1 y z)))))"));
  auto back = backwards(tau, phi);
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      auto g = grid_graph(m, n);
      auto params = grid_orientation_params(m, n);
      EXPECT_EQ(eval(grid_with_orientation(g, params), back), eval(grid_orient(g, params), phi)) << m << "x" << n;
    }
}

TEST(GridCode, ExampleStructure) {
  auto code = grid_encode(example());
  EXPECT_EQ(code.rows, 6);
  EXPECT_EQ(code.cols, 4);
  ASSERT_EQ(code.a_names.front(), "a");
  std::set<Cell> a_row{{1, 1}, {1, 2}, {1, 3}};
  EXPECT_EQ(code.positions.at(0), a_row);
  std::set<Cell> inter;
  std::set_intersection(code.a_cells.begin(), code.a_cells.end(), code.e_cells.begin(), code.e_cells.end(),
                        std::inserter(inter, inter.begin()));
  EXPECT_TRUE(inter.empty());
  EXPECT_TRUE(are_isomorphic(grid_decode(code).structure, to_incidence(example()).structure));
}

TEST(GridCode, EmptyStructure) {
  auto code = grid_encode(Structure(Signature{{"R", 2}}, {}, {}));
  EXPECT_EQ(code.rows, 1);
  EXPECT_EQ(code.cols, 1);
  EXPECT_TRUE(code.a_cells.empty());
  EXPECT_TRUE(code.e_cells.empty());
  for (const auto& p : code.positions) EXPECT_TRUE(p.empty());
  EXPECT_EQ(grid_decode(code).structure.size(), 0);
}

TEST(GridCode, RandomRoundTrips) {
  gen::Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    auto a = gen::random_structure(rng, gen::random_signature(rng), gen::uniform(rng, 0, 6));
    auto back = grid_decode(grid_encode(a));
    EXPECT_TRUE(are_isomorphic(back.structure, to_incidence(a).structure)) << i;
    EXPECT_TRUE(are_isomorphic(from_incidence(back), a)) << i;
  }
}

TEST(GridCode, FixtureRoundTrips) {
  for (const char* f : {"k3.json", "p4.json", "example.json"}) {
    auto a = io::read_structure(fixture(f));
    EXPECT_TRUE(are_isomorphic(grid_decode(grid_encode(a)).structure, to_incidence(a).structure)) << f;
  }
}

TEST(GridCode, InconsistentCodeRejected) {
  auto code = grid_encode(example());
  code.e_cells.insert(*code.a_cells.begin());
  EXPECT_THROW(grid_decode(code), Error);
}

TEST(Catalogue, CanonicalOrder) {
  Signature sig{{"E", 2}};
  std::uint64_t prev = 0;
  bool first = true;
  for (int s = 0; s <= 2; ++s)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << catalogue_bits(sig, s)); ++c) {
      auto idx = catalogue_offset(sig, s) + c;
      auto st = catalogue_structure(sig, idx, 2);
      EXPECT_EQ(st.size(), s);
      EXPECT_EQ(catalogue_index(st), idx);
      if (!first) EXPECT_GT(idx, prev);
      prev = idx;
      first = false;
    }
  EXPECT_THROW(catalogue_structure(sig, catalogue_offset(sig, 3), 2), FormatError);
}

TEST(DecompositionCode, ExampleStructure) {
  auto a = example();
  TreeDecomposition d{TreeDomain::from_names({"", "0", "00"}), {}};
  auto idx = [&](const char* v) { return a.require_index(v); };
  d.bags[{}] = {idx("a"), idx("b"), idx("c")};
  d.bags[parse_path("0")] = {idx("a"), idx("b"), idx("d")};
  d.bags[parse_path("00")] = {idx("a"), idx("b"), idx("e")};
  auto code = decomposition_encode(a, d, 2);
  EXPECT_EQ(code.colour.size(), 3u);
  ASSERT_EQ(code.links.size(), 2u);
  for (const auto& [_, r] : code.links) EXPECT_EQ(r.size(), 2u);
  std::set<std::uint64_t> colours;
  for (const auto& [_, c] : code.colour) colours.insert(c);
  EXPECT_EQ(colours.size(), 1u);  // every bag is a copy of one catalogue structure
  EXPECT_TRUE(are_isomorphic(decomposition_decode(code).structure, to_incidence(a).structure));
  EXPECT_THROW(decomposition_encode(a, d, 1), ArgumentError);
}

TEST(DecompositionCode, SingleBag) {
  auto k3 = complete_graph(3);
  auto code = decomposition_encode(k3, single_bag(k3), 2);
  EXPECT_EQ(code.tree.size(), 1);
  EXPECT_TRUE(code.links.empty());
  EXPECT_TRUE(are_isomorphic(from_incidence(decomposition_decode(code)), k3));
}

TEST(DecompositionCode, RandomRoundTrips) {
  gen::Rng rng(101);
  int encoded = 0;
  for (int i = 0; i < 100; ++i) {
    Structure a;
    TreeDecomposition d;
    if (i % 2 == 0) {
      auto gd = gen::random_decomposition(rng, gen::uniform(rng, 1, 8), gen::uniform(rng, 1, 6));
      a = gd.graph;
      d = gd.decomposition;
      if (d.width() > 3) d = exact_width(a, WidthMode::Tree).witness;
    } else {
      a = gen::random_structure(rng, gen::random_signature(rng, 2), gen::uniform(rng, 1, 7));
      d = exact_width(a, WidthMode::Tree).witness;
    }
    if (d.width() > 3) continue;
    int k = std::max(d.width(), gen::uniform(rng, 0, 3));
    auto code = decomposition_encode(a, d, k);
    EXPECT_TRUE(are_isomorphic(decomposition_decode(code).structure, to_incidence(a).structure)) << i;
    ++encoded;
  }
  EXPECT_GT(encoded, 80);
}

TEST(DecompositionCode, NonBijectiveLinksRejected) {
  auto p = path_graph(2);
  auto code = decomposition_encode(p, dfs_decomposition(p), 2);
  ASSERT_FALSE(code.links.empty());
  auto& r = code.links.begin()->second;
  ASSERT_FALSE(r.empty());
  auto [i, j] = *r.begin();
  r.insert({i, j == 0 ? 1 : 0});
  EXPECT_THROW(decomposition_decode(code), FormatError);
}

TEST(MinorApply, Examples) {
  auto k3 = complete_graph(3);
  auto same = minor_apply(k3, {});
  ASSERT_TRUE(same);
  EXPECT_EQ(same->relation(kEdge), k3.relation(kEdge));
  MinorParams c;
  c.contracted_edges = {{"v1", "v2"}};
  c.representatives = {"v1", "v3"};
  auto k2 = minor_apply(k3, c);
  ASSERT_TRUE(k2);
  EXPECT_TRUE(are_isomorphic(*k2, complete_graph(2)));
  c.representatives = {"v1", "v2", "v3"};
  EXPECT_FALSE(minor_apply(k3, c));  // two representatives in one class
  c.representatives = {"v3"};
  EXPECT_FALSE(minor_apply(k3, c));  // contracted class without one
  MinorParams clash;
  clash.deleted_edges = {{"v1", "v2"}};
  clash.contracted_edges = {{"v2", "v1"}};
  clash.representatives = {"v1", "v3"};
  EXPECT_FALSE(minor_apply(k3, clash));
}

TEST(MinorApply, SweepOnPath) {
  auto p = path_graph(3);
  EXPECT_EQ(keys(minor_sweep(p)), minor_keys(p));
  EXPECT_EQ(keys(minor_sweep(p, true)), minor_keys(p));
}

TEST(MinorApply, SweepEqualsMinorsUpToFiveVertices) {
  for (const auto& g : graph_catalogue(1, 5)) EXPECT_EQ(keys(minor_sweep(g)), minor_keys(g)) << canonical_key(g);
}
