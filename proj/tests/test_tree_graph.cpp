#include <gtest/gtest.h>

#include "msot/graph.hpp"
#include "msot/tree.hpp"
#include "support.hpp"

using namespace msot;
using namespace msot::testing;

namespace {

TreeDomain tree(std::vector<std::string> names) { return TreeDomain::from_names(names); }

/// A branching host in which 2^{<2} embeds only through intermediate vertices.
TreeDomain branching_host() { return tree({"", "0", "00", "000", "001", "01", "1"}); }

TreeDomain path_tree(int nodes) {
  std::vector<std::string> names{""};
  for (int i = 1; i < nodes; ++i) names.push_back(std::string(static_cast<std::size_t>(i), '0'));
  return tree(names);
}

bool preserves_order(const TreeDomain& s, const std::map<Path, Path>& f) {
  std::set<Path> image;
  for (const auto& u : s.nodes()) {
    image.insert(f.at(u));
    for (const auto& v : s.nodes())
      if (is_prefix(u, v) != is_prefix(f.at(u), f.at(v))) return false;
  }
  return static_cast<int>(image.size()) == s.size();
}

}  // namespace

TEST(TreeDomain, BasicShape) {
  auto t = complete_tree_domain(2, 3);
  EXPECT_EQ(t.size(), 7);
  EXPECT_EQ(t.height(), 3);
  EXPECT_EQ(t.out_degree({}), 2);
  EXPECT_EQ(t.leaves().size(), 4u);
  EXPECT_EQ(TreeDomain().height(), 0);
  EXPECT_EQ(TreeDomain::single().height(), 1);
  EXPECT_THROW(tree({"", "01"}), StructuralError);
}

TEST(TreeDomain, InfimumAndPrefix) {
  EXPECT_EQ(infimum(parse_path("010"), parse_path("011")), parse_path("01"));
  EXPECT_TRUE(is_prefix(parse_path("0"), parse_path("01")));
  EXPECT_FALSE(is_prefix(parse_path("1"), parse_path("01")));
  EXPECT_EQ(path_name(parse_path("102")), "102");
}

TEST(Generators, CompleteTree) {
  auto t = complete_tree(2, 3);
  auto s = t.to_structure();
  EXPECT_EQ(s.size(), 7);
  for (const auto& v : t.domain.nodes())
    if (v.size() < 2) EXPECT_EQ(t.domain.out_degree(v), 2);
}

TEST(Generators, PathHasLEdges) {
  for (int l = 0; l <= 6; ++l) {
    auto p = path_graph(l);
    EXPECT_EQ(p.size(), l + 1);
    EXPECT_EQ(edge_count(p), l);
    EXPECT_EQ(longest_path_vertices(p), l + 1);
  }
}

TEST(Generators, Grids) {
  auto g22 = grid_graph(2, 2);
  EXPECT_TRUE(are_isomorphic(g22, graph_from(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
  auto g33 = grid_graph(3, 3);
  EXPECT_EQ(g33.size(), 9);
  EXPECT_EQ(edge_count(g33), 12);
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) EXPECT_EQ(edge_count(grid_graph(m, n)), m * (n - 1) + n * (m - 1));
}

TEST(ConvertTree, OrderToSuccessor) {
  ColouredTree t{complete_tree_domain(2, 2), TreeMode::Order, {}};
  auto s = convert_tree(t, TreeMode::Successor);
  auto st = s.to_structure();
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& e : st.relation(kSuccessorRel)) edges.insert({st.name(e[0]), st.name(e[1])});
  std::set<std::pair<std::string, std::string>> expected{{"", "0"}, {"", "1"}};
  EXPECT_EQ(edges, expected);
}

TEST(ConvertTree, SingleVertex) {
  ColouredTree t{TreeDomain::single(), TreeMode::Order, {}};
  auto s = convert_tree(t, TreeMode::Successor).to_structure();
  EXPECT_EQ(s.size(), 1);
  EXPECT_TRUE(s.relation(kSuccessorRel).empty());
}

TEST(ConvertTree, RoundTripOnRandomTrees) {
  gen::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = gen::random_tree_domain(rng, gen::uniform(rng, 1, 12));
    std::set<Path> colour;
    for (const auto& v : d.nodes())
      if (gen::coin(rng, 0.3)) colour.insert(v);
    ColouredTree t{d, TreeMode::Successor, {colour}};
    auto there = convert_tree(t, TreeMode::Order);
    auto back = convert_tree(there, TreeMode::Successor);
    EXPECT_TRUE(are_isomorphic(back.to_structure(), t.to_structure())) << trial;
    EXPECT_EQ(back.domain.size(), d.size());
  }
}

TEST(Embedding, SmallCases) {
  auto b2 = complete_tree_domain(2, 2);
  auto f = embed_order_tree(b2, complete_tree_domain(3, 2));
  ASSERT_TRUE(f);
  EXPECT_TRUE(preserves_order(b2, *f));
  for (int n = 1; n <= 8; ++n) EXPECT_FALSE(embed_order_tree(complete_tree_domain(2, 3), path_tree(n)));
  auto g = embed_order_tree(b2, branching_host());
  ASSERT_TRUE(g);
  EXPECT_TRUE(preserves_order(b2, *g));
}

TEST(Embedding, ImpliesMinor) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = gen::random_tree_domain(rng, gen::uniform(rng, 1, 5));
    auto t = gen::random_tree_domain(rng, gen::uniform(rng, 1, 9));
    if (embed_order_tree(s, t)) {
      auto r = is_minor(tree_graph(s), tree_graph(t));
      EXPECT_TRUE(r.is_minor) << trial;
      EXPECT_TRUE(check_minor_certificate(tree_graph(s), tree_graph(t), r.certificate));
    }
  }
}

TEST(Embedding, CompleteEmbeddingHeightMatchesSearch) {
  gen::Rng rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    auto t = gen::random_tree_domain(rng, gen::uniform(rng, 1, 10));
    for (int m = 1; m <= 2; ++m) {
      int h = complete_embedding_height(t, m);
      EXPECT_TRUE(embed_order_tree(complete_tree_domain(m, h), t).has_value());
      if (complete_tree_domain(m, h + 1).size() <= 15)
        EXPECT_FALSE(embed_order_tree(complete_tree_domain(m, h + 1), t).has_value()) << trial;
    }
  }
}

TEST(HorizontallyRelated, Examples) {
  auto t = complete_tree_domain(2, 3);
  EXPECT_EQ(horizontally_related(t, {parse_path("00"), parse_path("10")}), Path{});
  EXPECT_EQ(horizontally_related(t, {parse_path("00"), parse_path("01")}), parse_path("0"));
  EXPECT_FALSE(horizontally_related(t, {parse_path("0"), parse_path("10")}));
  EXPECT_FALSE(horizontally_related(t, {parse_path("00"), parse_path("01"), parse_path("10")}));
}

TEST(Contraction, Examples) {
  auto k3 = complete_graph(3);
  EXPECT_TRUE(are_isomorphic(contract_edges(k3, {{"v1", "v2"}}), complete_graph(2)));
  auto p = path_graph(3);
  auto all = contract_edges(p, {{"v1", "v2"}, {"v2", "v3"}, {"v3", "v4"}});
  EXPECT_EQ(all.size(), 1);
  EXPECT_EQ(edge_count(all), 0);
  auto g = grid_graph(2, 2);
  EXPECT_TRUE(are_isomorphic(contract_edges(g, {{grid_vertex(0, 0), grid_vertex(0, 1)}}), complete_graph(3)));
  EXPECT_THROW(contract_edges(k3, {{"v1", "v9"}}), ArgumentError);
  EXPECT_THROW(contract_edges(p, {{"v1", "v3"}}), ArgumentError);
}

TEST(Contraction, QuotientIsSimple) {
  gen::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = gen::random_graph(rng, gen::uniform(rng, 1, 7), 0.5);
    std::vector<Edge> chosen;
    for (const auto& [u, v] : edge_list(g))
      if (gen::coin(rng, 0.4)) chosen.push_back({g.name(u), g.name(v)});
    auto q = contract_edges(g, chosen);
    EXPECT_TRUE(is_graph(q));
    for (const auto& t : q.relation(kEdge)) {
      EXPECT_NE(t[0], t[1]);
      EXPECT_TRUE(q.holds(kEdge, {t[1], t[0]}));
    }
    // Classes partition the vertex set: component count of the contracted subgraph.
    auto h = make_graph(g.domain(), chosen);
    EXPECT_EQ(q.size(), static_cast<int>(components(adjacency(h), full_mask(h.size())).size()));
  }
}

TEST(Minor, Examples) {
  for (int l = 0; l <= 6; ++l) EXPECT_FALSE(is_minor(complete_graph(3), path_graph(l)).is_minor);
  auto r = is_minor(path_graph(3), grid_graph(2, 3));
  EXPECT_TRUE(r.is_minor);
  EXPECT_TRUE(check_minor_certificate(path_graph(3), grid_graph(2, 3), r.certificate));
  auto g = grid_graph(2, 3);
  auto self = is_minor(g, g);
  ASSERT_TRUE(self.is_minor);
  for (const auto& [v, set] : self.certificate) EXPECT_EQ(set.size(), 1u);
  EXPECT_THROW(is_minor(path_graph(1), path_graph(12)), BudgetError);
}

TEST(Minor, ReflexiveOnCatalogue) {
  for (const auto& g : graph_catalogue(1, 6)) {
    auto r = is_minor(g, g);
    ASSERT_TRUE(r.is_minor);
    EXPECT_TRUE(check_minor_certificate(g, g, r.certificate));
  }
  gen::Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen::random_graph(rng, 7, 0.4);
    EXPECT_TRUE(is_minor(g, g).is_minor);
  }
}

TEST(Minor, TransitiveByComposingCertificates) {
  gen::Rng rng(41);
  auto small = graph_catalogue(1, 4);
  int composed = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto k = gen::random_graph(rng, gen::uniform(rng, 4, 7), 0.5);
    auto g = gen::random_graph(rng, gen::uniform(rng, 3, 5), 0.6);
    const auto& h = small[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(small.size()) - 1))];
    auto gk = is_minor(g, k);
    auto hg = is_minor(h, g);
    if (!gk.is_minor || !hg.is_minor) continue;
    ++composed;
    auto hk = compose_certificates(hg.certificate, gk.certificate);
    EXPECT_TRUE(check_minor_certificate(h, k, hk)) << trial;
    EXPECT_TRUE(is_minor(h, k).is_minor) << trial;
  }
  EXPECT_GT(composed, 20);
}

TEST(Minor, AgreesWithContractionSweep) {
  // H ≤ G iff H is a contraction of a subgraph: check against all_minors.
  for (const auto& g : graph_catalogue(1, 4)) {
    auto minors = all_minors(g);
    for (const auto& h : graph_catalogue(1, 4)) {
      bool listed = minors.count(canonical_key(h)) > 0;
      EXPECT_EQ(is_minor(h, g).is_minor, listed);
    }
  }
}
