#include <gtest/gtest.h>

#include "msot/encodings.hpp"
#include "msot/transduction.hpp"
#include "msot/types.hpp"
#include "support.hpp"

using namespace msot;
using namespace msot::testing;

namespace {

std::set<std::string> keys(const std::vector<Structure>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(canonical_key(x));
  return out;
}

/// Equal as sets up to isomorphism, without canonical keys.
bool same_outputs(const std::vector<Structure>& xs, const std::vector<Structure>& ys) {
  auto covered = [](const std::vector<Structure>& as, const std::vector<Structure>& bs) {
    for (const auto& a : as)
      if (std::none_of(bs.begin(), bs.end(), [&](const Structure& b) { return are_isomorphic(a, b); })) return false;
    return true;
  };
  return covered(xs, ys) && covered(ys, xs);
}

/// Semantic right-hand side of the comorphism law.
bool some_output_satisfies(const Transduction& t, const Structure& a, const Formula& phi) {
  for (const auto& b : apply(t, a))
    if (eval(b, phi)) return true;
  return false;
}

std::vector<Transduction> suite() {
  return {transductions::identity(graph_signature()), transductions::complement(), transductions::non_isolated(),
          transductions::doubler(), transductions::expander()};
}

Structure single_vertex() { return make_graph({"a"}, {}); }

}  // namespace

TEST(Copy, SingleVertexTwice) {
  auto c = copy_structure(single_vertex(), 2);
  EXPECT_EQ(c.size(), 2);
  EXPECT_EQ(c.relation(copy_predicate(0)).size(), 1u);
  EXPECT_EQ(c.relation(copy_predicate(1)).size(), 1u);
  int distinct = 0;
  for (const auto& t : c.relation(kSim)) distinct += t[0] != t[1];
  EXPECT_EQ(distinct, 2);  // one unordered pair
}

TEST(Copy, OneCopyIsIdentity) {
  auto k3 = complete_graph(3);
  auto c = copy_structure(k3, 1);
  EXPECT_EQ(c.domain(), k3.domain());
  EXPECT_TRUE(c.signature() == k3.signature());
  EXPECT_EQ(c.relation(kEdge), k3.relation(kEdge));
}

TEST(Copy, TriangleTwice) {
  auto c = copy_structure(complete_graph(3), 2);
  EXPECT_EQ(c.size(), 6);
  std::set<std::pair<Element, Element>> pairs;
  for (const auto& t : c.relation(kSim))
    if (t[0] < t[1]) pairs.insert({t[0], t[1]});
  EXPECT_EQ(pairs.size(), 3u);
  EXPECT_EQ(c.relation(kEdge).size(), 12u);
  for (const auto& t : c.relation(kEdge)) {
    bool same_copy = false;
    for (int i = 0; i < 2; ++i)
      same_copy = same_copy || (c.holds(copy_predicate(i), {t[0]}) && c.holds(copy_predicate(i), {t[1]}));
    EXPECT_TRUE(same_copy);
  }
  EXPECT_THROW(copy_structure(complete_graph(3), 0), ArgumentError);
}

TEST(Expansions, Counts) {
  auto k3 = complete_graph(3);
  auto none = expansions(k3, 0);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].relation(kEdge), k3.relation(kEdge));
  EXPECT_EQ(expansions(path_graph(1), 1).size(), 4u);
  auto all = expansions(k3, 2);
  EXPECT_EQ(all.size(), 64u);
  EXPECT_EQ(expansions(k3, 2).front().domain(), all.front().domain());
  EXPECT_THROW(expansions(path_graph(10), 2), BudgetError);
}

TEST(Expansions, DistinctAndOrdered) {
  auto a = path_graph(2);
  auto xs = expansions(a, 2);
  std::set<std::vector<std::vector<Element>>> seen;
  for (const auto& x : xs) {
    std::vector<std::vector<Element>> sig;
    for (int j = 0; j < 2; ++j) {
      std::vector<Element> members;
      for (const auto& t : x.relation(param_predicate(j))) members.push_back(t[0]);
      sig.push_back(members);
    }
    seen.insert(sig);
  }
  EXPECT_EQ(seen.size(), 64u);
  auto again = expansions(a, 2);
  for (std::size_t i = 0; i < xs.size(); ++i)
    EXPECT_EQ(xs[i].relation(param_predicate(0)), again[i].relation(param_predicate(0)));
}

TEST(ApplyBasic, Examples) {
  auto k3 = complete_graph(3);
  auto id = apply_basic(transductions::identity(graph_signature()).scheme, k3);
  ASSERT_TRUE(id);
  EXPECT_EQ(id->relation(kEdge), k3.relation(kEdge));
  auto co = apply_basic(transductions::complement().scheme, k3);
  ASSERT_TRUE(co);
  EXPECT_EQ(co->size(), 3);
  EXPECT_EQ(edge_count(*co), 0);
  auto never = transductions::complement().scheme;
  never.chi = fm::bottom();
  for (const auto& g : graph_catalogue(0, 3)) EXPECT_FALSE(apply_basic(never, g));
}

TEST(Apply, IdentityAndDoubler) {
  auto p = path_graph(2);
  auto id = apply(transductions::identity(graph_signature()), p);
  ASSERT_EQ(id.size(), 1u);
  EXPECT_TRUE(are_isomorphic(id[0], p));
  auto d = apply(transductions::doubler(), p);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].size(), 6);
  EXPECT_EQ(edge_count(d[0]), 2 + 2 + 3);
}

TEST(Apply, MinorTransductionOnTriangle) {
  auto k3 = complete_graph(3);
  auto out = apply(minor_transduction(), edge_incidence(k3), {.expansion_budget = 20, .dedupe_isomorphic = true});
  std::set<std::string> expected;
  for (const auto& [key, _] : all_minors(k3)) expected.insert(key);
  EXPECT_EQ(keys(out), expected);
}

TEST(Apply, MinorTransductionOnSmallGraphs) {
  for (const auto& g : graph_catalogue(1, 3)) {
    if (g.size() + edge_count(g) > 6) continue;
    auto out = apply(minor_transduction(), edge_incidence(g), {.expansion_budget = 20, .dedupe_isomorphic = true});
    EXPECT_EQ(keys(out), keys(minor_sweep(g))) << canonical_key(g);
  }
}

TEST(Apply, BasicAgreesWithSingleCopyParameterless) {
  gen::Rng rng(6);
  for (int i = 0; i < 60; ++i) {
    auto g = gen::random_graph(rng, gen::uniform(rng, 0, 5), 0.5);
    for (const auto& t : {transductions::complement(), transductions::non_isolated()}) {
      auto direct = apply_basic(t.scheme, g);
      auto via = apply(t, g);
      ASSERT_EQ(via.size(), direct ? 1u : 0u);
      if (direct) {
        EXPECT_EQ(via[0].domain(), direct->domain());
        EXPECT_EQ(via[0].relation(kEdge), direct->relation(kEdge));
      }
    }
  }
}

TEST(Backwards, IdentityIsEquivalent) {
  gen::Rng rng(12);
  auto id = transductions::identity(graph_signature());
  auto graphs = graph_catalogue(1, 4);
  for (int i = 0; i < 100; ++i) {
    auto phi = random_sentence(rng, graph_signature(), 2, 2);
    auto back = backwards(id, phi);
    for (const auto& g : graphs) ASSERT_EQ(eval(g, back), eval(g, phi)) << to_string(phi);
  }
}

TEST(Backwards, ComplementHasAnEdge) {
  auto phi = desugar(parse_formula("(existsF x (existsF y (rel edg x y)))"));
  auto back = backwards(transductions::complement(), phi);
  for (int n = 0; n <= 4; ++n)
    for (const auto& g : all_graphs(n)) {
      bool complement_has_edge = edge_count(g) < n * (n - 1) / 2;
      EXPECT_EQ(eval(g, back), complement_has_edge);
    }
}

TEST(Backwards, RestrictionOfNonemptiness) {
  auto t = transductions::non_isolated();
  auto back = backwards(t, parse_formula("(exists X (not (empty X)))"));
  auto expected = desugar(fm::exists("x0", fm::conj({fm::sing("x0"), t.scheme.delta})), {});
  for (const auto& g : graph_catalogue(0, 4)) EXPECT_EQ(eval(g, back), eval(g, expected));
}

TEST(Backwards, ComorphismLaw) {
  gen::Rng rng(2);
  auto graphs = graph_catalogue(0, 4);
  for (const auto& t : suite()) {
    for (int i = 0; i < 40; ++i) {
      auto phi = random_sentence(rng, graph_signature(), 2, 2);
      auto back = backwards(t, phi);
      for (const auto& g : graphs) {
        if (t.k * g.size() > 8 && t.p > 0) continue;
        ASSERT_EQ(eval(g, back), some_output_satisfies(t, g, phi)) << t.name << " " << to_string(phi);
      }
    }
  }
}

TEST(Backwards, RankPreservedForQuantifierFreeSchemes) {
  gen::Rng rng(19);
  // Renaming schemes translate atoms to atoms, including atoms over sets.
  auto id = transductions::identity(graph_signature());
  for (int i = 0; i < 200; ++i) {
    auto phi = random_sentence(rng, graph_signature(), gen::uniform(rng, 0, 3), 2);
    EXPECT_LE(rank(backwards(id, phi)), rank(phi)) << to_string(phi);
  }
  // Other basic schemes: sentences whose relation atoms take elements.
  auto restricted = transductions::graph_transduction("restricted", 1, 0, "(not (rel edg x0 x0))", "(rel edg x1 x0)");
  for (const auto& t : {transductions::complement(), restricted}) {
    for (int i = 0; i < 200; ++i) {
      auto phi = desugar(random_fo_sentence(rng, gen::uniform(rng, 1, 3)));
      auto back = backwards(t, phi);
      EXPECT_LE(rank(back), rank(phi)) << t.name << " " << to_string(phi);
      for (const auto& g : graph_catalogue(1, 3)) ASSERT_EQ(eval(g, back), some_output_satisfies(t, g, phi));
    }
  }
}

TEST(Backwards, QuantifierFreeActsOnTypes) {
  auto corpus = graph_catalogue(1, 4);
  for (const auto& t : {transductions::complement(), transductions::doubler()})
    for (int m = 1; m <= 2; ++m) {
      std::map<RankType, RankType> image;
      for (const auto& a : corpus) {
        auto out = apply(t, a);
        ASSERT_EQ(out.size(), 1u);
        if (out[0].size() * m > kTypeBudget) continue;
        auto [it, fresh] = image.emplace(mtype(a, {}, m), mtype(out[0], {}, m));
        if (!fresh) EXPECT_EQ(it->second, mtype(out[0], {}, m)) << t.name << " m=" << m;
      }
    }
}

TEST(Compose, IdentityOnTheLeft) {
  auto id = transductions::identity(graph_signature());
  for (const auto& t : suite()) {
    auto c = compose(id, t);
    for (const auto& g : graph_catalogue(0, 3))
      EXPECT_EQ(keys(apply(c, g)), keys(apply(t, g))) << t.name;
  }
}

TEST(Compose, ComplementTwiceIsIdentity) {
  auto c = compose(transductions::complement(), transductions::complement());
  for (int n = 0; n <= 4; ++n)
    for (const auto& g : all_graphs(n)) {
      auto out = apply(c, g);
      ASSERT_EQ(out.size(), 1u);
      EXPECT_EQ(out[0].relation(kEdge), g.relation(kEdge));
    }
}

TEST(Compose, DoublerAfterRestrictionMatchesTwoStages) {
  gen::Rng rng(50);
  auto sigma = transductions::doubler(), tau = transductions::non_isolated();
  auto c = compose(sigma, tau);
  for (int i = 0; i < 50; ++i) {
    auto g = gen::random_graph(rng, gen::uniform(rng, 1, 6), 0.3);
    std::vector<Structure> staged;
    for (const auto& b : apply(tau, g))
      for (auto& out : apply(sigma, b)) staged.push_back(std::move(out));
    EXPECT_TRUE(same_outputs(apply(c, g), staged)) << i;
  }
}

TEST(Compose, ParametersAndCopiesThroughBothStages) {
  gen::Rng rng(51);
  auto sigma = transductions::expander(), tau = transductions::doubler();
  auto c = compose(sigma, tau);
  for (int i = 0; i < 12; ++i) {
    auto g = gen::random_graph(rng, gen::uniform(rng, 1, 3), 0.5);
    std::vector<Structure> staged;
    for (const auto& b : apply(tau, g))
      for (auto& out : apply(sigma, b)) staged.push_back(std::move(out));
    EXPECT_TRUE(same_outputs(apply(c, g), staged)) << i;
  }
}

TEST(Compose, SignatureMismatch) {
  auto other = transductions::identity(Signature{{"R", 3}});
  EXPECT_THROW(compose(other, transductions::complement()), SignatureError);
}
