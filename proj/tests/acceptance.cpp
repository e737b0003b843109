// Acceptance run: one pass/fail line per criterion, each under its time limit.
// Usage: acceptance [criterion numbers...]   (all when none given)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <thread>

#include "msot/encodings.hpp"
#include "msot/hierarchy.hpp"
#include "msot/io.hpp"
#include "msot/parallel.hpp"
#include "msot/partition.hpp"
#include "support.hpp"

using namespace msot;
using namespace msot::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

/// Collects failures; the first few are kept for the report line.
struct Tally {
  long checks = 0, failures = 0;
  std::string first;
  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && failures++ == 0) first = what;
  }
  Outcome outcome(const std::string& unit = "checks") const {
    Outcome o;
    o.ok = failures == 0;
    o.detail = std::to_string(checks) + " " + unit;
    if (failures) o.detail += ", " + std::to_string(failures) + " failed; first: " + first;
    return o;
  }
};

Structure example() {
  return Structure(Signature{{"R", 3}}, {"a", "b", "c", "d", "e"},
                   {{"R", {{"a", "b", "c"}, {"a", "b", "d"}, {"a", "b", "e"}}}});
}

/// The 500-structure corpus: at most 8 elements, arities at most 3.
std::vector<Structure> random_corpus() {
  gen::Rng rng(1);
  std::vector<Structure> out;
  for (int i = 0; i < 500; ++i) out.push_back(gen::random_structure(rng, gen::random_signature(rng, 3), gen::uniform(rng, 0, 8)));
  return out;
}

/// Every structure with at most `max_size` elements over one binary relation,
/// one per isomorphism class.
std::vector<Structure> binary_catalogue(int max_size) {
  Signature sig{{kEdge, 2}};
  std::vector<std::uint64_t> idx(catalogue_offset(sig, max_size + 1));
  std::iota(idx.begin(), idx.end(), 0);
  auto all = parallel_map(idx, [&](std::uint64_t i) {
    auto s = catalogue_structure(sig, i, max_size);
    return std::pair{canonical_key(s), s};
  }, jobs());
  std::map<std::string, Structure> classes;
  for (auto& [k, s] : all) classes.emplace(k, s);
  std::vector<Structure> out;
  for (auto& [_, s] : classes) out.push_back(s);
  return out;
}

std::vector<Transduction> suite() {
  return {transductions::identity(graph_signature()), transductions::complement(), transductions::non_isolated(),
          transductions::doubler(), transductions::expander()};
}

/// Isomorphism invariant: size, tuple counts and the sorted degree profile.
std::string invariant(const Structure& s) {
  std::string out = std::to_string(s.size());
  for (const auto& sym : s.signature().symbols()) {
    std::vector<std::vector<int>> deg(static_cast<std::size_t>(s.size()), std::vector<int>(static_cast<std::size_t>(sym.arity), 0));
    for (const auto& t : s.relation(sym.name))
      for (std::size_t i = 0; i < t.size(); ++i) ++deg[static_cast<std::size_t>(t[i])][i];
    std::sort(deg.begin(), deg.end());
    out += "|" + sym.name + ":" + std::to_string(s.relation(sym.name).size());
    for (const auto& d : deg)
      for (int x : d) out += "," + std::to_string(x);
  }
  return out;
}

/// One representative per isomorphism class, grouped by invariant.
std::map<std::string, std::vector<Structure>> iso_classes(const std::vector<Structure>& xs) {
  std::map<std::string, std::vector<Structure>> out;
  for (const auto& x : xs) {
    auto& reps = out[invariant(x)];
    if (std::none_of(reps.begin(), reps.end(), [&](const Structure& r) { return are_isomorphic(r, x); }))
      reps.push_back(x);
  }
  return out;
}

/// Equal as sets up to isomorphism.
bool same_outputs(const std::vector<Structure>& xs, const std::vector<Structure>& ys) {
  auto a = iso_classes(xs), b = iso_classes(ys);
  if (a.size() != b.size()) return false;
  for (const auto& [key, reps] : a) {
    auto it = b.find(key);
    if (it == b.end() || it->second.size() != reps.size()) return false;
    for (const auto& r : reps)
      if (std::none_of(it->second.begin(), it->second.end(), [&](const Structure& q) { return are_isomorphic(r, q); }))
        return false;
  }
  return true;
}

Outcome sparsity() {
  Tally t;
  t.expect(is_k_sparse(to_incidence(example()).structure, 1).sparse, "example");
  int i = 0;
  for (const auto& a : random_corpus()) {
    auto inc = to_incidence(a).structure;
    t.expect(is_k_sparse(inc, 1, inc.size()).sparse, "structure " + std::to_string(i++));
  }
  return t.outcome("structures");
}

Outcome incidence_roundtrip() {
  Tally t;
  t.expect(from_incidence(to_incidence(example())) == example(), "example");
  int i = 0;
  for (const auto& a : random_corpus())
    t.expect(are_isomorphic(from_incidence(to_incidence(a)), a), "structure " + std::to_string(i++));
  return t.outcome("structures");
}

Outcome comorphism() {
  auto corpus = binary_catalogue(4);
  gen::Rng rng(3);
  std::vector<Formula> sentences;
  for (int i = 0; i < 20; ++i) sentences.push_back(random_sentence(rng, graph_signature(), 2, 2));
  Tally t;
  for (const auto& tau : suite()) {
    std::vector<Formula> back;
    for (const auto& phi : sentences) back.push_back(backwards(tau, phi));
    auto rows = parallel_map(corpus, [&](const Structure& a) {
      auto outs = apply(tau, a);
      std::vector<std::string> bad;
      for (std::size_t j = 0; j < sentences.size(); ++j) {
        bool rhs = std::any_of(outs.begin(), outs.end(), [&](const Structure& b) { return eval(b, sentences[j]); });
        if (eval(a, back[j]) != rhs) bad.push_back(tau.name + " / " + to_string(sentences[j]));
      }
      return bad;
    }, jobs());
    for (const auto& bad : rows) {
      t.checks += static_cast<long>(sentences.size()) - static_cast<long>(bad.size());
      for (const auto& b : bad) t.expect(false, b);
    }
  }
  return t.outcome("(transduction, sentence, structure) triples over " + std::to_string(corpus.size()) + " structures");
}

Outcome composition() {
  auto corpus = binary_catalogue(4);
  auto ts = suite();
  Tally t;
  for (const auto& sigma : ts)
    for (const auto& tau : ts) {
      auto both = compose(sigma, tau);
      auto rows = parallel_map(corpus, [&](const Structure& a) {
        std::vector<Structure> staged;
        for (const auto& b : apply(tau, a))
          for (auto& c : apply(sigma, b)) staged.push_back(std::move(c));
        return same_outputs(apply(both, a), staged);
      }, jobs());
      for (std::size_t i = 0; i < rows.size(); ++i)
        t.expect(rows[i], sigma.name + " after " + tau.name + " on structure " + std::to_string(i));
    }
  return t.outcome("(pair, structure) checks");
}

Outcome union_compositionality() {
  gen::Rng rng(5);
  std::vector<Structure> corpus;
  for (int i = 0; i < 30; ++i) corpus.push_back(gen::random_structure(rng, graph_signature(), gen::uniform(rng, 0, 4), 5));
  Tally t;
  for (int m = 0; m <= 2; ++m) {
    std::vector<RankType> types;
    for (const auto& a : corpus) types.push_back(mtype(a, {}, m));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      for (std::size_t j = 0; j < corpus.size(); ++j) pairs.push_back({i, j});
    auto unions = parallel_map(pairs, [&](const std::pair<std::size_t, std::size_t>& p) {
      return mtype(disjoint_union(corpus[p.first], corpus[p.second]), {}, m);
    }, jobs());
    std::map<std::pair<RankType, RankType>, RankType> seen;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto key = std::pair{types[pairs[k].first], types[pairs[k].second]};
      auto [it, fresh] = seen.emplace(key, unions[k]);
      t.expect(fresh || it->second == unions[k],
               "m=" + std::to_string(m) + " pair " + std::to_string(pairs[k].first) + "," + std::to_string(pairs[k].second));
    }
  }
  return t.outcome("union types");
}

Outcome width_oracles() {
  auto graphs = graph_catalogue(1, 7);
  Tally t;
  auto rows = parallel_map(graphs, [](const Structure& g) {
    std::vector<std::string> bad;
    auto agree = [&](WidthMode mode, int depth, const char* label) {
      int fast = exact_width(g, mode, depth).width, slow = exact_width_exhaustive(g, mode, depth);
      if (fast != slow) bad.push_back(std::string(label) + " " + std::to_string(fast) + " vs " + std::to_string(slow) + " on " + canonical_key(g));
    };
    agree(WidthMode::Tree, 0, "twd");
    agree(WidthMode::Path, 0, "pwd");
    for (int n = 1; n <= 3; ++n) agree(WidthMode::Depth, n, "twd_n");
    if (exact_width(g, WidthMode::Depth, 1).width != g.size() - 1) bad.push_back("twd_1 != |A|-1 on " + canonical_key(g));
    return bad;
  }, jobs());
  for (const auto& bad : rows) {
    t.checks += 6 - static_cast<long>(bad.size());
    for (const auto& b : bad) t.expect(false, b);
  }
  t.expect(exact_width(complete_graph(3), WidthMode::Tree).width == 2, "twd(K_3) = 2");
  t.expect(exact_width(path_graph(3), WidthMode::Path).width == 1, "pwd(path(3)) = 1");
  t.expect(exact_width(path_graph(3), WidthMode::Depth, 2).width == 1, "twd_2(P_4) = 1");
  auto o = t.outcome("checks over " + std::to_string(graphs.size()) + " graphs");
  return o;
}

Outcome width_inequalities() {
  auto graphs = graph_catalogue(1, 7);
  Tally t;
  auto rows = parallel_map(graphs, [](const Structure& g) {
    int twd = exact_width(g, WidthMode::Tree).width, pwd = exact_width(g, WidthMode::Path).width;
    std::vector<int> tn{0};
    for (int n = 1; n <= 5; ++n) tn.push_back(exact_width(g, WidthMode::Depth, n).width);
    std::vector<std::string> bad;
    for (int n = 1; n <= 4; ++n) {
      if (!(twd <= tn[n + 1] && tn[n + 1] <= tn[n])) bad.push_back("twd <= twd_n+1 <= twd_n, n=" + std::to_string(n));
      if (!(pwd < n * (tn[n] + 1))) bad.push_back("pwd < n(twd_n+1), n=" + std::to_string(n));
    }
    return std::pair{bad, canonical_key(g)};
  }, jobs());
  for (const auto& [bad, key] : rows) {
    t.checks += 8 - static_cast<long>(bad.size());
    for (const auto& b : bad) t.expect(false, b + " on " + key);
  }
  return t.outcome("inequalities over " + std::to_string(graphs.size()) + " graphs");
}

std::string shape(const TreeDomain& tr, const Path& v = {}) {
  std::vector<std::string> kids;
  for (const auto& c : tr.children(v)) kids.push_back(shape(tr, c));
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (const auto& k : kids) out += k;
  return out + ")";
}

Outcome strictness() {
  Tally t;
  gen::Rng rng(200);
  for (int i = 0; i < 200; ++i) {
    auto [g, d] = gen::random_decomposition(rng, gen::uniform(rng, 1, 8), gen::uniform(rng, 1, 8));
    auto s = strictify(g, d);
    auto tag = "strictify " + std::to_string(i);
    t.expect(validate(g, s).valid, tag + " valid");
    t.expect(is_strict(g, s).strict, tag + " strict");
    t.expect(s.width() <= d.width() && s.height() <= d.height(), tag + " width/height");
  }
  gen::Rng rng2(300);
  for (int i = 0; i < 200; ++i) {
    auto [g, d0] = gen::random_decomposition(rng2, gen::uniform(rng2, 1, 8), gen::uniform(rng2, 1, 7), 0.6, 3);
    auto d = strictify(g, d0);
    if (d.height() > 3) continue;
    auto x = extract_tree(g, levels_of(g, d));
    t.expect(shape(x.decomposition.tree) == shape(d.tree) && validate(g, x.decomposition).valid,
             "extract_tree " + std::to_string(i));
  }
  return t.outcome();
}

Outcome dfs_bounds() {
  Tally t;
  gen::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    auto g = gen::random_connected_graph(rng, gen::uniform(rng, 1, 8), 0.35);
    int l = longest_path_vertices(g);
    auto d = dfs_decomposition(g);
    auto tag = "graph " + std::to_string(i);
    t.expect(validate(g, d).valid, tag + " valid");
    t.expect(d.height() <= l, tag + " height <= L");
    t.expect(d.width() <= l - 1, tag + " width <= L-1");
    t.expect(exact_width(g, WidthMode::Depth, l).width < l, tag + " twd_L < L");
  }
  return t.outcome();
}

Outcome height_reduction() {
  Tally t;
  gen::Rng rng(300);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = gen::uniform(rng, 1, 3), m = gen::uniform(rng, 2, 3);
    auto [g, d] = gen::random_decomposition(rng, gen::uniform(rng, 1, 8), gen::uniform(rng, 2, 9), 0.6, n + 1);
    if (complete_embedding_height(d.tree, m) >= n + 1) continue;
    auto r = reduce_height(g, d, n, m);
    auto tag = "trial " + std::to_string(trial);
    t.expect(validate(g, r).valid, tag + " valid");
    t.expect(r.height() <= n, tag + " height");
    t.expect(r.width() < m * (d.width() + 1), tag + " width");
  }
  return t.outcome("checks on precondition-satisfying inputs");
}

Outcome partition_conversion() {
  Tally t;
  auto inc = IncidenceStructure::from_labelled(io::read_structure(fixture("example_in.json")), Signature{{"R", 3}});
  auto pi = io::refinement_from_json(inc.structure, io::read_json_file(fixture("example_refinement.json")));
  auto rep = validate_refinement(inc, pi);
  t.expect(rep.valid && rep.width == 4, "example refinement has width 4");
  auto d = to_tree_decomposition(inc, pi);
  t.expect(validate(d.original, d.decomposition).valid, "example conversion valid");
  t.expect(conversion_bound(inc, pi) == 24 && d.decomposition.width() < 24, "example width < 24");
  gen::Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    auto r = to_incidence(gen::random_structure(rng, gen::random_signature(rng), gen::uniform(rng, 1, 6), 3));
    auto p = gen::random_refinement(rng, r);
    auto c = to_tree_decomposition(r, p);
    t.expect(validate(c.original, c.decomposition).valid && c.decomposition.width() < conversion_bound(r, p),
             "refinement " + std::to_string(i));
  }
  return t.outcome();
}

std::vector<TreeDomain> trees_up_to(int max_nodes) {
  std::vector<TreeDomain> out;
  for (int n = 1; n <= max_nodes; ++n) {
    std::vector<int> seq;
    std::function<void(int)> go = [&](int open) {
      if (static_cast<int>(seq.size()) == n) {
        if (open != 0) return;
        std::set<Path> nodes;
        std::size_t i = 0;
        std::function<void(const Path&)> build = [&](const Path& p) {
          nodes.insert(p);
          int deg = seq[i++];
          for (int c = 0; c < deg; ++c) {
            Path q = p;
            q.push_back(c);
            build(q);
          }
        };
        build({});
        out.emplace_back(std::move(nodes));
        return;
      }
      if (open == 0) return;
      for (int d = 0; d <= n - static_cast<int>(seq.size()) - 1; ++d) {
        seq.push_back(d);
        go(open + d - 1);
        seq.pop_back();
      }
    };
    go(1);
  }
  return out;
}

Outcome encodings() {
  Tally t;
  int words = 0;
  for (const auto& tr : trees_up_to(6)) {
    if (tr.height() > 3) {
      bool refused = false;
      try {
        tree_word_encode(tr, 3);
      } catch (const ArgumentError&) {
        refused = true;
      }
      t.expect(refused, "tree of height " + std::to_string(tr.height()) + " refused");
      continue;
    }
    t.expect(tree_word_decode(tree_word_encode(tr, 3)) == tr, "tree word " + word_to_string(tree_word_encode(tr, 3)));
    ++words;
  }
  gen::Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    auto a = gen::random_structure(rng, gen::random_signature(rng), gen::uniform(rng, 0, 6));
    t.expect(are_isomorphic(from_incidence(grid_decode(grid_encode(a))), a), "grid " + std::to_string(i));
  }
  gen::Rng rng2(101);
  int pairs = 0;
  for (int i = 0; pairs < 100; ++i) {
    Structure a;
    TreeDecomposition d;
    if (i % 2 == 0) {
      auto gd = gen::random_decomposition(rng2, gen::uniform(rng2, 1, 8), gen::uniform(rng2, 1, 6));
      a = gd.graph;
      d = gd.decomposition;
    } else {
      a = gen::random_structure(rng2, gen::random_signature(rng2, 2), gen::uniform(rng2, 1, 7));
      d = exact_width(a, WidthMode::Tree).witness;
    }
    if (d.width() > 3) continue;
    int k = std::max(d.width(), gen::uniform(rng2, 0, 3));
    t.expect(are_isomorphic(from_incidence(decomposition_decode(decomposition_encode(a, d, k))), a),
             "decomposition code " + std::to_string(i));
    ++pairs;
  }
  auto graphs = graph_catalogue(1, 5);
  auto rows = parallel_map(graphs, [](const Structure& g) {
    std::set<std::string> swept, minors;
    for (const auto& m : minor_sweep(g)) swept.insert(canonical_key(m));
    for (const auto& [k, _] : all_minors(g)) minors.insert(k);
    return swept == minors;
  }, jobs());
  for (std::size_t i = 0; i < rows.size(); ++i) t.expect(rows[i], "minor sweep on " + canonical_key(graphs[i]));
  auto o = t.outcome();
  o.detail += " (" + std::to_string(words) + " tree words, " + std::to_string(graphs.size()) + " graphs swept)";
  return o;
}

Outcome counting() {
  Tally t;
  t.expect(count_B(2, 2, 1).value == 12, "B(2,2,1) = 12");
  for (long n = 1; n <= 4; ++n)
    for (long k = 2; k <= 5; ++k)
      for (long c = 0; c <= 3; ++c)
        t.expect(count_B(n, k, c).bounds_hold,
                 "bounds at (" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(c) + ")");
  return t.outcome();
}

Outcome classifier() {
  std::vector<Structure> stars, binary;
  for (int m = 1; m <= 5; ++m) stars.push_back(tree_graph(complete_tree_domain(m, 2)));
  for (int h = 2; h <= 4; ++h) binary.push_back(tree_graph(complete_tree_domain(2, h)));
  std::vector<std::tuple<std::string, std::vector<Structure>, std::string>> families{
      {"paths", {path_graph(1), path_graph(3), path_graph(7), path_graph(15)}, "P"},
      {"grids", {grid_graph(2, 2), grid_graph(2, 3), grid_graph(3, 3)}, "G"},
      {"stars", stars, "T_2"},
      {"binary trees", binary, "T_omega"}};
  Tally t;
  std::string verdicts;
  for (const auto& [name, samples, expected] : families) {
    auto rep = classify_family(samples, 3, kClassifyBudget, jobs());
    verdicts += (verdicts.empty() ? "" : ", ") + name + " " + rep.verdict;
    t.expect(samples.size() >= 3 && rep.verdict == expected, name + " gave " + rep.verdict + ", expected " + expected);
  }
  auto o = t.outcome("families");
  o.detail += " (" + verdicts + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "1-sparsity of incidence structures", 10, sparsity},
      {2, "incidence roundtrip", 5, incidence_roundtrip},
      {3, "comorphism law", 300, comorphism},
      {4, "composition closure", 300, composition},
      {5, "union compositionality", 120, union_compositionality},
      {6, "width oracle consistency", 600, width_oracles},
      {7, "width inequalities", 600, width_inequalities},
      {8, "strictness pipeline", 120, strictness},
      {9, "DFS decomposition bounds", 60, dfs_bounds},
      {10, "height reduction", 60, height_reduction},
      {11, "partition conversion", 60, partition_conversion},
      {12, "encoding roundtrips", 300, encodings},
      {13, "counting bounds", 1, counting},
      {14, "classifier sanity", 300, classifier}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs <= c.limit_seconds;
    bool pass = o.ok && in_time;
    failed += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, c.limit_seconds);
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << timing
              << (in_time ? "" : ", over time limit") << "]  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
