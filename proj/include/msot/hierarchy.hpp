#pragma once

// The counting function B(n, k, c), sample-based placement of graph families
// on the hierarchy, and checking C ⊆ τ(K) on finite samples.

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "msot/decomposition.hpp"
#include "msot/error.hpp"
#include "msot/graph.hpp"
#include "msot/parallel.hpp"
#include "msot/structure.hpp"
#include "msot/transduction.hpp"
#include "msot/tree.hpp"

namespace msot {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr long kCountExponentBudget = 1L << 22;

struct CountResult {
  BigInt value;
  BigInt lower, upper;  // 2^{c k^{n-1}} and k · 2^{2 c k^{n-1}}
  bool bounds_apply = false;
  bool bounds_hold = false;
};

/// |[m]^{<n}| = 1 + m + ... + m^{n-1}.
inline BigInt complete_tree_size(long m, long n) {
  BigInt s = 0, p = 1;
  for (long i = 0; i < n; ++i) {
    s += p;
    p *= m;
  }
  return s;
}

inline BigInt pow2(const BigInt& e) {
  if (e > kCountExponentBudget) throw BudgetError("exponent exceeds the big-integer budget");
  return BigInt(1) << static_cast<unsigned>(e);
}

/// B(n, k, c) = 2^{cn} + Σ_{m=2}^{k} 2^{c · |[m]^{<n}|}.
inline CountResult count_B(long n, long k, long c) {
  if (n < 0 || k < 1 || c < 0) throw ArgumentError("count_B requires n >= 0, k >= 1, c >= 0");
  CountResult r;
  r.value = pow2(BigInt(c) * n);
  for (long m = 2; m <= k; ++m) r.value += pow2(BigInt(c) * complete_tree_size(m, n));
  r.bounds_apply = n >= 1 && k >= 2;
  if (r.bounds_apply) {
    BigInt e = BigInt(c) * boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(n - 1));
    r.lower = pow2(e);
    r.upper = k * pow2(2 * e);
    r.bounds_hold = r.lower <= r.value && r.value <= r.upper;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Classification

inline constexpr int kClassifyBudget = 16;

struct SampleEvidence {
  int index = 0;
  int vertices = 0;
  bool skipped = false;
  std::string skip_reason;
  int twd = -1, pwd = -1;
  std::vector<int> twd_n;  // twd_1 .. twd_N
  int longest_path = 0;
  /// Largest h with 2^{<h} embedded in the sample rooted somewhere; -1 if not a tree.
  int binary_embedding = -1;
  /// Largest k <= 3 with the k×k grid as a minor; -1 when too large to test.
  int grid_minor = -1;
};

struct EvidenceReport {
  std::vector<SampleEvidence> samples;
  int max_depth = 0;
  std::vector<bool> twd_n_bounded;
  bool pwd_bounded = false, twd_bounded = false;
  /// "T_n", "P", "T_omega" or "G": the least canonical class consistent with the samples.
  std::string verdict;
  std::string note = "finite-sample evidence, not proof";
};

/// Bounded iff the later half of the samples never exceeds the maximum of the earlier half.
inline bool trend_bounded(const std::vector<int>& values) {
  if (values.size() < 2) return true;
  std::size_t split = (values.size() + 1) / 2;
  int early = *std::max_element(values.begin(), values.begin() + static_cast<long>(split));
  int late = *std::max_element(values.begin() + static_cast<long>(split), values.end());
  return late <= early;
}

inline bool is_tree_graph(const Structure& g) {
  return is_graph(g) && g.size() > 0 && is_connected(adjacency(g), full_mask(g.size())) &&
         static_cast<int>(edge_list(g).size()) == g.size() - 1;
}

/// Largest h such that 2^{<h} order-embeds into g rooted at some vertex.
inline int binary_embedding_height(const Structure& g) {
  auto adj = adjacency(g);
  int best = 0;
  for (int r = 0; r < g.size(); ++r) {
    std::set<Path> nodes;
    std::function<void(int, int, Path)> walk = [&](int v, int from, Path p) {
      nodes.insert(p);
      int d = 0;
      for (Mask m = adj[static_cast<std::size_t>(v)]; m; m &= m - 1) {
        int w = std::countr_zero(m);
        if (w == from) continue;
        Path q = p;
        q.push_back(d++);
        walk(w, v, q);
      }
    };
    walk(r, -1, {});
    best = std::max(best, complete_embedding_height(TreeDomain(std::move(nodes)), 2));
  }
  return best;
}

inline SampleEvidence sample_evidence(const Structure& g, int index, int max_depth, int budget = kClassifyBudget) {
  SampleEvidence ev;
  ev.index = index;
  ev.vertices = g.size();
  if (g.size() > budget) {
    ev.skipped = true;
    ev.skip_reason = std::to_string(g.size()) + " vertices exceed budget " + std::to_string(budget);
    return ev;
  }
  ev.twd = exact_width(g, WidthMode::Tree, 0, budget).width;
  ev.pwd = exact_width(g, WidthMode::Path, 0, budget).width;
  for (int n = 1; n <= max_depth; ++n) ev.twd_n.push_back(exact_width(g, WidthMode::Depth, n, budget).width);
  ev.longest_path = longest_path_vertices(g);
  if (is_tree_graph(g)) ev.binary_embedding = binary_embedding_height(g);
  if (is_graph(g) && g.size() <= 10) {
    ev.grid_minor = 1;
    for (int k = 2; k <= 3; ++k)
      if (g.size() >= k * k && is_minor(grid_graph(k, k), g, 10).is_minor) ev.grid_minor = k;
  }
  return ev;
}

inline EvidenceReport classify_family(const std::vector<Structure>& samples, int max_depth = 3,
                                      int budget = kClassifyBudget, int jobs = 1) {
  EvidenceReport rep;
  rep.max_depth = max_depth;
  std::vector<int> idx(samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  rep.samples = parallel_map(
      idx, [&](int i) { return sample_evidence(samples[static_cast<std::size_t>(i)], i, max_depth, budget); }, jobs);
  std::vector<const SampleEvidence*> used;
  for (const auto& s : rep.samples)
    if (!s.skipped) used.push_back(&s);
  auto series = [&](auto get) {
    std::vector<int> v;
    for (const auto* s : used) v.push_back(get(*s));
    return v;
  };
  for (int n = 1; n <= max_depth; ++n)
    rep.twd_n_bounded.push_back(trend_bounded(series([&](const SampleEvidence& s) { return s.twd_n[static_cast<std::size_t>(n - 1)]; })));
  rep.pwd_bounded = trend_bounded(series([](const SampleEvidence& s) { return s.pwd; }));
  rep.twd_bounded = trend_bounded(series([](const SampleEvidence& s) { return s.twd; }));
  for (int n = 1; n <= max_depth && rep.verdict.empty(); ++n)
    if (rep.twd_n_bounded[static_cast<std::size_t>(n - 1)]) rep.verdict = "T_" + std::to_string(n);
  if (rep.verdict.empty()) rep.verdict = rep.pwd_bounded ? "P" : rep.twd_bounded ? "T_omega" : "G";
  return rep;
}

// ---------------------------------------------------------------------------
// Reductions on samples

struct ReductionResult {
  bool holds = false;
  /// For each C-sample: (K-sample index, output index) of an isomorphic image.
  std::vector<std::optional<std::pair<int, int>>> matching;
};

using ImageFunction = std::function<std::vector<Structure>(const Structure&)>;

/// `images[i]` holds the outputs on the i-th K-sample.
inline ReductionResult verify_reduction(const std::vector<Structure>& cs,
                                        const std::vector<std::vector<Structure>>& images) {
  ReductionResult res;
  res.holds = true;
  for (const auto& c : cs) {
    std::optional<std::pair<int, int>> hit;
    for (std::size_t i = 0; i < images.size() && !hit; ++i)
      for (std::size_t j = 0; j < images[i].size() && !hit; ++j)
        if (images[i][j].size() == c.size() && are_isomorphic(images[i][j], c))
          hit = std::pair{static_cast<int>(i), static_cast<int>(j)};
    res.holds = res.holds && hit.has_value();
    res.matching.push_back(hit);
  }
  return res;
}

inline ReductionResult verify_reduction(const std::vector<Structure>& cs, const ImageFunction& image,
                                        const std::vector<Structure>& ks) {
  std::vector<std::vector<Structure>> images;
  for (const auto& k : ks) images.push_back(image(k));
  return verify_reduction(cs, images);
}

inline ReductionResult verify_reduction(const std::vector<Structure>& cs, const Transduction& t,
                                        const std::vector<Structure>& ks, ApplyOptions opt = {}) {
  return verify_reduction(cs, [&](const Structure& k) { return apply(t, k, opt); }, ks);
}

}  // namespace msot
