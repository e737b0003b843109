#pragma once

// Rank-m types: the finite objects representing MTh_m(A, params).
//
// A rank-0 type is the vector of truth values of all atoms over the current
// variables (parameters first, then quantified sets in order of
// introduction). A rank-m type is the set of rank-(m-1) types of all
// extensions by one more set variable.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msot/error.hpp"
#include "msot/structure.hpp"

namespace msot {

struct RankType {
  int rank = 0;
  int q = 1;
  std::vector<std::uint8_t> atoms;
  std::vector<RankType> children;

  friend bool operator==(const RankType& a, const RankType& b) {
    return a.rank == b.rank && a.q == b.q && a.atoms == b.atoms && a.children == b.children;
  }
  friend bool operator<(const RankType& a, const RankType& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.q != b.q) return a.q < b.q;
    if (a.atoms != b.atoms) return a.atoms < b.atoms;
    return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
  }
};

/// Number of rank-0 atoms over `vars` variables.
inline long atom_count(const Signature& sig, int vars, int q) {
  long n = static_cast<long>(vars) * (vars - 1) + 2L * vars + static_cast<long>(vars) * std::max(0, q - 1);
  for (const auto& s : sig.symbols()) {
    long p = 1;
    for (int i = 0; i < s.arity; ++i) p *= vars;
    n += p;
  }
  return n;
}

/// Upper bound on the number of distinct rank-h types with `vars` free
/// variables (saturating at 2^63).
inline std::uint64_t type_count_bound(const Signature& sig, int vars, int h, int q) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 63;
  auto pow2 = [&](std::uint64_t e) { return e >= 63 ? cap : std::uint64_t{1} << e; };
  std::uint64_t count = pow2(static_cast<std::uint64_t>(atom_count(sig, vars + h, q)));
  for (int level = 1; level <= h; ++level) count = pow2(count);
  return count;
}

namespace detail {

class TypeComputer {
 public:
  TypeComputer(const Structure& a, int q) : a_(a), q_(q), ids_(1) {
    for (const auto& [name, ts] : a.relations()) {
      std::vector<std::vector<Mask>> rel;
      for (const auto& t : ts) {
        std::vector<Mask> tm;
        for (auto e : t) tm.push_back(bit(e));
        rel.push_back(std::move(tm));
      }
      arity_.push_back(*a.signature().arity_of(name));
      rels_.push_back(std::move(rel));
    }
  }

  int compute(std::vector<Mask>& vars, int m) {
    if (static_cast<int>(ids_.size()) <= m) ids_.resize(static_cast<std::size_t>(m) + 1);
    if (m == 0) return intern(0, atoms(vars));
    std::vector<int> kids;
    const Mask limit = full_mask(a_.size());
    vars.push_back(0);
    for (Mask x = 0;; ++x) {
      vars.back() = x;
      kids.push_back(compute(vars, m - 1));
      if (x == limit) break;
    }
    vars.pop_back();
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    return intern(m, kids);
  }

  RankType materialize(int level, int id) {
    auto key = std::pair{level, id};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    RankType t;
    t.rank = level;
    t.q = q_;
    const auto& k = keys_[static_cast<std::size_t>(level)][static_cast<std::size_t>(id)];
    if (level == 0) {
      t.atoms.assign(k.begin(), k.end());
    } else {
      for (int c : k) t.children.push_back(materialize(level - 1, c));
      std::sort(t.children.begin(), t.children.end());
    }
    cache_.emplace(key, t);
    return t;
  }

 private:
  std::vector<int> atoms(const std::vector<Mask>& vars) const {
    const std::size_t v = vars.size();
    std::vector<int> out;
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < v; ++j)
        if (i != j) out.push_back((vars[i] & ~vars[j]) == 0);
    for (std::size_t i = 0; i < v; ++i) {
      out.push_back(popcount(vars[i]) == 1);
      out.push_back(vars[i] == 0);
      for (int mod = 2; mod <= q_; ++mod) out.push_back(popcount(vars[i]) % mod);
    }
    for (std::size_t r = 0; r < rels_.size(); ++r) {
      const int ar = arity_[r];
      std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
      if (v == 0) continue;
      for (;;) {
        bool holds = false;
        for (const auto& t : rels_[r]) {
          bool ok = true;
          for (int i = 0; i < ar && ok; ++i) ok = (t[static_cast<std::size_t>(i)] & vars[idx[static_cast<std::size_t>(i)]]) != 0;
          if (ok) { holds = true; break; }
        }
        out.push_back(holds);
        int p = ar - 1;
        while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == v) idx[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
      }
    }
    return out;
  }

  int intern(int level, const std::vector<int>& key) {
    if (static_cast<int>(keys_.size()) <= level) keys_.resize(static_cast<std::size_t>(level) + 1);
    auto& table = ids_[static_cast<std::size_t>(level)];
    auto [it, fresh] = table.emplace(key, static_cast<int>(table.size()));
    if (fresh) keys_[static_cast<std::size_t>(level)].push_back(key);
    return it->second;
  }

  const Structure& a_;
  int q_;
  std::vector<int> arity_;
  std::vector<std::vector<std::vector<Mask>>> rels_;
  std::vector<std::map<std::vector<int>, int>> ids_;
  std::vector<std::vector<std::vector<int>>> keys_;
  std::map<std::pair<int, int>, RankType> cache_;
};

}  // namespace detail

/// Default budget: |A| · m <= 24, i.e. at most 2^24 atom evaluations.
inline constexpr int kTypeBudget = 24;

/// Rank-m type of (A, params) with Card moduli up to q (q = 1 is plain MSO).
inline RankType mtype(const Structure& a, const std::vector<Mask>& params, int m, int q = 1,
                      int budget = kTypeBudget) {
  if (m < 0 || q < 1) throw ArgumentError("mtype requires m >= 0 and q >= 1");
  if (a.size() * m > budget)
    throw BudgetError("mtype: |A|·m = " + std::to_string(a.size() * m) + " exceeds budget " + std::to_string(budget));
  for (auto p : params)
    if (p & ~full_mask(a.size())) throw ArgumentError("parameter outside the domain");
  detail::TypeComputer tc(a, q);
  std::vector<Mask> vars = params;
  int id = tc.compute(vars, m);
  return tc.materialize(m, id);
}

inline bool theory_equal(const Structure& a, const Structure& b, int m, int q = 1, int budget = kTypeBudget) {
  if (!(a.signature() == b.signature())) return false;
  return mtype(a, {}, m, q, budget) == mtype(b, {}, m, q, budget);
}

}  // namespace msot
