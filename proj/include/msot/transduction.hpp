#pragma once

// MSO transductions: parameter expansion, k-fold copying, basic definition
// schemes, many-valued application, backwards translation of sentences and
// symbolic composition.
//
// Scheme formulas are written over the enriched input signature: the base
// input signature, plus `sim` and `copy0`..`copy{k-1}` when k > 1, plus
// `param0`..`param{p-1}`. The domain formula has free variable x0 and the
// formula for an output symbol of arity r has free variables x0..x{r-1}; all
// of them denote single elements.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msot/error.hpp"
#include "msot/logic.hpp"
#include "msot/structure.hpp"

namespace msot {

inline constexpr const char* kSim = "sim";
inline std::string copy_predicate(int i) { return "copy" + std::to_string(i); }
inline std::string param_predicate(int j) { return "param" + std::to_string(j); }
inline std::string slot_variable(int i) { return "x" + std::to_string(i); }
inline std::string copy_element(const std::string& a, int i) { return a + "#" + std::to_string(i); }

inline std::vector<std::string> slot_variables(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(slot_variable(i));
  return out;
}

struct SchemeRelation {
  std::string symbol;
  int arity = 1;
  Formula phi;
};

struct DefinitionScheme {
  Formula chi = fm::top();
  Formula delta = fm::top();
  std::vector<SchemeRelation> relations;

  Signature output_signature() const {
    Signature sig;
    for (const auto& r : relations) sig.add(r.symbol, r.arity);
    return sig;
  }
};

/// Enriched signature seen by scheme formulas.
inline Signature enriched_signature(const Signature& base, int k, int p) {
  Signature sig;
  for (const auto& s : base.symbols()) sig.add(s.name, s.arity);
  auto reserve = [&](const std::string& n, int ar) {
    if (base.contains(n)) throw SignatureError("input symbol '" + n + "' collides with a reserved name");
    sig.add(n, ar);
  };
  if (k > 1) {
    reserve(kSim, 2);
    for (int i = 0; i < k; ++i) reserve(copy_predicate(i), 1);
  }
  for (int j = 0; j < p; ++j) reserve(param_predicate(j), 1);
  return sig;
}

struct Transduction {
  std::string name;
  Signature input;
  int k = 1;
  int p = 0;
  DefinitionScheme scheme;

  Signature output() const { return scheme.output_signature(); }
  Signature enriched() const { return enriched_signature(input, k, p); }

  /// Checks arities, symbol usage and free variables of every formula.
  void validate() const {
    if (k < 1) throw ArgumentError("copy count must be >= 1");
    if (p < 0) throw ArgumentError("parameter count must be >= 0");
    Signature sig = enriched();
    auto check = [&](const Formula& f, int slots, const std::string& what) {
      for (const auto& r : relation_symbols(f))
        if (!sig.contains(r)) throw SignatureError(what + " uses symbol '" + r + "' outside the enriched signature");
      auto free = free_vars(f);
      auto allowed = slot_variables(slots);
      for (const auto& v : free)
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
          throw ScopeError(what + " has unexpected free variable '" + v + "'");
      PreparedFormula(f, sig, allowed);
    };
    check(scheme.chi, 0, "chi");
    check(scheme.delta, 1, "delta");
    std::set<std::string> seen;
    for (const auto& r : scheme.relations) {
      if (!seen.insert(r.symbol).second) throw SignatureError("output symbol '" + r.symbol + "' defined twice");
      check(r.phi, r.arity, "formula for '" + r.symbol + "'");
    }
  }
};

// ---------------------------------------------------------------------------
// copy / exp / basic

/// k disjoint copies named a#i, with sim and copy_i; k = 1 returns a itself.
inline Structure copy_structure(const Structure& a, int k) {
  if (k < 1) throw ArgumentError("copy count must be >= 1");
  if (k == 1) return a;
  if (a.signature().contains(kSim)) throw SignatureError("structure already uses reserved symbol 'sim'");
  for (int i = 0; i < k; ++i)
    if (a.signature().contains(copy_predicate(i)))
      throw SignatureError("structure already uses reserved symbol '" + copy_predicate(i) + "'");
  Signature sig;
  for (const auto& s : a.signature().symbols()) sig.add(s.name, s.arity);
  sig.add(kSim, 2);
  for (int i = 0; i < k; ++i) sig.add(copy_predicate(i), 1);
  std::vector<std::string> dom;
  for (const auto& d : a.domain())
    for (int i = 0; i < k; ++i) dom.push_back(copy_element(d, i));
  std::map<std::string, std::vector<NamedTuple>> rels;
  for (const auto& [r, ts] : a.relations()) {
    auto& v = rels[r];
    for (const auto& t : ts)
      for (int i = 0; i < k; ++i) {
        NamedTuple nt;
        for (auto e : t) nt.push_back(copy_element(a.name(e), i));
        v.push_back(std::move(nt));
      }
  }
  for (const auto& d : a.domain())
    for (int i = 0; i < k; ++i) {
      rels[copy_predicate(i)].push_back({copy_element(d, i)});
      for (int j = 0; j < k; ++j) rels[kSim].push_back({copy_element(d, i), copy_element(d, j)});
    }
  return Structure(sig, dom, rels);
}

inline constexpr int kExpansionBudget = 20;

/// Number of expansions by p unary predicates.
inline std::uint64_t expansion_count(const Structure& a, int p, int budget = kExpansionBudget) {
  if (p < 0) throw ArgumentError("parameter count must be >= 0");
  if (static_cast<long>(p) * a.size() > budget)
    throw BudgetError("expansions: p·|A| = " + std::to_string(p * a.size()) + " exceeds budget " + std::to_string(budget));
  return std::uint64_t{1} << (p * a.size());
}

/// The index-th expansion: bit j·|A| + a of `index` puts element a into param_j.
inline Structure expansion(const Structure& a, int p, std::uint64_t index) {
  Structure out = a;
  const int n = a.size();
  for (int j = 0; j < p; ++j) {
    if (a.signature().contains(param_predicate(j)))
      throw SignatureError("structure already uses reserved symbol '" + param_predicate(j) + "'");
    out = out.with_unary(param_predicate(j), (index >> (j * n)) & full_mask(n));
  }
  return out;
}

inline std::vector<Structure> expansions(const Structure& a, int p, int budget = kExpansionBudget) {
  std::vector<Structure> out;
  const auto count = expansion_count(a, p, budget);
  for (std::uint64_t t = 0; t < count; ++t) out.push_back(expansion(a, p, t));
  return out;
}

/// Compiled scheme, reusable over structures of one signature.
class PreparedScheme {
 public:
  PreparedScheme(const DefinitionScheme& s, const Signature& input)
      : scheme_(s),
        chi_(s.chi, input, {}),
        delta_(s.delta, input, {slot_variable(0)}) {
    for (const auto& r : s.relations) phis_.emplace_back(r.phi, input, slot_variables(r.arity));
  }

  std::optional<Structure> apply(const Structure& b, double budget = kDefaultEvalBudget) const {
    Evaluator ev(b, budget);
    if (!ev.run(chi_, {})) return std::nullopt;
    std::vector<Element> dom;
    for (int e = 0; e < b.size(); ++e)
      if (ev.run(delta_, {bit(e)})) dom.push_back(e);
    std::vector<std::string> names;
    for (auto e : dom) names.push_back(b.name(e));
    std::map<std::string, std::set<Tuple>> rels;
    for (std::size_t r = 0; r < scheme_.relations.size(); ++r) {
      const int ar = scheme_.relations[r].arity;
      auto& out = rels[scheme_.relations[r].symbol];
      if (dom.empty()) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
      std::vector<Mask> args(static_cast<std::size_t>(ar));
      for (;;) {
        Tuple t;
        for (int i = 0; i < ar; ++i) {
          args[static_cast<std::size_t>(i)] = bit(dom[idx[static_cast<std::size_t>(i)]]);
          t.push_back(static_cast<Element>(idx[static_cast<std::size_t>(i)]));
        }
        if (ev.run(phis_[r], args)) out.insert(std::move(t));
        int q = ar - 1;
        while (q >= 0 && ++idx[static_cast<std::size_t>(q)] == dom.size()) idx[static_cast<std::size_t>(q--)] = 0;
        if (q < 0) break;
      }
    }
    return Structure::from_indices(scheme_.output_signature(), std::move(names), std::move(rels));
  }

 private:
  const DefinitionScheme& scheme_;
  PreparedFormula chi_;
  PreparedFormula delta_;
  std::vector<PreparedFormula> phis_;
};

/// Basic transduction: undefined (nullopt) unless b satisfies chi.
inline std::optional<Structure> apply_basic(const DefinitionScheme& s, const Structure& b) {
  return PreparedScheme(s, b.signature()).apply(b);
}

struct ApplyOptions {
  int expansion_budget = kExpansionBudget;
  bool dedupe_isomorphic = false;
};

/// All outputs, in expansion order, skipping undefined values.
inline std::vector<Structure> apply(const Transduction& t, const Structure& a, const ApplyOptions& opt = {}) {
  if (!(a.signature() == t.input)) throw SignatureError("structure does not match the transduction's input signature");
  const auto count = expansion_count(a, t.p, opt.expansion_budget);
  std::optional<PreparedScheme> prepared;
  std::vector<Structure> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    Structure b = copy_structure(expansion(a, t.p, i), t.k);
    if (!prepared) prepared.emplace(t.scheme, b.signature());
    auto c = prepared->apply(b);
    if (!c) continue;
    if (opt.dedupe_isomorphic) {
      bool dup = false;
      for (const auto& o : out)
        if (are_isomorphic(o, *c)) { dup = true; break; }
      if (dup) continue;
    }
    out.push_back(std::move(*c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Backwards translation

namespace detail {

/// Generates bound-variable names that avoid a fixed set.
class NameSupply {
 public:
  explicit NameSupply(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}
  std::string fresh(const std::string& base) {
    auto n = fresh_name(base, avoid_);
    avoid_.insert(n);
    return n;
  }
  void reserve(const std::set<std::string>& names) { avoid_.insert(names.begin(), names.end()); }

 private:
  std::set<std::string> avoid_;
};

inline bool is_true(const Formula& f) { return f.op == Op::And && f.kids.empty(); }

inline bool singleton_exists(const Formula& f) {
  return f.op == Op::Exists && f.kids[0].op == Op::And && !f.kids[0].kids.empty() && f.kids[0].kids[0].op == Op::Sing &&
         f.kids[0].kids[0].vars[0] == f.name;
}
inline bool singleton_forall(const Formula& f) {
  const Formula& b = f.kids[0];
  return f.op == Op::Forall && b.op == Op::Or && !b.kids.empty() && b.kids[0].op == Op::Not &&
         b.kids[0].kids[0].op == Op::Sing && b.kids[0].kids[0].vars[0] == f.name;
}
/// Body of a singleton-guarded quantifier without its guard.
inline std::vector<Formula> guarded_rest(const Formula& f) {
  const auto& kids = f.kids[0].kids;
  return std::vector<Formula>(kids.begin() + 1, kids.end());
}

/// Replaces output-signature atoms by their defining formulas and relativizes
/// quantifiers to the domain formula.
class InterpretBack {
 public:
  InterpretBack(const DefinitionScheme& s, std::set<std::string> passthrough, NameSupply& names)
      : passthrough_(std::move(passthrough)), names_(names) {
    delta_ = desugar(s.delta, {slot_variable(0)});
    delta_trivial_ = is_true(simplify(delta_));
    for (const auto& r : s.relations) defs_[r.symbol] = {r.arity, desugar(r.phi, [&] {
                                                             auto v = slot_variables(r.arity);
                                                             return std::set<std::string>(v.begin(), v.end());
                                                           }())};
    for (const auto& [_, d] : defs_) names_.reserve(all_vars(d.second));
    names_.reserve(all_vars(delta_));
  }

  Formula operator()(const Formula& f, std::set<std::string> singles) { return rec(f, singles); }

 private:
  Formula delta_at(const std::string& v) { return rename_free(delta_, {{slot_variable(0), v}}); }

  Formula domain_constraint(const std::string& x) {
    auto z = names_.fresh("_d");
    return fm::forall(z, fm::disj({fm::neg(fm::sing(z)), fm::neg(fm::sub(z, x)), delta_at(z)}));
  }

  Formula rec(const Formula& f, std::set<std::string>& singles) {
    if (singleton_exists(f) || singleton_forall(f)) {
      bool added = singles.insert(f.name).second;
      std::vector<Formula> rest;
      for (const auto& g : guarded_rest(f)) rest.push_back(rec(g, singles));
      if (added) singles.erase(f.name);
      if (f.op == Op::Exists) {
        std::vector<Formula> body{fm::sing(f.name)};
        if (!delta_trivial_) body.push_back(delta_at(f.name));
        for (auto& g : rest) body.push_back(std::move(g));
        return fm::exists(f.name, fm::conj(std::move(body)));
      }
      std::vector<Formula> body{fm::neg(fm::sing(f.name))};
      if (!delta_trivial_) body.push_back(fm::neg(delta_at(f.name)));
      for (auto& g : rest) body.push_back(std::move(g));
      return fm::forall(f.name, fm::disj(std::move(body)));
    }
    if (f.op == Op::Exists || f.op == Op::Forall) {
      bool removed = singles.erase(f.name) > 0;
      Formula body = rec(f.kids[0], singles);
      if (removed) singles.insert(f.name);
      if (delta_trivial_) return {f.op, f.name, {}, 0, 1, {std::move(body)}};
      if (f.op == Op::Exists) return fm::exists(f.name, fm::conj({domain_constraint(f.name), std::move(body)}));
      return fm::forall(f.name, fm::disj({fm::neg(domain_constraint(f.name)), std::move(body)}));
    }
    if (f.op == Op::Rel) {
      if (passthrough_.count(f.name)) return f;
      auto it = defs_.find(f.name);
      if (it == defs_.end()) throw SignatureError("symbol '" + f.name + "' is not defined by the scheme");
      if (static_cast<int>(f.vars.size()) != it->second.first)
        throw SignatureError("symbol '" + f.name + "' used with wrong arity");
      const Formula& def = it->second.second;
      if (def.op == Op::Rel && def.vars == slot_variables(it->second.first))
        return Formula{Op::Rel, def.name, f.vars, 0, 1, {}};
      std::map<std::string, std::string> sub;
      std::vector<std::pair<std::string, std::string>> witnesses;
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        std::string target = f.vars[i];
        if (!singles.count(target)) {
          target = names_.fresh("_w");
          witnesses.push_back({target, f.vars[i]});
        }
        sub[slot_variable(static_cast<int>(i))] = target;
      }
      Formula body = rename_free(it->second.second, sub);
      for (auto w = witnesses.rbegin(); w != witnesses.rend(); ++w)
        body = fm::exists(w->first, fm::conj({fm::sing(w->first), fm::sub(w->first, w->second), std::move(body)}));
      return body;
    }
    if (is_atom(f.op)) return f;
    Formula out = f;
    for (auto& k : out.kids) k = rec(k, singles);
    return out;
  }

  std::set<std::string> passthrough_;
  NameSupply& names_;
  Formula delta_;
  bool delta_trivial_ = false;
  std::map<std::string, std::pair<int, Formula>> defs_;
};

/// Rewrites a formula about copy_k(B) into one about B. A copy-level set
/// variable X becomes X^0..X^{k-1}; a copy-level singleton becomes one
/// B-level singleton together with a known copy index.
class Uncopy {
 public:
  struct Var {
    bool single = false;
    int copy = 0;
    std::vector<std::string> names;  // one name if single
  };
  using Env = std::map<std::string, Var>;

  Uncopy(int k, NameSupply& names) : k_(k), names_(names) {}

  /// Unary predicate that holds on copy i of a iff `targets[i]` holds on a.
  void split(const std::string& pred, std::vector<std::string> targets) { split_[pred] = std::move(targets); }
  /// Unary predicate replaced by membership in a set variable (all copies).
  void as_variable(const std::string& pred, const std::string& var) { vars_[pred] = var; }

  Formula operator()(const Formula& f, Env env) { return rec(f, env); }

 private:
  const Var& lookup(const Env& env, const std::string& v) const {
    auto it = env.find(v);
    if (it == env.end()) throw ScopeError("unbound variable '" + v + "'");
    return it->second;
  }

  /// Formula for "the copy-i slice of variable v", as (possibly absent) name.
  std::optional<std::string> slice(const Var& v, int i) const {
    if (v.single) return v.copy == i ? std::optional<std::string>(v.names[0]) : std::nullopt;
    return v.names[static_cast<std::size_t>(i)];
  }

  Formula nonempty_meet(const std::string& a, const std::string& b) {
    auto w = names_.fresh("_w");
    return fm::exists(w, fm::conj({fm::sing(w), fm::sub(w, a), fm::sub(w, b)}));
  }

  Formula atom(const Formula& f, const Env& env) {
    switch (f.op) {
      case Op::Sub: {
        const Var& x = lookup(env, f.vars[0]);
        const Var& y = lookup(env, f.vars[1]);
        std::vector<Formula> parts;
        for (int i = 0; i < k_; ++i) {
          auto xi = slice(x, i), yi = slice(y, i);
          if (!xi) continue;
          if (!yi) parts.push_back(x.single ? fm::bottom() : fm::empty(*xi));
          else parts.push_back(fm::sub(*xi, *yi));
        }
        return fm::conj(std::move(parts));
      }
      case Op::Sing: {
        const Var& x = lookup(env, f.vars[0]);
        if (x.single) return fm::top();
        std::vector<Formula> alts;
        for (int i = 0; i < k_; ++i) {
          std::vector<Formula> c{fm::sing(x.names[static_cast<std::size_t>(i)])};
          for (int l = 0; l < k_; ++l)
            if (l != i) c.push_back(fm::empty(x.names[static_cast<std::size_t>(l)]));
          alts.push_back(fm::conj(std::move(c)));
        }
        return fm::disj(std::move(alts));
      }
      case Op::Empty: {
        const Var& x = lookup(env, f.vars[0]);
        if (x.single) return fm::bottom();
        std::vector<Formula> c;
        for (const auto& n : x.names) c.push_back(fm::empty(n));
        return fm::conj(std::move(c));
      }
      case Op::Card: {
        const Var& x = lookup(env, f.vars[0]);
        if (x.single) return 1 % f.m == f.k ? fm::top() : fm::bottom();
        std::vector<Formula> alts;
        std::vector<int> r(static_cast<std::size_t>(k_), 0);
        for (;;) {
          int sum = 0;
          for (int v : r) sum += v;
          if (sum % f.m == f.k) {
            std::vector<Formula> c;
            for (int i = 0; i < k_; ++i) c.push_back(fm::card(x.names[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i)], f.m));
            alts.push_back(fm::conj(std::move(c)));
          }
          int q = k_ - 1;
          while (q >= 0 && ++r[static_cast<std::size_t>(q)] == f.m) r[static_cast<std::size_t>(q--)] = 0;
          if (q < 0) break;
        }
        return fm::disj(std::move(alts));
      }
      case Op::Rel: return relation(f, env);
      default: throw ArgumentError("unexpected sugar while removing copies");
    }
  }

  Formula relation(const Formula& f, const Env& env) {
    if (k_ > 1 && f.name == kSim) {
      const Var& x = lookup(env, f.vars[0]);
      const Var& y = lookup(env, f.vars[1]);
      if (x.single && y.single) return fm::sub(x.names[0], y.names[0]);
      if (x.single || y.single) {
        const Var& s = x.single ? x : y;
        const Var& m = x.single ? y : x;
        std::vector<Formula> alts;
        for (const auto& n : m.names) alts.push_back(fm::sub(s.names[0], n));
        return fm::disj(std::move(alts));
      }
      auto w = names_.fresh("_w");
      std::vector<Formula> in_x, in_y;
      for (const auto& n : x.names) in_x.push_back(fm::sub(w, n));
      for (const auto& n : y.names) in_y.push_back(fm::sub(w, n));
      return fm::exists(w, fm::conj({fm::sing(w), fm::disj(std::move(in_x)), fm::disj(std::move(in_y))}));
    }
    if (k_ > 1) {
      for (int i = 0; i < k_; ++i)
        if (f.name == copy_predicate(i)) {
          const Var& x = lookup(env, f.vars[0]);
          if (x.single) return x.copy == i ? fm::top() : fm::bottom();
          return fm::neg(fm::empty(x.names[static_cast<std::size_t>(i)]));
        }
    }
    if (auto it = vars_.find(f.name); it != vars_.end()) {
      const Var& x = lookup(env, f.vars[0]);
      if (x.single) return fm::sub(x.names[0], it->second);
      std::vector<Formula> alts;
      for (const auto& n : x.names) alts.push_back(nonempty_meet(n, it->second));
      return fm::disj(std::move(alts));
    }
    std::vector<Formula> alts;
    for (int i = 0; i < k_; ++i) {
      std::vector<std::string> args;
      bool possible = true;
      for (const auto& v : f.vars) {
        auto s = slice(lookup(env, v), i);
        if (!s) { possible = false; break; }
        args.push_back(*s);
      }
      if (!possible) continue;
      std::string name = f.name;
      if (auto it = split_.find(f.name); it != split_.end()) name = it->second[static_cast<std::size_t>(i)];
      alts.push_back(fm::rel(name, std::move(args)));
    }
    return fm::disj(std::move(alts));
  }

  Formula rec(const Formula& f, Env& env) {
    if (singleton_exists(f) || singleton_forall(f)) {
      auto saved = env.find(f.name) != env.end() ? std::optional<Var>(env[f.name]) : std::nullopt;
      std::vector<Formula> per_copy;
      for (int i = 0; i < k_; ++i) {
        env[f.name] = Var{true, i, {f.name}};
        std::vector<Formula> rest;
        for (const auto& g : guarded_rest(f)) rest.push_back(rec(g, env));
        per_copy.push_back(f.op == Op::Exists ? fm::conj(std::move(rest)) : fm::disj(std::move(rest)));
      }
      restore(env, f.name, saved);
      if (f.op == Op::Exists)
        return fm::exists(f.name, fm::conj({fm::sing(f.name), fm::disj(std::move(per_copy))}));
      return fm::forall(f.name, fm::disj({fm::neg(fm::sing(f.name)), fm::conj(std::move(per_copy))}));
    }
    if (f.op == Op::Exists || f.op == Op::Forall) {
      auto saved = env.find(f.name) != env.end() ? std::optional<Var>(env[f.name]) : std::nullopt;
      Var v;
      if (k_ == 1) {
        v.names = {f.name};
      } else {
        for (int i = 0; i < k_; ++i) v.names.push_back(names_.fresh(f.name + "^" + std::to_string(i)));
      }
      env[f.name] = v;
      Formula body = rec(f.kids[0], env);
      restore(env, f.name, saved);
      for (auto it = v.names.rbegin(); it != v.names.rend(); ++it) body = {f.op, *it, {}, 0, 1, {std::move(body)}};
      return body;
    }
    if (is_atom(f.op)) return atom(f, env);
    Formula out = f;
    for (auto& k : out.kids) k = rec(k, env);
    return out;
  }

  static void restore(Env& env, const std::string& name, const std::optional<Var>& saved) {
    if (saved) env[name] = *saved;
    else env.erase(name);
  }

  int k_;
  NameSupply& names_;
  std::map<std::string, std::vector<std::string>> split_;
  std::map<std::string, std::string> vars_;
};

}  // namespace detail

/// Sentence over the input signature that holds in A iff some output of t on A
/// satisfies phi.
inline Formula backwards(const Transduction& t, const Formula& phi) {
  Formula sentence = desugar(phi);
  for (const auto& r : relation_symbols(sentence))
    if (!t.output().contains(r)) throw SignatureError("sentence uses symbol '" + r + "' outside the output signature");
  std::set<std::string> avoid = all_vars(sentence);
  for (const auto& r : t.scheme.relations) {
    auto v = all_vars(r.phi);
    avoid.insert(v.begin(), v.end());
  }
  for (const auto* f : {&t.scheme.chi, &t.scheme.delta}) {
    auto v = all_vars(*f);
    avoid.insert(v.begin(), v.end());
  }
  detail::NameSupply names(avoid);
  detail::InterpretBack back(t.scheme, {}, names);
  Formula copy_level = fm::conj({desugar(t.scheme.chi), back(sentence, {})});
  detail::Uncopy uncopy(t.k, names);
  std::vector<std::string> params;
  for (int j = 0; j < t.p; ++j) {
    params.push_back(names.fresh("Q" + std::to_string(j)));
    uncopy.as_variable(param_predicate(j), params.back());
  }
  Formula out = uncopy(copy_level, {});
  for (auto it = params.rbegin(); it != params.rend(); ++it) out = fm::exists(*it, std::move(out));
  return simplify(out);
}

// ---------------------------------------------------------------------------
// Composition

/// The transduction applying tau first and sigma to each of its outputs.
///
/// Normal form: exp then copy then basic. Copy c = i·k_sigma + j of the result
/// stands for copy j (of sigma) of copy i (of tau). Parameters 0..p_tau-1 are
/// tau's; sigma's parameter q restricted to tau-copy i is parameter
/// p_tau + q·k_tau + i. Scheme formulas evaluate the translated conditions on
/// the copy-0 layer, reached from an element through sim.
inline Transduction compose(const Transduction& sigma, const Transduction& tau) {
  if (!(sigma.input == tau.output()))
    throw SignatureError("compose: sigma's input signature differs from tau's output signature");
  Transduction rho;
  rho.name = sigma.name + "∘" + tau.name;
  rho.input = tau.input;
  rho.k = tau.k * sigma.k;
  rho.p = tau.p + sigma.p * tau.k;

  std::set<std::string> avoid;
  auto reserve = [&](const Formula& f) {
    auto v = all_vars(f);
    avoid.insert(v.begin(), v.end());
  };
  for (const auto* t : {&sigma, &tau}) {
    reserve(t->scheme.chi);
    reserve(t->scheme.delta);
    for (const auto& r : t->scheme.relations) reserve(r.phi);
  }
  for (const auto& v : slot_variables(8)) avoid.insert(v);
  detail::NameSupply names(avoid);

  std::vector<std::string> sparams;
  for (int q = 0; q < sigma.p; ++q) sparams.push_back("__sparam" + std::to_string(q));

  // sigma copy level -> tau output level (sigma's params become unary predicates)
  auto uncopy_sigma = [&](const Formula& f, const std::vector<std::string>& free, const std::vector<int>& js) {
    detail::Uncopy u(sigma.k, names);
    for (int q = 0; q < sigma.p; ++q) u.split(param_predicate(q), std::vector<std::string>(static_cast<std::size_t>(sigma.k), sparams[static_cast<std::size_t>(q)]));
    detail::Uncopy::Env env;
    for (std::size_t l = 0; l < free.size(); ++l) env[free[l]] = {true, js[l], {free[l]}};
    return u(f, env);
  };
  detail::InterpretBack back(tau.scheme, std::set<std::string>(sparams.begin(), sparams.end()), names);
  // tau copy level -> input level, with rho's parameters as predicates
  auto uncopy_tau = [&](const Formula& f, const std::vector<std::string>& free, const std::vector<int>& is) {
    detail::Uncopy u(tau.k, names);
    for (int q = 0; q < sigma.p; ++q) {
      std::vector<std::string> targets;
      for (int i = 0; i < tau.k; ++i) targets.push_back(param_predicate(tau.p + q * tau.k + i));
      u.split(sparams[static_cast<std::size_t>(q)], targets);
    }
    detail::Uncopy::Env env;
    for (std::size_t l = 0; l < free.size(); ++l) env[free[l]] = {true, is[l], {free[l]}};
    return u(f, env);
  };
  // Full translation of a sigma scheme formula for given copy indices.
  auto translate = [&](const Formula& f, const std::vector<std::string>& free, const std::vector<int>& cs,
                       bool with_tau_domain) {
    std::vector<int> is, js;
    for (int c : cs) {
      is.push_back(c / sigma.k);
      js.push_back(c % sigma.k);
    }
    Formula s = desugar(f, std::set<std::string>(free.begin(), free.end()));
    Formula b_level = uncopy_sigma(s, free, js);
    Formula t_level = back(b_level, std::set<std::string>(free.begin(), free.end()));
    if (with_tau_domain) {
      Formula dt = desugar(tau.scheme.delta, {slot_variable(0)});
      t_level = fm::conj({rename_free(dt, {{slot_variable(0), free[0]}}), std::move(t_level)});
    }
    return uncopy_tau(t_level, free, is);
  };

  // Relativize input-level quantifiers to the copy-0 layer of rho's copies.
  std::function<Formula(const Formula&)> layer0 = [&](const Formula& f) -> Formula {
    if (rho.k == 1) return f;
    if (detail::singleton_exists(f) || detail::singleton_forall(f)) {
      std::vector<Formula> rest;
      for (const auto& g : detail::guarded_rest(f)) rest.push_back(layer0(g));
      if (f.op == Op::Exists) {
        std::vector<Formula> body{fm::sing(f.name), fm::rel(copy_predicate(0), {f.name})};
        for (auto& g : rest) body.push_back(std::move(g));
        return fm::exists(f.name, fm::conj(std::move(body)));
      }
      std::vector<Formula> body{fm::neg(fm::sing(f.name)), fm::neg(fm::rel(copy_predicate(0), {f.name}))};
      for (auto& g : rest) body.push_back(std::move(g));
      return fm::forall(f.name, fm::disj(std::move(body)));
    }
    if (f.op == Op::Exists || f.op == Op::Forall) {
      auto z = names.fresh("_l");
      Formula in_layer = fm::forall(z, fm::disj({fm::neg(fm::sing(z)), fm::neg(fm::sub(z, f.name)),
                                                  fm::rel(copy_predicate(0), {z})}));
      Formula body = layer0(f.kids[0]);
      if (f.op == Op::Exists) return fm::exists(f.name, fm::conj({in_layer, body}));
      return fm::forall(f.name, fm::disj({fm::neg(in_layer), body}));
    }
    if (is_atom(f.op)) return f;
    Formula out = f;
    for (auto& k : out.kids) k = layer0(k);
    return out;
  };
  // Wrap an input-level formula in the free variables (copy indices cs) as a
  // rho copy-level formula.
  auto lift = [&](const Formula& g, const std::vector<std::string>& free, const std::vector<int>& cs) {
    if (rho.k == 1) return g;
    std::map<std::string, std::string> to_layer;
    std::vector<std::string> ys;
    for (const auto& x : free) {
      ys.push_back(names.fresh("_y"));
      to_layer[x] = ys.back();
    }
    Formula body = layer0(rename_free(g, to_layer));
    for (std::size_t l = free.size(); l-- > 0;)
      body = fm::exists(ys[l], fm::conj({fm::sing(ys[l]), fm::rel(copy_predicate(0), {ys[l]}),
                                         fm::rel(kSim, {ys[l], free[l]}), std::move(body)}));
    std::vector<Formula> parts;
    for (std::size_t l = 0; l < free.size(); ++l) parts.push_back(fm::rel(copy_predicate(cs[l]), {free[l]}));
    parts.push_back(std::move(body));
    return fm::conj(std::move(parts));
  };
  auto all_copy_tuples = [&](int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(static_cast<std::size_t>(r), 0);
    for (;;) {
      out.push_back(c);
      int q = r - 1;
      while (q >= 0 && ++c[static_cast<std::size_t>(q)] == rho.k) c[static_cast<std::size_t>(q--)] = 0;
      if (q < 0) break;
    }
    return out;
  };
  auto scheme_formula = [&](const Formula& f, int r, bool with_tau_domain) {
    auto free = slot_variables(r);
    std::vector<Formula> alts;
    for (const auto& cs : all_copy_tuples(r)) alts.push_back(lift(translate(f, free, cs, with_tau_domain), free, cs));
    return simplify(fm::disj(std::move(alts)));
  };

  Formula chi_tau = uncopy_tau(desugar(tau.scheme.chi), {}, {});
  Formula chi_sigma = translate(sigma.scheme.chi, {}, {}, false);
  rho.scheme.chi = simplify(layer0(fm::conj({chi_tau, chi_sigma})));
  rho.scheme.delta = scheme_formula(sigma.scheme.delta, 1, true);
  for (const auto& r : sigma.scheme.relations)
    rho.scheme.relations.push_back({r.symbol, r.arity, scheme_formula(r.phi, r.arity, false)});
  return rho;
}

// ---------------------------------------------------------------------------
// Fixed transductions on graphs

namespace transductions {

inline Transduction identity(const Signature& sig) {
  Transduction t;
  t.name = "identity";
  t.input = sig;
  for (const auto& s : sig.symbols()) t.scheme.relations.push_back({s.name, s.arity, fm::rel(s.name, slot_variables(s.arity))});
  return t;
}

inline Transduction graph_transduction(const std::string& name, int k, int p, const std::string& delta,
                                       const std::string& edge) {
  Transduction t;
  t.name = name;
  t.input = graph_signature();
  t.k = k;
  t.p = p;
  t.scheme.delta = parse_formula(delta);
  t.scheme.relations.push_back({kEdge, 2, parse_formula(edge)});
  return t;
}

/// Edge complement (loop-free).
inline Transduction complement() {
  return graph_transduction("complement", 1, 0, "true", "(and (not (rel edg x0 x1)) (not (eq x0 x1)))");
}

/// Restriction to non-isolated vertices.
inline Transduction non_isolated() {
  return graph_transduction("delta-restriction", 1, 0, "(existsF y (rel edg x0 y))", "(rel edg x0 x1)");
}

/// Two copies of the graph, each vertex of copy 0 joined to its twin in copy 1.
inline Transduction doubler() {
  return graph_transduction("doubler", 2, 0, "true",
                            "(or (rel edg x0 x1) (and (rel sim x0 x1) (not (eq x0 x1))))");
}

/// Adds a clique on a parameter set.
inline Transduction expander() {
  return graph_transduction("expander", 1, 1, "true",
                            "(or (rel edg x0 x1) (and (rel param0 x0) (rel param0 x1) (not (eq x0 x1))))");
}

}  // namespace transductions

}  // namespace msot
