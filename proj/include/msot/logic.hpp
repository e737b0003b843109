#pragma once

// Restricted set-variable MSO/CMSO: syntax, s-expression parsing and printing,
// desugaring of first-order variables, rank, and brute-force evaluation.
//
// Restricted atoms: (sub X Y) (rel R Z..) (sing X) (empty X) (card X k m).
// Connectives: (not φ) (and φ..) (or φ..); quantifiers (exists X φ) (forall X φ).
// Sugar: (existsF x φ) (forallF x φ) (eq x y) (in x X).

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "msot/error.hpp"
#include "msot/structure.hpp"

namespace msot {

enum class Op { Sub, Rel, Sing, Empty, Card, Not, And, Or, Exists, Forall, ExistsF, ForallF, Eq, In };

struct Formula {
  Op op = Op::And;
  /// Relation symbol (Rel) or bound variable (quantifiers).
  std::string name;
  std::vector<std::string> vars;
  int k = 0;
  int m = 1;
  std::vector<Formula> kids;

  friend bool operator==(const Formula&, const Formula&) = default;
};

namespace fm {

inline Formula sub(std::string x, std::string y) { return {Op::Sub, "", {std::move(x), std::move(y)}, 0, 1, {}}; }
inline Formula rel(std::string r, std::vector<std::string> args) { return {Op::Rel, std::move(r), std::move(args), 0, 1, {}}; }
inline Formula sing(std::string x) { return {Op::Sing, "", {std::move(x)}, 0, 1, {}}; }
inline Formula empty(std::string x) { return {Op::Empty, "", {std::move(x)}, 0, 1, {}}; }
inline Formula card(std::string x, int k, int m) {
  if (m < 1 || k < 0 || k >= m) throw ArgumentError("card requires 0 <= k < m");
  return {Op::Card, "", {std::move(x)}, k, m, {}};
}
inline Formula neg(Formula f) { return {Op::Not, "", {}, 0, 1, {std::move(f)}}; }
inline Formula conj(std::vector<Formula> fs) { return {Op::And, "", {}, 0, 1, std::move(fs)}; }
inline Formula disj(std::vector<Formula> fs) { return {Op::Or, "", {}, 0, 1, std::move(fs)}; }
inline Formula top() { return conj({}); }
inline Formula bottom() { return disj({}); }
inline Formula exists(std::string x, Formula f) { return {Op::Exists, std::move(x), {}, 0, 1, {std::move(f)}}; }
inline Formula forall(std::string x, Formula f) { return {Op::Forall, std::move(x), {}, 0, 1, {std::move(f)}}; }
inline Formula existsF(std::string x, Formula f) { return {Op::ExistsF, std::move(x), {}, 0, 1, {std::move(f)}}; }
inline Formula forallF(std::string x, Formula f) { return {Op::ForallF, std::move(x), {}, 0, 1, {std::move(f)}}; }
inline Formula eq(std::string x, std::string y) { return {Op::Eq, "", {std::move(x), std::move(y)}, 0, 1, {}}; }
inline Formula in(std::string x, std::string set) { return {Op::In, "", {std::move(x), std::move(set)}, 0, 1, {}}; }
inline Formula implies(Formula a, Formula b) { return disj({neg(std::move(a)), std::move(b)}); }
inline Formula iff(Formula a, Formula b) {
  return conj({implies(a, b), implies(b, a)});
}

}  // namespace fm

inline bool is_quantifier(Op op) { return op == Op::Exists || op == Op::Forall || op == Op::ExistsF || op == Op::ForallF; }
inline bool is_atom(Op op) {
  return op == Op::Sub || op == Op::Rel || op == Op::Sing || op == Op::Empty || op == Op::Card || op == Op::Eq ||
         op == Op::In;
}

// ---------------------------------------------------------------------------
// Printing and parsing

inline void print_to(std::ostream& os, const Formula& f) {
  auto list = [&](const char* head) {
    os << '(' << head;
    for (const auto& v : f.vars) os << ' ' << v;
    os << ')';
  };
  switch (f.op) {
    case Op::Sub: list("sub"); return;
    case Op::Sing: list("sing"); return;
    case Op::Empty: list("empty"); return;
    case Op::Eq: list("eq"); return;
    case Op::In: list("in"); return;
    case Op::Card: os << "(card " << f.vars[0] << ' ' << f.k << ' ' << f.m << ')'; return;
    case Op::Rel:
      os << "(rel " << f.name;
      for (const auto& v : f.vars) os << ' ' << v;
      os << ')';
      return;
    case Op::Not: os << "(not "; print_to(os, f.kids[0]); os << ')'; return;
    case Op::And:
    case Op::Or:
      os << '(' << (f.op == Op::And ? "and" : "or");
      for (const auto& k : f.kids) { os << ' '; print_to(os, k); }
      os << ')';
      return;
    case Op::Exists:
    case Op::Forall:
    case Op::ExistsF:
    case Op::ForallF: {
      const char* head = f.op == Op::Exists ? "exists" : f.op == Op::Forall ? "forall" : f.op == Op::ExistsF ? "existsF" : "forallF";
      os << '(' << head << ' ' << f.name << ' ';
      print_to(os, f.kids[0]);
      os << ')';
      return;
    }
  }
}

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_to(os, f);
  return os.str();
}

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : s_(text) {}

  Formula parse_all() {
    Formula f = parse();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("formula parse error at offset " + std::to_string(i_) + ": " + msg);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string token() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
    if (start == i_) fail("expected a token");
    return s_.substr(start, i_ - start);
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  int integer() {
    auto t = token();
    try {
      std::size_t pos = 0;
      int v = std::stoi(t, &pos);
      if (pos != t.size()) fail("expected an integer");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer");
    }
  }
  std::vector<std::string> names_until_close() {
    std::vector<std::string> out;
    while (!peek(')')) out.push_back(token());
    return out;
  }

  Formula parse() {
    if (!peek('(')) {
      auto t = token();
      if (t == "true") return fm::top();
      if (t == "false") return fm::bottom();
      fail("unexpected token '" + t + "'");
    }
    expect('(');
    auto head = token();
    Formula f;
    auto fixed = [&](Op op, std::size_t n) {
      f.op = op;
      f.vars = names_until_close();
      if (f.vars.size() != n) fail("'" + head + "' expects " + std::to_string(n) + " variable(s)");
    };
    if (head == "sub") fixed(Op::Sub, 2);
    else if (head == "sing") fixed(Op::Sing, 1);
    else if (head == "empty") fixed(Op::Empty, 1);
    else if (head == "eq") fixed(Op::Eq, 2);
    else if (head == "in") fixed(Op::In, 2);
    else if (head == "card") {
      auto x = token();
      int k = integer(), m = integer();
      if (m < 1 || k < 0 || k >= m) fail("card requires 0 <= k < m");
      f = fm::card(x, k, m);
    } else if (head == "rel") {
      f.op = Op::Rel;
      f.name = token();
      f.vars = names_until_close();
      if (f.vars.empty()) fail("rel needs at least one argument");
    } else if (head == "not") {
      f.op = Op::Not;
      f.kids.push_back(parse());
    } else if (head == "and" || head == "or") {
      f.op = head == "and" ? Op::And : Op::Or;
      while (!peek(')')) f.kids.push_back(parse());
    } else if (head == "exists" || head == "forall" || head == "existsF" || head == "forallF") {
      f.op = head == "exists" ? Op::Exists : head == "forall" ? Op::Forall : head == "existsF" ? Op::ExistsF : Op::ForallF;
      f.name = token();
      f.kids.push_back(parse());
    } else {
      fail("unknown operator '" + head + "'");
    }
    expect(')');
    return f;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) { return detail::FormulaParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Variables, rank, desugaring

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (is_atom(f.op)) {
    for (const auto& v : f.vars)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (is_quantifier(f.op)) {
    bool fresh = bound.insert(f.name).second;
    collect_free(f.kids[0], bound, out);
    if (fresh) bound.erase(f.name);
    return;
  }
  for (const auto& k : f.kids) collect_free(k, bound, out);
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

inline void collect_all_vars(const Formula& f, std::set<std::string>& out) {
  for (const auto& v : f.vars) out.insert(v);
  if (is_quantifier(f.op)) out.insert(f.name);
  for (const auto& k : f.kids) collect_all_vars(k, out);
}

inline std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all_vars(f, out);
  return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

inline int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& k : f.kids) d = std::max(d, quantifier_depth(k));
  return d + (is_quantifier(f.op) ? 1 : 0);
}

inline int max_modulus(const Formula& f) {
  int m = f.op == Op::Card ? f.m : 0;
  for (const auto& k : f.kids) m = std::max(m, max_modulus(k));
  return m;
}

/// Maximum of quantifier depth and the largest Card modulus.
inline int rank(const Formula& f) { return std::max(quantifier_depth(f), max_modulus(f)); }

inline std::set<std::string> relation_symbols(const Formula& f) {
  std::set<std::string> out;
  if (f.op == Op::Rel) out.insert(f.name);
  for (const auto& k : f.kids) {
    auto s = relation_symbols(k);
    out.insert(s.begin(), s.end());
  }
  return out;
}

inline bool uses_sugar(const Formula& f) {
  if (f.op == Op::ExistsF || f.op == Op::ForallF || f.op == Op::Eq || f.op == Op::In) return true;
  for (const auto& k : f.kids)
    if (uses_sugar(k)) return true;
  return false;
}

namespace detail {

inline Formula desugar_rec(const Formula& f, std::set<std::string>& scope) {
  auto check = [&](const std::string& v) {
    if (!scope.count(v)) throw ScopeError("unbound variable '" + v + "'");
  };
  if (is_atom(f.op)) {
    for (const auto& v : f.vars) check(v);
    if (f.op == Op::Eq || f.op == Op::In) return fm::sub(f.vars[0], f.vars[1]);
    return f;
  }
  if (is_quantifier(f.op)) {
    bool fresh = scope.insert(f.name).second;
    Formula body = desugar_rec(f.kids[0], scope);
    if (fresh) scope.erase(f.name);
    switch (f.op) {
      case Op::ExistsF: return fm::exists(f.name, fm::conj({fm::sing(f.name), std::move(body)}));
      case Op::ForallF: return fm::forall(f.name, fm::disj({fm::neg(fm::sing(f.name)), std::move(body)}));
      default: return {f.op, f.name, {}, 0, 1, {std::move(body)}};
    }
  }
  Formula out = f;
  out.kids.clear();
  for (const auto& k : f.kids) out.kids.push_back(desugar_rec(k, scope));
  return out;
}

}  // namespace detail

/// Replaces first-order variables by set variables constrained to singletons.
/// `free` lists variables allowed to occur free; anything else unbound is a
/// scope error. Free first-order variables stay as they are and denote
/// singleton sets in assignments.
inline Formula desugar(const Formula& f, const std::set<std::string>& free = {}) {
  std::set<std::string> scope = free;
  return detail::desugar_rec(f, scope);
}

// ---------------------------------------------------------------------------
// Substitution

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    auto n = base + "_" + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

/// Renames free variables by `sub`; bound variables that would capture a
/// substituted name are renamed apart.
inline Formula rename_free(const Formula& f, const std::map<std::string, std::string>& sub) {
  if (sub.empty()) return f;
  if (is_atom(f.op)) {
    Formula out = f;
    for (auto& v : out.vars) {
      auto it = sub.find(v);
      if (it != sub.end()) v = it->second;
    }
    return out;
  }
  if (is_quantifier(f.op)) {
    std::map<std::string, std::string> inner = sub;
    inner.erase(f.name);
    std::set<std::string> targets;
    for (const auto& [_, t] : inner) targets.insert(t);
    std::string bound = f.name;
    if (targets.count(bound)) {
      std::set<std::string> avoid = all_vars(f.kids[0]);
      avoid.insert(targets.begin(), targets.end());
      for (const auto& [s, _] : inner) avoid.insert(s);
      bound = fresh_name(f.name, avoid);
      inner[f.name] = bound;
    }
    if (inner.empty()) return f;
    return {f.op, bound, {}, 0, 1, {rename_free(f.kids[0], inner)}};
  }
  Formula out = f;
  for (auto& k : out.kids) k = rename_free(k, sub);
  return out;
}

/// Flattens nested and/or, drops neutral elements and folds constants.
inline Formula simplify(const Formula& f) {
  if (is_atom(f.op)) return f;
  if (is_quantifier(f.op)) {
    Formula body = simplify(f.kids[0]);
    bool trivially = body.op == Op::And || body.op == Op::Or;
    if (trivially && body.kids.empty()) return body;  // quantifier over a constant
    return {f.op, f.name, {}, 0, 1, {std::move(body)}};
  }
  if (f.op == Op::Not) {
    Formula k = simplify(f.kids[0]);
    if (k.op == Op::Not) return k.kids[0];
    if ((k.op == Op::And || k.op == Op::Or) && k.kids.empty()) return k.op == Op::And ? fm::bottom() : fm::top();
    return fm::neg(std::move(k));
  }
  const Op self = f.op, dual = f.op == Op::And ? Op::Or : Op::And;
  std::vector<Formula> out;
  for (const auto& k : f.kids) {
    Formula s = simplify(k);
    if (s.op == self) {
      for (auto& g : s.kids) out.push_back(std::move(g));
    } else if (s.op == dual && s.kids.empty()) {
      return s;  // absorbing element
    } else {
      out.push_back(std::move(s));
    }
  }
  if (out.size() == 1) return out[0];
  return {self, "", {}, 0, 1, std::move(out)};
}

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<std::string, Mask>;

inline constexpr double kDefaultEvalBudget = 17179869184.0;  // 2^34 leaf visits

namespace detail {

struct Compiled {
  Op op = Op::And;
  int rel = -1;
  std::vector<int> slots;
  int k = 0, m = 1;
  int bound = -1;
  bool singleton = false;
  std::vector<Compiled> kids;
};

}  // namespace detail

/// A formula compiled against a signature, with its free variables bound to
/// argument slots in the given order. Reusable across structures of that
/// signature.
class PreparedFormula {
 public:
  PreparedFormula(const Formula& f, const Signature& sig, const std::vector<std::string>& free) {
    std::map<std::string, int> rel_index;
    std::vector<std::string> names;
    for (const auto& s : sig.symbols()) names.push_back(s.name);
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) rel_index[names[i]] = static_cast<int>(i);
    std::map<std::string, int> scope;
    for (const auto& v : free) {
      if (scope.count(v)) throw ArgumentError("free variable '" + v + "' listed twice");
      scope[v] = slots_++;
    }
    arguments_ = slots_;
    root_ = compile(f, sig, rel_index, scope);
    nestings_ = nestings(root_);
  }

  int arguments() const { return arguments_; }
  int slots() const { return slots_; }
  const detail::Compiled& root() const { return root_; }

  /// Largest number of assignments visited along one quantifier chain on a
  /// domain of n elements: n per singleton quantifier, 2^n per set quantifier.
  double cost(int n) const {
    double worst = 1;
    for (auto [single, sets] : nestings_)
      worst = std::max(worst, std::pow(static_cast<double>(std::max(1, n)), single) * std::ldexp(1.0, n * sets));
    return worst;
  }

 private:
  /// Pareto-maximal (singleton, set) quantifier counts over root-to-leaf paths.
  static std::vector<std::pair<int, int>> nestings(const detail::Compiled& c) {
    std::vector<std::pair<int, int>> out;
    for (const auto& k : c.kids)
      for (auto p : nestings(k)) out.push_back(p);
    if (out.empty()) out.push_back({0, 0});
    if (c.bound >= 0)
      for (auto& [single, sets] : out) ++(c.singleton ? single : sets);
    std::vector<std::pair<int, int>> frontier;
    for (auto p : out)
      if (std::none_of(out.begin(), out.end(), [&](auto q) {
            return q != p && q.first >= p.first && q.second >= p.second;
          }) &&
          std::find(frontier.begin(), frontier.end(), p) == frontier.end())
        frontier.push_back(p);
    return frontier;
  }

  detail::Compiled compile(const Formula& f, const Signature& sig, const std::map<std::string, int>& rel_index,
                           std::map<std::string, int>& scope) {
    if (f.op == Op::ExistsF || f.op == Op::ForallF) {
      std::set<std::string> names;
      for (const auto& [k, _] : scope) names.insert(k);
      return compile(desugar(f, names), sig, rel_index, scope);
    }
    detail::Compiled c;
    c.op = f.op;
    c.k = f.k;
    c.m = f.m;
    if (is_atom(f.op)) {
      for (const auto& v : f.vars) {
        auto it = scope.find(v);
        if (it == scope.end()) throw ScopeError("unbound variable '" + v + "'");
        c.slots.push_back(it->second);
      }
      if (f.op == Op::Eq || f.op == Op::In) c.op = Op::Sub;
      if (f.op == Op::Rel) {
        auto it = rel_index.find(f.name);
        if (it == rel_index.end()) throw SignatureError("relation '" + f.name + "' not in signature");
        if (static_cast<int>(f.vars.size()) != *sig.arity_of(f.name))
          throw SignatureError("relation '" + f.name + "' used with wrong arity");
        c.rel = it->second;
      }
      return c;
    }
    if (is_quantifier(f.op)) {
      auto prev = scope.find(f.name);
      std::optional<int> saved = prev != scope.end() ? std::optional<int>(prev->second) : std::nullopt;
      c.bound = slots_++;
      scope[f.name] = c.bound;
      const Formula& body = f.kids[0];
      if (f.op == Op::Exists && body.op == Op::And && !body.kids.empty() && body.kids[0].op == Op::Sing &&
          body.kids[0].vars[0] == f.name)
        c.singleton = true;
      if (f.op == Op::Forall && body.op == Op::Or && !body.kids.empty() && body.kids[0].op == Op::Not &&
          body.kids[0].kids[0].op == Op::Sing && body.kids[0].kids[0].vars[0] == f.name)
        c.singleton = true;
      c.kids.push_back(compile(body, sig, rel_index, scope));
      if (saved) scope[f.name] = *saved;
      else scope.erase(f.name);
      return c;
    }
    for (const auto& k : f.kids) c.kids.push_back(compile(k, sig, rel_index, scope));
    return c;
  }

  detail::Compiled root_;
  std::vector<std::pair<int, int>> nestings_;
  int slots_ = 0;
  int arguments_ = 0;
};

/// Brute-force evaluator over one structure (at most 63 elements).
/// Quantifiers enumerate subsets in increasing bitmask order.
class Evaluator {
 public:
  explicit Evaluator(const Structure& a, double budget = kDefaultEvalBudget) : a_(a), budget_(budget) {
    if (a.size() > 63) throw BudgetError("evaluation limited to 63 elements");
    for (const auto& [name, ts] : a.relations()) {
      std::vector<std::vector<Mask>> masks;
      for (const auto& t : ts) {
        std::vector<Mask> tm;
        for (auto e : t) tm.push_back(bit(e));
        masks.push_back(std::move(tm));
      }
      rels_.push_back(std::move(masks));
      // Unary: members. Binary: successors of each element.
      std::vector<Mask> table(static_cast<std::size_t>(a.size()), 0);
      if (*a.signature().arity_of(name) == 1) {
        table.assign(1, 0);
        for (const auto& t : ts) table[0] |= bit(t[0]);
      } else if (*a.signature().arity_of(name) == 2) {
        for (const auto& t : ts) table[static_cast<std::size_t>(t[0])] |= bit(t[1]);
      }
      tables_.push_back(std::move(table));
    }
  }

  bool eval(const Formula& f, const Assignment& assignment = {}) const {
    std::vector<std::string> free;
    std::vector<Mask> values;
    for (const auto& [v, m] : assignment) {
      free.push_back(v);
      values.push_back(m);
    }
    return run(PreparedFormula(f, a_.signature(), free), values);
  }

  /// Runs a prepared formula; `args` are the values of its free variables.
  bool run(const PreparedFormula& p, const std::vector<Mask>& args) const {
    if (static_cast<int>(args.size()) != p.arguments()) throw ArgumentError("wrong number of formula arguments");
    for (auto m : args)
      if (m & ~full_mask(a_.size())) throw ArgumentError("assignment outside the domain");
    if (p.cost(a_.size()) > budget_)
      throw BudgetError("evaluation on " + std::to_string(a_.size()) + " elements exceeds the budget");
    std::vector<Mask> env(static_cast<std::size_t>(p.slots()), 0);
    std::copy(args.begin(), args.end(), env.begin());
    return exec(p.root(), env);
  }

  const Structure& structure() const { return a_; }

 private:
  bool exec(const detail::Compiled& c, std::vector<Mask>& env) const {
    switch (c.op) {
      case Op::Sub: return (env[static_cast<std::size_t>(c.slots[0])] & ~env[static_cast<std::size_t>(c.slots[1])]) == 0;
      case Op::Sing: return popcount(env[static_cast<std::size_t>(c.slots[0])]) == 1;
      case Op::Empty: return env[static_cast<std::size_t>(c.slots[0])] == 0;
      case Op::Card: return popcount(env[static_cast<std::size_t>(c.slots[0])]) % c.m == c.k;
      case Op::Rel: {
        const auto& table = tables_[static_cast<std::size_t>(c.rel)];
        if (c.slots.size() == 1) return (table[0] & env[static_cast<std::size_t>(c.slots[0])]) != 0;
        if (c.slots.size() == 2) {
          const Mask to = env[static_cast<std::size_t>(c.slots[1])];
          for (Mask from = env[static_cast<std::size_t>(c.slots[0])]; from; from &= from - 1)
            if (table[static_cast<std::size_t>(std::countr_zero(from))] & to) return true;
          return false;
        }
        for (const auto& t : rels_[static_cast<std::size_t>(c.rel)]) {
          bool ok = true;
          for (std::size_t i = 0; i < t.size() && ok; ++i) ok = (t[i] & env[static_cast<std::size_t>(c.slots[i])]) != 0;
          if (ok) return true;
        }
        return false;
      }
      case Op::Not: return !exec(c.kids[0], env);
      case Op::And:
        for (const auto& k : c.kids)
          if (!exec(k, env)) return false;
        return true;
      case Op::Or:
        for (const auto& k : c.kids)
          if (exec(k, env)) return true;
        return false;
      case Op::Exists:
      case Op::Forall: {
        const bool want = c.op == Op::Exists;
        Mask& slot = env[static_cast<std::size_t>(c.bound)];
        const Mask saved = slot;
        bool result = !want;
        if (c.singleton) {
          // Non-singletons make the guarded body false (exists) or true (forall).
          for (int i = 0; i < a_.size() && result != want; ++i) {
            slot = bit(i);
            if (exec(c.kids[0], env) == want) result = want;
          }
        } else {
          const Mask limit = full_mask(a_.size());
          for (Mask x = 0;; ++x) {
            slot = x;
            if (exec(c.kids[0], env) == want) {
              result = want;
              break;
            }
            if (x == limit) break;
          }
        }
        slot = saved;
        return result;
      }
      default: throw ArgumentError("unexpected sugar in compiled formula");
    }
  }

  const Structure& a_;
  double budget_;
  std::vector<std::vector<std::vector<Mask>>> rels_;
  std::vector<std::vector<Mask>> tables_;
};

inline bool eval(const Structure& a, const Formula& f, const Assignment& assignment = {}) {
  return Evaluator(a).eval(f, assignment);
}

}  // namespace msot
