// msot: command-line front end for the msot library.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "msot/decomposition.hpp"
#include "msot/dot.hpp"
#include "msot/encodings.hpp"
#include "msot/generators.hpp"
#include "msot/hierarchy.hpp"
#include "msot/io.hpp"
#include "msot/logic.hpp"
#include "msot/parallel.hpp"
#include "msot/partition.hpp"
#include "msot/structure.hpp"
#include "msot/transduction.hpp"
#include "msot/types.hpp"

using namespace msot;
using io::Json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int budget = 0;
  int jobs = 1;
  std::string dot;
  std::string format = "json";

  int budget_or(int fallback) const { return budget > 0 ? budget : fallback; }
  bool table() const { return format == "table"; }
};

Globals g;

void emit(const Json& j, const std::string& table) {
  if (g.table()) std::cout << table << "\n";
  else std::cout << j.dump(2) << "\n";
}

void emit(const Json& j) { emit(j, j.dump()); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

void write_dot(const std::string& text) {
  if (!g.dot.empty()) write_text(g.dot, text);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

/// "a,b,c" as a mask over the domain of `a`.
Mask names_mask(const Structure& a, const std::string& list) {
  Mask m = 0;
  std::stringstream ss(list);
  for (std::string n; std::getline(ss, n, ',');) {
    if (n.empty()) continue;
    auto e = a.index(n);
    if (!e) throw ArgumentError("unknown element '" + n + "'");
    m |= bit(*e);
  }
  return m;
}

/// Recovers the encoded signature from the P_R labels; each arity is one more
/// than the highest position used by an element carrying that label.
Signature infer_original(const Structure& s) {
  Signature sig;
  int positions = 0;
  while (s.signature().contains(incidence_position(positions))) ++positions;
  for (const auto& sym : s.signature().symbols()) {
    if (sym.arity != 1 || sym.name.rfind("P_", 0) != 0) continue;
    std::string r = sym.name.substr(2);
    int arity = 0;
    for (const auto& t : s.relation(sym.name))
      for (int i = 0; i < positions; ++i)
        for (const auto& p : s.relation(incidence_position(i)))
          if (p[1] == t[0]) arity = std::max(arity, i + 1);
    sig.add(r, arity > 0 ? arity : std::max(positions, 1));
  }
  return sig;
}

void structure_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("structure", "Structures, incidence encodings and sparsity");
  cmd->require_subcommand(1);

  static std::string in, other;
  static bool decode = false;
  static long k = 1;
  static int size = 6;
  static double p = 0.4;

  auto* inc = cmd->add_subcommand("incidence", "Incidence structure of the input (or decode with --decode)");
  inc->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  inc->add_flag("--decode", decode, "input is an incidence structure; print the encoded structure");
  inc->callback([] {
    auto s = io::read_structure(in);
    if (decode) {
      auto out = from_incidence(IncidenceStructure::from_labelled(s, infer_original(s)));
      write_dot(dot::structure(out));
      emit(io::to_json(out));
    } else {
      auto out = to_incidence(s);
      write_dot(dot::structure(out.structure));
      emit(io::to_json(out.structure));
    }
  });

  auto* gf = cmd->add_subcommand("gaifman", "Gaifman graph");
  gf->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  gf->callback([] {
    auto out = gaifman(io::read_structure(in));
    write_dot(dot::structure(out, "gaifman"));
    emit(io::to_json(out));
  });

  auto* sp = cmd->add_subcommand("sparse", "Exhaustive k-sparsity check");
  sp->add_option("--k", k, "sparsity bound")->check(CLI::NonNegativeNumber);
  sp->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  sp->callback([] {
    auto r = is_k_sparse(io::read_structure(in), k, g.budget_or(20));
    Json j{{"k", k}, {"sparse", r.sparse}};
    if (!r.sparse) j["witness"] = {{"relation", r.witness_relation}, {"subset", r.witness_subset}};
    emit(j, bool_text(r.sparse));
  });

  auto* iso = cmd->add_subcommand("iso", "Isomorphism test");
  iso->add_option("first", in, "structure JSON")->required()->check(CLI::ExistingFile);
  iso->add_option("second", other, "structure JSON")->required()->check(CLI::ExistingFile);
  iso->callback([] {
    auto a = io::read_structure(in), b = io::read_structure(other);
    auto f = find_isomorphism(a, b);
    Json j{{"isomorphic", f.has_value()}};
    if (f) {
      Json m = Json::object();
      for (int e = 0; e < a.size(); ++e) m[a.name(e)] = b.name((*f)[static_cast<std::size_t>(e)]);
      j["mapping"] = m;
    }
    emit(j, bool_text(f.has_value()));
  });

  auto* rnd = cmd->add_subcommand("random", "Random connected graph from --seed");
  rnd->add_option("--size", size, "vertices")->check(CLI::Range(1, 64));
  rnd->add_option("--p", p, "extra edge probability")->check(CLI::Range(0.0, 1.0));
  rnd->callback([] {
    gen::Rng rng(g.seed);
    auto out = gen::random_connected_graph(rng, size, p);
    write_dot(dot::structure(out));
    emit(io::to_json(out));
  });
}

void logic_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("logic", "Formula evaluation and types");
  cmd->require_subcommand(1);

  static std::string in, formula, compare;
  static std::vector<std::string> assigns;
  static int m = 1, q = 1;

  auto* ev = cmd->add_subcommand("eval", "Evaluate a formula");
  ev->add_option("--formula", formula, "formula text")->required();
  ev->add_option("--assign", assigns, "free variable binding var=a,b,...");
  ev->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  ev->callback([] {
    auto a = io::read_structure(in);
    Assignment asg;
    for (const auto& s : assigns) {
      auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ArgumentError("--assign expects var=elements, got '" + s + "'");
      asg[s.substr(0, eq)] = names_mask(a, s.substr(eq + 1));
    }
    bool v = eval(a, parse_formula(formula), asg);
    emit({{"value", v}}, bool_text(v));
  });

  auto* rk = cmd->add_subcommand("rank", "Quantifier rank of a formula");
  rk->add_option("--formula", formula, "formula text")->required();
  rk->callback([] {
    auto f = parse_formula(formula);
    emit({{"formula", to_string(f)},
          {"rank", rank(f)},
          {"quantifier_depth", quantifier_depth(f)},
          {"max_modulus", max_modulus(f)}},
         std::to_string(rank(f)));
  });

  auto* ty = cmd->add_subcommand("types", "Rank-m type, or theory comparison with --compare");
  ty->add_option("--m", m, "rank")->check(CLI::NonNegativeNumber);
  ty->add_option("--q", q, "largest counting modulus")->check(CLI::PositiveNumber);
  ty->add_option("--compare", compare, "second structure JSON")->check(CLI::ExistingFile);
  ty->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  ty->callback([] {
    auto a = io::read_structure(in);
    int budget = g.budget_or(kTypeBudget);
    if (!compare.empty()) {
      bool eq = theory_equal(a, io::read_structure(compare), m, q, budget);
      emit({{"m", m}, {"q", q}, {"equivalent", eq}}, bool_text(eq));
    } else {
      emit(io::to_json(mtype(a, {}, m, q, budget)));
    }
  });
}

}  // namespace

namespace {

Json validation_json(const Structure& a, const TreeDecomposition& d) {
  auto v = validate(a, d);
  Json j{{"valid", v.valid}, {"violations", v.violations}};
  if (v.valid) {
    auto s = is_strict(a, d);
    j["width"] = d.width();
    j["height"] = d.height();
    j["strict"] = s.strict;
    if (!s.strict) j["strictness_violations"] = s.violations;
  }
  return j;
}

void emit_decomposition(const Structure& a, const TreeDecomposition& d) {
  write_dot(dot::decomposition(a, d));
  emit(io::to_json(a, d), "width " + std::to_string(d.width()) + ", height " + std::to_string(d.height()));
}

void transduce_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("transduce", "Apply, translate backwards and compose transductions");
  cmd->require_subcommand(1);

  static std::string in, scheme, formula, first, second;
  static bool dedupe = false;

  auto* ap = cmd->add_subcommand("apply", "All outputs of a transduction on a structure");
  ap->add_option("--scheme", scheme, "transduction JSON")->required()->check(CLI::ExistingFile);
  ap->add_flag("--dedupe", dedupe, "drop outputs isomorphic to an earlier one");
  ap->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  ap->callback([] {
    auto t = io::transduction_from_json(io::read_json_file(scheme));
    auto outs = apply(t, io::read_structure(in), {g.budget_or(kExpansionBudget), dedupe});
    Json arr = Json::array();
    for (const auto& o : outs) arr.push_back(io::to_json(o));
    if (!outs.empty()) write_dot(dot::structure(outs.front(), "output"));
    emit({{"count", outs.size()}, {"outputs", arr}}, std::to_string(outs.size()) + " outputs");
  });

  auto* bw = cmd->add_subcommand("backwards", "Translate a formula over the output to one over the input");
  bw->add_option("--scheme", scheme, "transduction JSON")->required()->check(CLI::ExistingFile);
  bw->add_option("--formula", formula, "formula over the output signature")->required();
  bw->callback([] {
    auto t = io::transduction_from_json(io::read_json_file(scheme));
    auto f = backwards(t, parse_formula(formula));
    emit({{"formula", to_string(f)}, {"rank", rank(f)}}, to_string(f));
  });

  auto* co = cmd->add_subcommand("compose", "Composition: --first applied, then --second");
  co->add_option("--first", first, "transduction JSON")->required()->check(CLI::ExistingFile);
  co->add_option("--second", second, "transduction JSON")->required()->check(CLI::ExistingFile);
  co->callback([] {
    auto t = compose(io::transduction_from_json(io::read_json_file(second)),
                     io::transduction_from_json(io::read_json_file(first)));
    emit(io::to_json(t));
  });
}

void decomp_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("decomp", "Tree decompositions");
  cmd->require_subcommand(1);

  static std::string in, dec, mode = "twd", witness;
  static int n = 1, m = 2;

  auto* ex = cmd->add_subcommand("exact", "Exact treewidth, pathwidth or n-depth treewidth");
  ex->add_option("--mode", mode, "twd | pwd | twdn")->check(CLI::IsMember({"twd", "pwd", "twdn"}));
  ex->add_option("--n", n, "depth for twdn")->check(CLI::PositiveNumber);
  ex->add_option("--witness", witness, "write the witness decomposition to this file");
  ex->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  ex->callback([] {
    auto a = io::read_structure(in);
    WidthMode wm = mode == "twd" ? WidthMode::Tree : mode == "pwd" ? WidthMode::Path : WidthMode::Depth;
    auto r = exact_width(a, wm, wm == WidthMode::Depth ? n : 0, g.budget_or(kExactBudget));
    if (!witness.empty()) write_text(witness, io::to_json(a, r.witness).dump(2) + "\n");
    write_dot(dot::decomposition(a, r.witness));
    Json j{{"mode", mode}};
    if (wm == WidthMode::Depth) j["n"] = n;
    j["width"] = r.width;
    j["witness"] = io::to_json(a, r.witness);
    emit(j, std::to_string(r.width));
  });

  auto* va = cmd->add_subcommand("validate", "Check a decomposition, its width, height and strictness");
  va->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  va->add_option("decomposition", dec, "decomposition JSON")->required()->check(CLI::ExistingFile);
  va->callback([] {
    auto a = io::read_structure(in);
    auto j = validation_json(a, io::decomposition_from_json(a, io::read_json_file(dec)));
    emit(j, bool_text(j["valid"].get<bool>()));
  });

  auto* st = cmd->add_subcommand("strictify", "Strict decomposition of no larger width or height");
  st->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  st->add_option("decomposition", dec, "decomposition JSON")->required()->check(CLI::ExistingFile);
  st->callback([] {
    auto a = io::read_structure(in);
    emit_decomposition(a, strictify(a, io::decomposition_from_json(a, io::read_json_file(dec))));
  });

  auto* df = cmd->add_subcommand("dfs", "Decomposition along depth-first search paths");
  df->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  df->callback([] {
    auto a = io::read_structure(in);
    emit_decomposition(a, dfs_decomposition(a));
  });

  auto* re = cmd->add_subcommand("reduce", "Height reduction for decompositions without a large complete subtree");
  re->add_option("--n", n, "height bound parameter")->check(CLI::NonNegativeNumber);
  re->add_option("--m", m, "branching of the excluded complete tree")->check(CLI::PositiveNumber);
  re->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  re->add_option("decomposition", dec, "decomposition JSON")->required()->check(CLI::ExistingFile);
  re->callback([] {
    auto a = io::read_structure(in);
    emit_decomposition(a, reduce_height(a, io::decomposition_from_json(a, io::read_json_file(dec)), n, m));
  });
}

void partition_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("partition", "Partition refinements of incidence structures");
  cmd->require_subcommand(1);

  static std::string in, ref;
  static bool incidence = false;

  auto load = [] {
    auto s = io::read_structure(in);
    return incidence ? IncidenceStructure::from_labelled(s, infer_original(s)) : to_incidence(s);
  };

  auto* va = cmd->add_subcommand("validate", "Check a partition refinement and report its width");
  va->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  va->add_option("refinement", ref, "refinement JSON")->required()->check(CLI::ExistingFile);
  va->add_flag("--incidence", incidence, "input is already an incidence structure");
  va->callback([load] {
    auto inc = load();
    auto r = validate_refinement(inc, io::refinement_from_json(inc.structure, io::read_json_file(ref)));
    emit({{"valid", r.valid}, {"width", r.width}, {"violations", r.violations}}, bool_text(r.valid));
  });

  auto* cv = cmd->add_subcommand("convert", "Tree decomposition of the encoded structure");
  cv->add_option("input", in, "structure JSON")->required()->check(CLI::ExistingFile);
  cv->add_option("refinement", ref, "refinement JSON")->required()->check(CLI::ExistingFile);
  cv->add_flag("--incidence", incidence, "input is already an incidence structure");
  cv->callback([load] {
    auto inc = load();
    auto pi = io::refinement_from_json(inc.structure, io::read_json_file(ref));
    auto r = to_tree_decomposition(inc, pi);
    write_dot(dot::decomposition(r.original, r.decomposition));
    Json j{{"width", r.decomposition.width()},
           {"bound", conversion_bound(inc, pi)},
           {"decomposition", io::to_json(r.original, r.decomposition)}};
    emit(j, "width " + std::to_string(r.decomposition.width()) + " <= " + std::to_string(conversion_bound(inc, pi)));
  });
}

void encode_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("encode", "Encodings between hierarchy levels");
  cmd->require_subcommand(1);

  static std::string in, aux;
  static bool decode = false, sweep = false;
  static int n = 0, k = 1;

  auto* tw = cmd->add_subcommand("treeword", "Trees of bounded height as words over levels");
  tw->add_option("input", in, "tree JSON (list of node names), or a word with --decode")->required();
  tw->add_option("--n", n, "height bound (default: the tree's height)")->check(CLI::NonNegativeNumber);
  tw->add_flag("--decode", decode, "input is a word such as \"0 1 1\"");
  tw->callback([] {
    if (decode) {
      auto t = tree_word_decode(parse_word(in));
      write_dot(dot::tree(t));
      emit(io::to_json(t));
    } else {
      auto t = io::tree_from_json(io::read_json_file(in));
      auto w = tree_word_encode(t, n > 0 ? n : t.height());
      emit({{"word", word_to_string(w)}}, word_to_string(w));
    }
  });

  auto* gr = cmd->add_subcommand("grid", "Grid code of a structure, or decode with --decode");
  gr->add_option("input", in, "structure JSON, or grid code JSON with --decode")->required()->check(CLI::ExistingFile);
  gr->add_flag("--decode", decode, "input is a grid code");
  gr->callback([] {
    if (decode) {
      auto out = from_incidence(grid_decode(io::grid_code_from_json(io::read_json_file(in))));
      write_dot(dot::structure(out));
      emit(io::to_json(out));
    } else {
      auto code = grid_encode(io::read_structure(in));
      write_dot(dot::structure(code.grid(), "grid"));
      emit(io::to_json(code), std::to_string(code.rows) + "x" + std::to_string(code.cols) + " grid");
    }
  });

  auto* dc = cmd->add_subcommand("decomp", "Coloured-tree code of a decomposition, or decode with --decode");
  dc->add_option("input", in, "structure JSON, or decomposition code JSON with --decode")->required()->check(CLI::ExistingFile);
  dc->add_option("decomposition", aux, "decomposition JSON")->check(CLI::ExistingFile);
  dc->add_option("--k", k, "width bound")->check(CLI::NonNegativeNumber);
  dc->add_flag("--decode", decode, "input is a decomposition code");
  dc->callback([] {
    if (decode) {
      auto out = from_incidence(decomposition_decode(io::decomposition_code_from_json(io::read_json_file(in))));
      write_dot(dot::structure(out));
      emit(io::to_json(out));
      return;
    }
    if (aux.empty()) throw ArgumentError("encode decomp needs a decomposition file");
    auto a = io::read_structure(in);
    auto code = decomposition_encode(a, io::decomposition_from_json(a, io::read_json_file(aux)), k);
    write_dot(dot::tree(code.tree));
    emit(io::to_json(code));
  });

  auto* mi = cmd->add_subcommand("minor", "Minor selected by four parameter sets, or all minors with --sweep");
  mi->add_option("input", in, "graph JSON")->required()->check(CLI::ExistingFile);
  mi->add_option("params", aux, "minor parameter JSON")->check(CLI::ExistingFile);
  mi->add_flag("--sweep", sweep, "all minors up to isomorphism");
  mi->callback([] {
    auto gr = io::read_structure(in);
    if (sweep) {
      auto ms = minor_sweep(gr);
      Json arr = Json::array();
      for (const auto& m : ms) arr.push_back(io::to_json(m));
      emit({{"count", ms.size()}, {"minors", arr}}, std::to_string(ms.size()) + " minors");
      return;
    }
    if (aux.empty()) throw ArgumentError("encode minor needs a parameter file or --sweep");
    auto out = minor_apply(gr, io::minor_params_from_json(io::read_json_file(aux)));
    if (!out) {
      emit({{"minor", nullptr}}, "inconsistent parameters");
      return;
    }
    write_dot(dot::structure(*out, "minor"));
    emit({{"minor", io::to_json(*out)}}, std::to_string(out->size()) + " vertices");
  });
}

Structure star_graph(int leaves) {
  std::vector<std::string> vs{"c"};
  std::vector<Edge> es;
  for (int i = 0; i < leaves; ++i) {
    vs.push_back("l" + std::to_string(i));
    es.push_back({"c", vs.back()});
  }
  return make_graph(vs, es);
}

std::vector<Structure> family(const std::string& name, int count) {
  std::vector<Structure> out;
  for (int i = 1; i <= count; ++i) {
    if (name == "paths") out.push_back(path_graph(i));
    else if (name == "stars") out.push_back(star_graph(i));
    else if (name == "binary") out.push_back(tree_graph(complete_tree_domain(2, i + 1)));
    else if (name == "grids") out.push_back(grid_graph(i + 1, i + 1));
    else if (name == "cliques") out.push_back(complete_graph(i));
  }
  return out;
}

std::vector<Structure> read_samples(const std::string& path) {
  auto j = io::read_json_file(path);
  const Json& arr = j.is_object() ? io::detail::field(j, "samples") : j;
  if (!arr.is_array()) throw FormatError("expected a list of structures");
  std::vector<Structure> out;
  for (const auto& s : arr) out.push_back(io::structure_from_json(s));
  return out;
}

void hierarchy_commands(CLI::App& app) {
  auto* cmd = app.add_subcommand("hierarchy", "Counting, classification and reductions");
  cmd->require_subcommand(1);

  static std::vector<long> nkc;
  static std::string in, fam, scheme, cs, ks;
  static int count = 5, depth = 3;

  auto* cb = cmd->add_subcommand("countB", "B(n, k, c) with its bounds");
  cb->add_option("nkc", nkc, "n k c")->required()->expected(3)->check(CLI::NonNegativeNumber);
  cb->callback([] {
    auto r = count_B(nkc[0], nkc[1], nkc[2]);
    std::string bounds = !r.bounds_apply ? "bounds n/a" : r.bounds_hold ? "bounds OK" : "bounds FAIL";
    auto j = io::to_json(r);
    j["bounds"] = bounds;
    emit(j, r.value.str() + "\n" + bounds);
  });

  auto* cl = cmd->add_subcommand("classify", "Place a sampled graph family on the hierarchy");
  cl->add_option("input", in, "JSON list of graphs")->check(CLI::ExistingFile);
  cl->add_option("--family", fam, "built-in family instead of a file")
      ->check(CLI::IsMember({"paths", "stars", "binary", "grids", "cliques"}));
  cl->add_option("--count", count, "samples of the built-in family")->check(CLI::PositiveNumber);
  cl->add_option("--depth", depth, "largest n for twd_n")->check(CLI::PositiveNumber);
  cl->callback([] {
    if (in.empty() == fam.empty()) throw ArgumentError("give exactly one of an input file or --family");
    auto samples = fam.empty() ? read_samples(in) : family(fam, count);
    auto rep = classify_family(samples, depth, g.budget_or(kClassifyBudget), g.jobs);
    emit(io::to_json(rep), rep.verdict + "-consistent (" + rep.note + ")");
  });

  auto* ve = cmd->add_subcommand("verify", "Check that every C-sample is an output on some K-sample");
  ve->add_option("--scheme", scheme, "transduction JSON")->required()->check(CLI::ExistingFile);
  ve->add_option("targets", cs, "JSON list of C-samples")->required()->check(CLI::ExistingFile);
  ve->add_option("sources", ks, "JSON list of K-samples")->required()->check(CLI::ExistingFile);
  ve->callback([] {
    auto t = io::transduction_from_json(io::read_json_file(scheme));
    auto c = read_samples(cs), k = read_samples(ks);
    ApplyOptions opt{g.budget_or(kExpansionBudget), true};
    auto images = parallel_map(k, [&](const Structure& s) { return apply(t, s, opt); }, g.jobs);
    auto r = verify_reduction(c, images);
    Json m = Json::array();
    for (const auto& x : r.matching)
      m.push_back(x ? Json{{"source", x->first}, {"output", x->second}} : Json(nullptr));
    emit({{"holds", r.holds}, {"matching", m}}, bool_text(r.holds));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MSO transductions, decompositions and the transduction hierarchy"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "override the exhaustive-search budget of the command")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "worker threads for batch inputs")->check(CLI::PositiveNumber);
  app.add_option("--dot", g.dot, "also write a Graphviz rendering to this file");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "table"}));

  structure_commands(app);
  logic_commands(app);
  transduce_commands(app);
  decomp_commands(app);
  partition_commands(app);
  encode_commands(app);
  hierarchy_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cout << io::error_json(e).dump(2) << "\n";
    return 1;
  }
  return 0;
}
