#include "ualw/scenarios.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

namespace ualw {

namespace {

CheckOutcome make_outcome(const std::string& check, const std::string& condition, bool holds,
                          bool expect, nlohmann::json witness = nullptr,
                          const std::string& method = "scenario assertion") {
  CheckOutcome o;
  o.verdict.check = check;
  o.verdict.condition = condition;
  o.verdict.holds = holds;
  o.verdict.method = method;
  o.verdict.witness = std::move(witness);
  o.expect = expect;
  o.met = holds == expect;
  return o;
}

void extras_dialectic(const Workbench& wb, const RunOptions& opt,
                      std::vector<CheckOutcome>& out) {
  (void)opt;
  const auto& B = wb.algebra("B");
  const auto& A2 = wb.algebra("A2");

  // quotient of B by Cg(T,F) is the two-fixed-point algebra of Figure 1
  Congruence tf = congruence_generated(*B, {{0, 1}});
  Quotient q = quotient(*B, tf);
  bool iso = find_isomorphism(q.algebra, *A2).has_value();
  out.push_back(make_outcome("quotient_is_A2@dialectic", "quotient(B, Cg{(T,F)}) ~= A2",
                             iso && q.algebra.size() == 2, true));

  // meanings in the dialectic model: not(D1) means D and is designated
  const auto& ln = wb.logic("LND");
  const ModelPresentation& m = ln->models().front();
  Formula nd = ln->parse("not(D1)");
  out.push_back(make_outcome("meaning_notD@dialectic", "mng(not(D1)) = D, valid",
                             meaning(*ln, m, nd) == 2 && is_valid(*ln, m, nd), true));

  // the substitutionality witness assigns T to the dialectic atom
  Verdict s = is_substitutional(*wb.logic("LN1"));
  bool witness_ok = !s.holds && s.witness["assignment"]["D1"] == "T";
  out.push_back(make_outcome("subst_witness@dialectic", "witness maps D1 to T", witness_ok, true,
                             s.witness));
}

void extras_mod5(const Workbench& wb, const RunOptions& opt, std::vector<CheckOutcome>& out) {
  const FolLogic& fl = wb.fol("mod5");
  const ConceptAlgebra& ca = fl.concepts.front();
  std::vector<std::string> atoms = fol_atoms(fl.type, fl.k);

  out.push_back(make_outcome("concept_size@mod5", "concept algebra has 32 elements",
                             ca.algebra->size() == 32, true,
                             {{"size", ca.algebra->size()}}));

  // mng(R[1,0]) = { (u,v) : v = u+4 mod 5 }  and the converse law
  auto atom_el = [&](const std::string& a) {
    auto it = std::find(atoms.begin(), atoms.end(), a);
    return ca.atom_meaning[it - atoms.begin()];
  };
  Bitset plus4(25);
  for (int u = 0; u < 5; ++u) plus4.set(u + 5 * ((u + 4) % 5));
  bool meanings_ok = ca.elements[atom_el("R[1,0]")] == plus4;
  for (const auto& a : {"R", "S"}) {
    Bitset fwd = ca.elements[atom_el(std::string(a) + "[0,1]")];
    Bitset bwd = ca.elements[atom_el(std::string(a) + "[1,0]")];
    if (!(converse(fwd, 5) == bwd)) meanings_ok = false;
  }
  out.push_back(make_outcome("converse_law@mod5",
                             "mng(R[1,0]) is u+4 mod 5 and converses match", meanings_ok, true));

  // the automorphism fixing the forward meanings and swapping the converses
  std::vector<std::pair<int, int>> anchor{
      {atom_el("R[0,1]"), atom_el("R[0,1]")},
      {atom_el("S[0,1]"), atom_el("S[0,1]")},
      {atom_el("R[1,0]"), atom_el("S[1,0]")},
      {atom_el("S[1,0]"), atom_el("R[1,0]")}};
  auto alpha = find_isomorphism(*ca.algebra, *ca.algebra, anchor);
  out.push_back(make_outcome("automorphism@mod5",
                             "an automorphism fixes R[0,1],S[0,1] and swaps the converses",
                             alpha.has_value(), true));

  // the enumerated witness is automorphism-composed, so its kernel is ker(mng)
  Verdict cs = is_cond_substitutional(*fl.logic, opt.budget);
  bool witness_ok = !cs.holds;
  std::vector<int> witness_images;
  if (witness_ok) {
    for (const auto& a : atoms) {
      std::string name = cs.witness["assignment"][a].get<std::string>();
      int e = ca.algebra->element_by_name(name);
      witness_ok = witness_ok && e >= 0;
      witness_images.push_back(e);
    }
  }
  if (witness_ok) {
    std::vector<std::pair<int, int>> kernel_anchor;
    for (size_t i = 0; i < atoms.size(); ++i)
      kernel_anchor.emplace_back(ca.atom_meaning[i], witness_images[i]);
    witness_ok = find_isomorphism(*ca.algebra, *ca.algebra, kernel_anchor).has_value() &&
                 witness_images != ca.atom_meaning;
  }
  out.push_back(make_outcome("witness_kernel@mod5",
                             "witness = automorphism o mng with kernel ker(mng), not listed",
                             witness_ok, true, cs.witness));

  // the converse-swapping h: it passes the
  // kernel test, is no listed meaning function, and breaks the converse law
  // that every built presentation satisfies
  std::vector<int> h = ca.atom_meaning;
  auto pos = [&](const std::string& n) {
    return std::find(atoms.begin(), atoms.end(), n) - atoms.begin();
  };
  std::swap(h[pos("R[1,0]")], h[pos("S[1,0]")]);
  bool h_ok = kernel_contains_taut(*fl.logic, *ca.algebra, h) &&
              !is_listed_meaning(*fl.logic, fl.logic->models().front().algebra, h);
  bool h_breaks_converse =
      !(converse(ca.elements[h[pos("R[0,1]")]], 5) == ca.elements[h[pos("R[1,0]")]]);
  out.push_back(make_outcome("converse_swap_h@mod5",
                             "converse-swapping h: kernel preserved, unlisted, converse law broken",
                             h_ok && h_breaks_converse, true));
}

void extras_mod7(const Workbench& wb, const RunOptions& opt, std::vector<CheckOutcome>& out) {
  const FolFamilyInstance& inst = wb.fol_instances.at("mod7");
  ConceptAlgebra ca = build_concept_algebra(inst.extra_models.front(), inst.type, inst.k);

  out.push_back(make_outcome("concept_size@mod7", "concept algebra of the mod-7 model has 16 elements",
                             ca.algebra->size() == 16, true, {{"size", ca.algebra->size()}}));

  // subalgebra generated by the h-images of the R1 atoms: 3 atoms, 8 elements
  const auto& hint = *inst.hint;
  std::vector<int> seeds;
  for (const auto& name : {"R1[0,0]", "R1[0,1]", "R1[1,0]", "R1[1,1]"})
    seeds.push_back(ca.element_of(hint.h_atoms.at(name)));
  Subalgebra b = subalgebra_generated(*ca.algebra, seeds);

  int bot = b.algebra.element_by_name(ca.algebra->element_name(
      ca.element_of(Bitset(49))));  // empty set within the subalgebra
  int and_op = b.algebra.signature().index_of("and");
  int atoms_found = 0;
  for (int a = 0; a < b.algebra.size(); ++a) {
    if (a == bot) continue;
    bool atom = true;
    for (int c = 0; c < b.algebra.size(); ++c) {
      int meet = b.algebra.table(and_op)[static_cast<size_t>(c) * b.algebra.size() + a];
      if (meet != a && meet != bot) atom = false;
    }
    if (atom) ++atoms_found;
  }
  out.push_back(make_outcome("subalgebra_atoms@mod7", "h-image subalgebra: 8 elements, 3 atoms",
                             b.algebra.size() == 8 && atoms_found == 3, true,
                             {{"size", b.algebra.size()}, {"atoms", atoms_found}}));

  // anchored isomorphism onto the three-cycle's concept algebra
  SimilarityType t1{{{"R1", 2}}};
  FOModel cyc;
  cyc.size = 3;
  Bitset cb(9);
  for (auto [u, v] : {std::pair<int, int>{0, 1}, {1, 2}, {2, 0}}) cb.set(u + 3 * v);
  cyc.relations.push_back(cb);
  ConceptAlgebra cc = build_concept_algebra(cyc, t1, inst.k);
  std::vector<std::pair<int, int>> anchor;
  std::vector<std::string> t1_atoms = fol_atoms(t1, inst.k);
  bool anchored_ok = true;
  for (size_t i = 0; i < t1_atoms.size(); ++i) {
    std::string full_name = t1_atoms[i];
    int be = b.algebra.element_by_name(
        ca.algebra->element_name(ca.element_of(hint.h_atoms.at(full_name))));
    if (be < 0) anchored_ok = false;
    anchor.emplace_back(be, cc.atom_meaning[i]);
  }
  auto iso = anchored_ok ? find_isomorphism(b.algebra, *cc.algebra, anchor) : std::nullopt;
  out.push_back(make_outcome("cycle_iso@mod7",
                             "h restricted to the R1 fragment is the 3-cycle meaning function",
                             iso.has_value(), true));

  // the displayed pair: separated by h exactly, verified up to the bound
  Signature sig = fol_signature(inst.k);
  GenAssignment env;
  env.labels = fol_atoms(inst.type, inst.k);
  for (const auto& a : env.labels) env.images.push_back(ca.element_of(hint.h_atoms.at(a)));
  bool separated = evaluate(*ca.algebra, hint.pair_lhs, env) !=
                   evaluate(*ca.algebra, hint.pair_rhs, env);
  out.push_back(make_outcome("pair_separates@mod7", "the converse-emptiness pair separates h",
                             separated, true));

  BoundedResult bounded = taut_equivalent_bounded(inst.type, inst.k, hint.pair_lhs,
                                                  hint.pair_rhs, std::max(1, inst.max_size),
                                                  ExecPolicy{opt.jobs});
  CheckOutcome bo = make_outcome(
      "pair_bounded@mod7", "pair verified over all models up to the bound", !bounded.refuted,
      true, {{"checked_up_to", bounded.checked_up_to}});
  bo.verdict.qualifier = "bounded";
  out.push_back(bo);
}

void extras_disjoint_union(const Workbench& wb, const RunOptions& opt,
                           std::vector<CheckOutcome>& out) {
  (void)opt;
  // the construction on the dialectic base logic, two copies
  FamilyInstance inst = family_from_logic(*wb.logic("LN1"), 2);
  bool all = true;
  nlohmann::json bundle = nlohmann::json::array();
  for (const auto& v : check_family(inst)) {
    if (!v.holds) all = false;
    bundle.push_back({{"check", v.check}, {"holds", v.holds}});
  }
  out.push_back(make_outcome("disjoint_union_family@dialectic",
                             "family_from_logic(dialectic, I={1,2}) satisfies (1)-(5)", all, true,
                             bundle));

  // a single copy is an isomorphic copy of the base, modulo model duplication
  FamilyInstance one = family_from_logic(*wb.logic("CPLp"), 1);
  std::map<std::string, std::string> ident;
  for (const auto& p : wb.logic("CPLp")->atoms()) ident[p] = p + "@1";
  Verdict iso = meaning_iso_check(ident, *wb.logic("CPLp"), *one.union_logic);
  out.push_back(make_outcome("single_copy@cpl", "one copy is meaning-isomorphic to the base",
                             iso.holds, true, iso.witness));

  // the construction requires conditional substitutionality
  Signature notsig({{"not", 1}});
  auto B = wb.algebra("B");
  std::vector<ModelPresentation> ms{{"only", B, {0}, {0, 2}}};
  PresentedLogic bad("bad", {"N"}, notsig, ms);
  bool threw = false;
  try {
    family_from_logic(bad, 2);
  } catch (const Error& e) {
    threw = std::string(e.code()) == "NotCondSubstitutional";
  }
  out.push_back(make_outcome("precondition@disjoint-union",
                             "non-conditionally-substitutional base is rejected", threw, true));
}

void extras_fol_subst(const Workbench& wb, const RunOptions& opt,
                      std::vector<CheckOutcome>& out) {
  (void)opt;
  const FolLogic& fl = wb.fol("unary2");
  // the substitution r(x) -> r(y) maps the valid pair onto the refuted one
  Substitution s;
  s.map["r[0]"] = Formula::atom("r[1]");
  s.map["r[1]"] = Formula::atom("r[1]");
  Formula lhs = fl.logic->parse("r[0]");
  Formula rhs = fl.logic->parse("E1(and(eq01,r[1]))");
  bool image_ok = format_formula(apply_substitution(s, lhs)) == "r[1]" &&
                  apply_substitution(s, rhs) == rhs;
  out.push_back(make_outcome("substitution_image@fol", "s maps the pair as in the example",
                             image_ok, true));
}

void extras_rewrite(const Workbench& wb, const RunOptions& opt,
                    std::vector<CheckOutcome>& out) {
  const FolLogic& fl = wb.fol("ternary3");
  SimilarityType t = fl.type;
  int k = fl.k;

  Formula rewritten = restricted_rewrite("r", {1, 0, 0}, 3, k);
  bool shape_ok =
      is_restricted(rewritten, t) &&
      format_formula(rewritten) == "E2(and(eq02,E0(and(eq01,E1(and(eq12,r[0,1,2]))))))";
  out.push_back(make_outcome("rewrite_shape@r100", "three-step chain, restricted atom only",
                             shape_ok, true, {{"formula", format_formula(rewritten)}}));

  Formula original = Formula::atom(fol_atom_name("r", {1, 0, 0}));
  BoundedResult eq = taut_equivalent_bounded(t, k, original, rewritten, 2, ExecPolicy{opt.jobs});
  CheckOutcome bo = make_outcome("rewrite_bounded@r100", "rewrite equivalent up to size 2",
                                 !eq.refuted, true);
  bo.verdict.qualifier = "bounded";
  out.push_back(bo);

  // exact meaning equality on 20 random 3-element models
  std::mt19937_64 rng(kProbeSeed);
  bool meanings_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    FOModel m;
    m.size = 3;
    Bitset rel(27);
    for (size_t c = 0; c < 27; ++c)
      if (rng() & 1) rel.set(c);
    m.relations.push_back(rel);
    if (!(eval_meaning(m, t, k, original) == eval_meaning(m, t, k, rewritten)))
      meanings_ok = false;
  }
  out.push_back(make_outcome("rewrite_meanings@r100", "exact meaning equality on random models",
                             meanings_ok, true));

  // identity on already-restricted atoms; failure without spare variables
  bool unchanged = format_formula(restricted_rewrite("r", {0, 1, 2}, 3, k)) == "r[0,1,2]";
  bool threw = false;
  try {
    restricted_rewrite("r", {1, 0}, 2, 2);
  } catch (const Error& e) {
    threw = std::string(e.code()) == "NoSpareVariables";
  }
  out.push_back(make_outcome("rewrite_edges@r100", "restricted atoms unchanged; r[1,0] with two variables fails",
                             unchanged && threw, true));
}

void extras_cpl_family(const Workbench& wb, const RunOptions& opt,
                       std::vector<CheckOutcome>& out) {
  (void)opt;
  // substitutional parts force agreement of si(~) and ~ on probes
  const auto& l = wb.logic("CPLqr");
  auto probes = probe_formulas(l->connectives(), l->atoms(), 2, 60, 40, 4);
  bool agree = true;
  for (size_t i = 0; i < probes.size() && agree; ++i)
    for (size_t j = i + 1; j < std::min(probes.size(), i + 12) && agree; ++j)
      if (si_equivalent(*l, probes[i], probes[j]) != taut_equivalent(*l, probes[i], probes[j]))
        agree = false;
  out.push_back(make_outcome("si_equals_taut@cpl", "si(~) = ~ for the substitutional CPL",
                             agree, true));
}

struct Extra {
  const char* scenario;
  void (*fn)(const Workbench&, const RunOptions&, std::vector<CheckOutcome>&);
};

const Extra kExtras[] = {
    {"dialectic", extras_dialectic},
    {"mod5-not-condsub", extras_mod5},
    {"mod7-no-family", extras_mod7},
    {"disjoint-union-family", extras_disjoint_union},
    {"fol-substitution-counterexample", extras_fol_subst},
    {"restricted-rewrite-3var", extras_rewrite},
    {"cpl-family", extras_cpl_family},
};

}  // namespace

const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> kScenarios = {
      {"cpl-family", "classical propositional logic forms a logic family", "cpl_family.wb.json"},
      {"cpl-4a-fails", "condition (4a) fails already in CPL", "cpl_4a.wb.json"},
      {"dialectic", "(4) holds while (4b) fails for the dialectic-atom logics", "dialectic.wb.json"},
      {"mod5-not-condsub", "the mod-5 model logic is not conditionally substitutional", "mod5.wb.json"},
      {"mod7-no-family", "two-variable fragments with the mod-7 witness break condition (4)", "mod7.wb.json"},
      {"semilattice-no-patchwork", "meet-semilattice logics: substitutional but no patchwork", "semilattice.wb.json"},
      {"fol-reducts", "forgetting relation symbols yields reducts", "fol_reducts.wb.json"},
      {"disjoint-union-family", "disjoint unions of copies of a conditionally substitutional logic", "disjoint_union.wb.json"},
      {"fol-substitution-counterexample", "the r(x) to r(y) substitution breaks ~", "fol_subst.wb.json"},
      {"restricted-rewrite-3var", "expressing r(v1,v0,v0) with restricted atoms", "rewrite3.wb.json"},
  };
  return kScenarios;
}

std::string default_scenario_dir() {
  if (const char* env = std::getenv("UALW_SCENARIO_DIR")) return env;
#ifdef UALW_SCENARIO_DIR
  return UALW_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

ScenarioRun run_scenario(const std::string& name, const RunOptions& opt,
                         std::string scenario_dir) {
  const ScenarioInfo* info = nullptr;
  for (const auto& s : scenarios())
    if (s.name == name) info = &s;
  if (!info) throw Error("UnknownScenario", name);

  if (scenario_dir.empty()) scenario_dir = default_scenario_dir();
  std::string path = scenario_dir + "/" + info->fixture;

  ScenarioRun run;
  run.fixture_digest = digest_file(path);
  Workbench wb = load_workbench(path, opt);
  run.outcomes = run_all_checks(wb, opt);
  for (const auto& e : kExtras)
    if (name == e.scenario) e.fn(wb, opt, run.outcomes);
  return run;
}

}  // namespace ualw
