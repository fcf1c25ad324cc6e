#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ualw/family.hpp"
#include "ualw/workbench.hpp"

using namespace ualw;

namespace {

// the fixtures double as construction helpers for the instances under test
Workbench load_fixture(const std::string& name) {
  return load_workbench(std::string(UALW_TEST_SCENARIO_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("dialectic instance: (4) passes, (4b) fails, forms agree") {
  Workbench wb = load_fixture("dialectic.wb.json");
  const FamilyInstance& inst = wb.instances.at("dia-pair");

  Verdict four = check_4(inst);
  CHECK(four.holds);
  Verdict fp = check_4_free_product(inst);
  CHECK(fp.holds == four.holds);

  Verdict fourb = check_4b(inst);
  CHECK(!fourb.holds);
  // witness replay: the separating pair is union-equivalent but the witness
  // assignment separates it through the quotient algebra
  auto pair = fourb.witness["separating_pair"];
  Formula lhs = inst.union_logic->parse(pair[0].get<std::string>());
  Formula rhs = inst.union_logic->parse(pair[1].get<std::string>());
  CHECK(taut_equivalent(*inst.union_logic, lhs, rhs));
  const auto& [w, h] = *inst.refute_4b;
  GenAssignment env{inst.union_logic->atoms(), h};
  CHECK(evaluate(*w.claimed, lhs, env) != evaluate(*w.claimed, rhs, env));
}

TEST_CASE("cpl instance: both (4) and (4b) pass; substitutional implies (4b)") {
  Workbench wb = load_fixture("cpl_family.wb.json");
  const FamilyInstance& inst = wb.instances.at("cpl-qr");
  for (const auto& p : inst.parts) CHECK(is_substitutional(*p.logic).holds);
  Verdict fourb = check_4b(inst);
  CHECK(fourb.holds);
  CHECK(fourb.witness["fr_size"] == 16);
  CHECK(check_4(inst).holds);  // (4b) implies (4)
}

TEST_CASE("kernel characterization: exactly the D-fixing assignments pass") {
  Workbench wb = load_fixture("dialectic.wb.json");
  const auto& B = wb.algebra("B");
  const auto& lu = wb.logic("LU");
  const auto& ld1 = wb.logic("LD1");
  int part_pass = 0, union_pass = 0;
  for (int a = 0; a < 3; ++a) {
    if (kernel_contains_taut(*ld1, *B, {a})) {
      ++part_pass;
      CHECK(a == 2);  // only D is a fixed point of not
    }
    for (int b = 0; b < 3; ++b)
      if (kernel_contains_taut(*lu, *B, {a, b})) {
        ++union_pass;
        CHECK((a == 2 && b == 2));
      }
  }
  CHECK(part_pass == 1);
  CHECK(union_pass == 1);
}

TEST_CASE("check_4 failing branch: a union model collapsing the parts") {
  // union logic with two models: the D-forced assignment into B and the
  // all-equal assignment into the two-fixed-point algebra A2.  Both identify
  // the two atoms, so (D1, D2) is union-equivalent, but the assignment
  // D1 -> a, D2 -> b passes every part kernel.
  Workbench wb = load_fixture("dialectic.wb.json");
  auto B = wb.algebra("B");
  auto A2 = wb.algebra("A2");
  Signature sig = B->signature();

  auto mk = [&](const std::string& name, std::vector<std::string> atoms,
                std::vector<ModelPresentation> models) {
    return std::make_shared<PresentedLogic>(name, std::move(atoms), sig, std::move(models));
  };
  std::vector<int> allB{0, 1, 2}, allA{0, 1};
  LogicPtr part1 = mk("Pa", {"D1"}, {{"mB", B, {2}, allB}, {"mA", A2, {0}, allA}});
  LogicPtr part2 = mk("Pb", {"D2"}, {{"mB", B, {2}, allB}, {"mA", A2, {0}, allA}});
  LogicPtr uni = mk("U", {"D1", "D2"}, {{"mB", B, {2, 2}, allB}, {"mA", A2, {0, 0}, allA}});

  FamilyInstance inst;
  inst.name = "collapsed";
  inst.union_logic = uni;
  for (auto [label, logic] : {std::pair<const char*, LogicPtr>{"P1", part1}, {"P2", part2}}) {
    FamilyPart part;
    part.label = label;
    part.logic = logic;
    part.model_map = {{"mB", "mB"}, {"mA", "mA"}};
    inst.parts.push_back(std::move(part));
  }
  for (const auto& p : inst.parts)
    CHECK(check_reduct(*p.logic, *uni, p.model_map).holds);

  Verdict four = check_4(inst);
  CHECK(!four.holds);
  // witness replay: the assignment passes both part kernels, not the union's
  CHECK(four.witness["algebra"] == "A2");
  std::vector<int> h;
  for (const auto& atom : uni->atoms())
    h.push_back(A2->element_by_name(four.witness["assignment"][atom].get<std::string>()));
  CHECK(kernel_contains_taut(*part1, *A2, {h[0]}));
  CHECK(kernel_contains_taut(*part2, *A2, {h[1]}));
  CHECK(!kernel_contains_taut(*uni, *A2, h));
  // the free-product form fails in agreement (asserted inside check_4, and
  // visible through the standalone form as well)
  CHECK(!check_4_free_product(inst).holds);
}

TEST_CASE("a single part covering the union satisfies (4) and (4b)") {
  Workbench wb = load_fixture("dialectic.wb.json");
  FamilyInstance inst;
  inst.name = "single";
  inst.union_logic = wb.logic("LU");
  FamilyPart part;
  part.label = "P0";
  part.logic = wb.logic("LU");
  for (const auto& m : wb.logic("LU")->models()) part.model_map[m.label] = m.label;
  inst.parts.push_back(std::move(part));
  CHECK(check_4(inst).holds);
  CHECK(check_4b(inst).holds);
}

TEST_CASE("patchwork implies (4) on the conditionally substitutional instances") {
  for (const char* fixture : {"dialectic.wb.json", "cpl_family.wb.json"}) {
    Workbench wb = load_fixture(fixture);
    for (const auto& [name, inst] : wb.instances) {
      bool cond = true;
      for (const auto& p : inst.parts)
        if (!is_cond_substitutional(*p.logic).holds) cond = false;
      if (!cond) continue;
      // patchwork over every tuple of part models whose shared parts agree
      bool patchwork_all = true;
      std::vector<size_t> pick(inst.parts.size(), 0);
      for (;;) {
        std::vector<std::string> labels;
        for (size_t i = 0; i < inst.parts.size(); ++i)
          labels.push_back(inst.parts[i].logic->models()[pick[i]].label);
        try {
          if (!patchwork_check(inst, labels).holds) patchwork_all = false;
        } catch (const Error&) {
          // incompatible tuple: outside the patchwork hypothesis
        }
        size_t i = pick.size();
        while (i > 0) {
          if (++pick[i - 1] < inst.parts[i - 1].logic->models().size()) break;
          pick[i - 1] = 0;
          --i;
        }
        if (i == 0) break;
      }
      if (patchwork_all) CHECK(check_4(inst).holds);
    }
  }
}

TEST_CASE("non-disjoint parts are rejected by check_4") {
  Workbench wb = load_fixture("semilattice.wb.json");
  CHECK_THROWS_WITH_AS(check_4(wb.instances.at("sl-V")), doctest::Contains("disjoint"), Error);
  // ... while patchwork accepts the overlap (that is the point of the instance)
  Verdict pw = patchwork_check(wb.instances.at("sl-V"), {"SL2:10", "SL2:01"});
  CHECK(!pw.holds);
}

TEST_CASE("patchwork hypothesis failure raises IncompatibleParts") {
  Workbench wb = load_fixture("semilattice.wb.json");
  // both parts are the full union logic: the chosen models must then agree
  // everywhere, and SL2:10 against SL2:01 cannot
  FamilyInstance twisted;
  twisted.name = "sl-twisted";
  twisted.union_logic = wb.logic("Lxy");
  for (const char* label : {"P1", "P2"}) {
    FamilyPart part;
    part.label = label;
    part.logic = wb.logic("Lxy");
    for (const auto& m : wb.logic("Lxy")->models()) part.model_map[m.label] = m.label;
    twisted.parts.push_back(std::move(part));
  }
  bool threw = false;
  try {
    patchwork_check(twisted, {"SL2:10", "SL2:01"});
  } catch (const Error& e) {
    threw = std::string(e.code()) == "IncompatibleParts";
  }
  CHECK(threw);
}

TEST_CASE("4a probes on the cpl instance") {
  Workbench wb = load_fixture("cpl_4a.wb.json");
  const FamilyInstance& inst = wb.instances.at("cpl-qr");
  Formula taut = inst.union_logic->parse(
      "not(and(not(not(and(q,not(r)))),not(not(and(r,not(q))))))");
  Formula top = inst.union_logic->parse("not(bot)");
  Verdict v = check_4a(inst, {{taut, top}});
  CHECK(!v.holds);
  CHECK(v.qualifier == "probes");
  Verdict fine = check_4a(inst, {{inst.union_logic->parse("q"), inst.union_logic->parse("q")}});
  CHECK(fine.holds);
}

TEST_CASE("defining relations characterize (4) on the instances") {
  for (const char* fixture : {"dialectic.wb.json", "cpl_family.wb.json"}) {
    Workbench wb = load_fixture(fixture);
    for (const auto& [name, inst] : wb.instances) {
      if (inst.defining_relations.empty()) continue;
      Verdict dr = check_defining_relations(inst);
      Verdict four = check_4(inst);
      CHECK(dr.holds == four.holds);
    }
  }
}

TEST_CASE("HSP witness chains are verified, not trusted") {
  Workbench wb = load_fixture("dialectic.wb.json");
  FamilyInstance inst = wb.instances.at("dia-pair");
  REQUIRE(inst.refute_4b.has_value());

  // break the surjection: identity-on-B is no homomorphism onto A2
  auto broken = inst;
  broken.refute_4b->first.surjection = {0, 1, 0};
  CHECK_THROWS_WITH_AS(check_4b(broken), doctest::Contains("BadWitnessChain"), Error);

  // break the assignment: mapping both atoms to the same point no longer
  // separates the union congruence
  auto useless = inst;
  useless.refute_4b->second = {0, 0};
  CHECK_THROWS_WITH_AS(check_4b(useless), doctest::Contains("BadWitnessChain"), Error);
}

TEST_CASE("meaning_iso_check on renamings") {
  Workbench wb = load_fixture("dialectic.wb.json");
  Verdict ok = meaning_iso_check({{"N1", "N2"}, {"D1", "D2"}}, *wb.logic("LN1"), *wb.logic("LN2"));
  CHECK(ok.holds);
  Verdict swapped =
      meaning_iso_check({{"N1", "D2"}, {"D1", "N2"}}, *wb.logic("LN1"), *wb.logic("LN2"));
  CHECK(!swapped.holds);
  CHECK(swapped.witness["stage"] == "lindenbaum");
  CHECK_THROWS_AS(meaning_iso_check({{"N1", "N2"}, {"D1", "N2"}}, *wb.logic("LN1"),
                                    *wb.logic("LN2")),
                  Error);
}

TEST_CASE("family_from_logic: construction shape and verdicts") {
  Workbench wb = load_fixture("disjoint_union.wb.json");
  FamilyInstance inst = family_from_logic(*wb.logic("LN1"), 2);
  CHECK(inst.union_logic->atoms().size() == 4);
  CHECK(inst.union_logic->models().size() == 9);
  CHECK(inst.parts.size() == 2);
  for (const auto& v : check_family(inst)) CHECK(v.holds);

  // renaming data produced by the construction is a meaning isomorphism
  REQUIRE(!inst.renamings.empty());
  Verdict ren = meaning_iso_check(inst.renamings[0].atom_map, *inst.parts[0].logic,
                                  *inst.parts[1].logic);
  CHECK(ren.holds);
}

TEST_CASE("streamed mod-7 instance: witness-verified failure of (4)") {
  Workbench wb = load_fixture("mod7.wb.json");
  const FolFamilyInstance& inst = wb.fol_instances.at("mod7");
  Verdict v = check_4_fol(inst);
  CHECK(!v.holds);
  CHECK(v.witness["part_witnesses"].size() == 3);

  // corrupted hints are rejected rather than reported as failures: a value
  // outside the concept algebra, and an h that no longer separates the pair
  FolFamilyInstance outside = inst;
  Bitset stray(49);
  stray.set(0);
  outside.hint->h_atoms.at("R1[1,0]") = stray;
  CHECK_THROWS_WITH_AS(check_4_fol(outside), doctest::Contains("BadWitnessChain"), Error);

  FolFamilyInstance tame = inst;  // h = mng itself cannot separate anything
  ConceptAlgebra ca = build_concept_algebra(inst.extra_models.front(), inst.type, inst.k);
  auto atoms = fol_atoms(inst.type, inst.k);
  for (size_t i = 0; i < atoms.size(); ++i)
    tame.hint->h_atoms.at(atoms[i]) = ca.elements[ca.atom_meaning[i]];
  CHECK_THROWS_WITH_AS(check_4_fol(tame), doctest::Contains("BadWitnessChain"), Error);
}
