#include "ualw/workbench.hpp"

#include <chrono>
#include <fstream>
#include <numeric>

namespace ualw {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw Error("SchemaError", what); }

const json& need(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error("missing field '" + key + "'");
  return *it;
}

int element_index(const FiniteAlgebra& alg, const json& j) {
  if (j.is_number_integer()) {
    int e = j.get<int>();
    if (e < 0 || e >= alg.size()) schema_error("element index out of range");
    return e;
  }
  int e = alg.element_by_name(j.get<std::string>());
  if (e < 0) schema_error("unknown element '" + j.get<std::string>() + "' of " + alg.name());
  return e;
}

void flatten_table(const json& j, int arity, int size, const std::vector<std::string>& names,
                   std::vector<int>& out) {
  if (arity == 0) {
    const json& cell = j.is_array() ? j.at(0) : j;
    std::string n = cell.is_string() ? cell.get<std::string>() : std::to_string(cell.get<int>());
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) schema_error("unknown element '" + n + "' in table");
    out.push_back(static_cast<int>(it - names.begin()));
    return;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    schema_error("table nesting does not match arity/universe");
  for (const auto& sub : j) flatten_table(sub, arity - 1, size, names, out);
}

AlgebraPtr parse_algebra(const json& j) {
  std::string name = need(j, "name").get<std::string>();
  std::vector<std::string> elements;
  for (const auto& e : need(j, "elements")) elements.push_back(e.get<std::string>());
  std::vector<OpSymbol> ops;
  std::vector<std::vector<int>> tables;
  for (const auto& op : need(j, "ops")) {
    OpSymbol sym{need(op, "name").get<std::string>(), need(op, "arity").get<int>()};
    std::vector<int> table;
    flatten_table(need(op, "table"), sym.arity, static_cast<int>(elements.size()), elements,
                  table);
    ops.push_back(sym);
    tables.push_back(std::move(table));
  }
  return std::make_shared<FiniteAlgebra>(Signature(ops), static_cast<int>(elements.size()),
                                         std::move(tables), name, elements);
}

std::string assignment_label(const std::string& algebra, const std::vector<int>& images) {
  std::string s = algebra + ":";
  for (int e : images) s += std::to_string(e);
  return s;
}

LogicPtr parse_logic(const Workbench& wb, const json& j) {
  std::string name = need(j, "name").get<std::string>();
  std::vector<std::string> atoms;
  for (const auto& a : need(j, "atoms")) atoms.push_back(a.get<std::string>());
  std::vector<OpSymbol> ops;
  for (const auto& op : need(j, "connectives"))
    ops.push_back({op.at(0).get<std::string>(), op.at(1).get<int>()});
  Signature sig(ops);

  std::vector<ModelPresentation> models;
  for (const auto& mj : need(j, "models")) {
    if (mj.contains("all_assignments")) {
      const json& spec = mj["all_assignments"];
      AlgebraPtr alg = wb.algebra(need(spec, "algebra").get<std::string>());
      std::vector<int> designated;
      for (const auto& d : need(spec, "designated")) designated.push_back(element_index(*alg, d));
      std::vector<int> forced(atoms.size(), -1);
      if (spec.contains("force"))
        for (auto it = spec["force"].begin(); it != spec["force"].end(); ++it) {
          auto pos = std::find(atoms.begin(), atoms.end(), it.key());
          if (pos == atoms.end()) schema_error("forced atom not declared: " + it.key());
          forced[pos - atoms.begin()] = element_index(*alg, it.value());
        }
      std::vector<int> images(atoms.size(), 0);
      for (size_t i = 0; i < atoms.size(); ++i)
        if (forced[i] >= 0) images[i] = forced[i];
      for (;;) {
        ModelPresentation mp;
        mp.algebra = alg;
        mp.assignment = images;
        mp.designated = designated;
        mp.label = assignment_label(alg->name(), images);
        models.push_back(std::move(mp));
        size_t i = atoms.size();
        while (i > 0) {
          if (forced[i - 1] < 0 && ++images[i - 1] < alg->size()) break;
          images[i - 1] = forced[i - 1] < 0 ? 0 : forced[i - 1];
          --i;
        }
        if (i == 0) break;
        if (atoms.empty()) break;
      }
      continue;
    }
    ModelPresentation mp;
    mp.label = need(mj, "label").get<std::string>();
    mp.algebra = wb.algebra(need(mj, "algebra").get<std::string>());
    const json& assign = need(mj, "assignment");
    mp.assignment.resize(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (!assign.contains(atoms[i])) schema_error("assignment misses atom " + atoms[i]);
      mp.assignment[i] = element_index(*mp.algebra, assign[atoms[i]]);
    }
    for (const auto& d : need(mj, "designated")) mp.designated.push_back(element_index(*mp.algebra, d));
    models.push_back(std::move(mp));
  }
  return std::make_shared<PresentedLogic>(name, atoms, sig, std::move(models));
}

SimilarityType parse_type(const json& j) {
  SimilarityType t;
  for (const auto& r : j) t.relations.emplace_back(r.at(0).get<std::string>(), r.at(1).get<int>());
  return t;
}

FOModel parse_fomodel(const json& j, const SimilarityType& t) {
  FOModel m;
  m.size = need(j, "size").get<int>();
  const json& rels = need(j, "relations");
  for (const auto& [name, arity] : t.relations) {
    size_t cells = 1;
    for (int i = 0; i < arity; ++i) cells *= static_cast<size_t>(m.size);
    Bitset b(cells);
    if (!rels.contains(name)) schema_error("model misses relation " + name);
    for (const auto& tuple : rels[name]) {
      if (static_cast<int>(tuple.size()) != arity) schema_error("tuple arity mismatch in " + name);
      size_t cell = 0, stride = 1;
      for (const auto& comp : tuple) {
        int v = comp.get<int>();
        if (v < 0 || v >= m.size) schema_error("tuple component out of range in " + name);
        cell += static_cast<size_t>(v) * stride;
        stride *= static_cast<size_t>(m.size);
      }
      b.set(cell);
    }
    m.relations.push_back(std::move(b));
  }
  return m;
}

void parse_fol_block(Workbench& wb, const json& j, const RunOptions& opt) {
  std::string name = need(j, "name").get<std::string>();
  SimilarityType t = parse_type(need(j, "type"));
  int k = need(j, "vars").get<int>();
  std::vector<FOModel> models;
  std::vector<std::string> labels;
  if (j.contains("models"))
    for (const auto& mj : j["models"]) {
      models.push_back(parse_fomodel(mj, t));
      labels.push_back(need(mj, "label").get<std::string>());
    }
  int up_to = j.value("generate_up_to", 0);
  if (opt.max_size >= 0 && up_to > 0) up_to = opt.max_size;
  if (up_to > 0) {
    BoundedModelSpace space{t, up_to};
    uint64_t total = space.total();
    for (uint64_t idx = 0; idx < total; ++idx) {
      auto [m, code] = space.locate(idx);
      models.push_back(space.decode(m, code));
      labels.push_back("gen" + std::to_string(idx));
    }
  }
  FolLogic fl = build_presented_fol(models, labels, t, k, opt.element_budget, name);
  wb.fol_logics.emplace(name, fl);
  wb.logics.emplace(name, fl.logic);
}

std::map<std::string, std::string> parse_model_map(const json& j, const PresentedLogic& part,
                                                   const PresentedLogic& whole) {
  std::map<std::string, std::string> map;
  if (j.is_string() && j.get<std::string>() == "by_assignment") {
    for (const auto& um : whole.models()) {
      const ModelPresentation* hit = nullptr;
      for (const auto& pm : part.models()) {
        if (pm.algebra != um.algebra) continue;
        bool match = true;
        for (size_t i = 0; i < part.atoms().size() && match; ++i)
          if (pm.assignment[i] != um.assignment[whole.atom_index(part.atoms()[i])]) match = false;
        if (match) {
          hit = &pm;
          break;
        }
      }
      if (!hit) schema_error("by_assignment map: no part model matches " + um.label);
      map[um.label] = hit->label;
    }
    return map;
  }
  for (auto it = j.begin(); it != j.end(); ++it) map[it.key()] = it.value().get<std::string>();
  return map;
}

void parse_instance(Workbench& wb, const json& j, const RunOptions& opt) {
  FamilyInstance inst;
  inst.name = need(j, "name").get<std::string>();
  inst.union_logic = wb.logic(need(j, "union").get<std::string>());
  inst.coordinate_budget = opt.budget;
  inst.element_budget = opt.element_budget;
  for (const auto& pj : need(j, "parts")) {
    FamilyPart part;
    part.label = need(pj, "label").get<std::string>();
    part.logic = wb.logic(need(pj, "logic").get<std::string>());
    part.model_map = parse_model_map(need(pj, "model_map"), *part.logic, *inst.union_logic);
    inst.parts.push_back(std::move(part));
  }
  if (j.contains("renamings"))
    for (const auto& rj : j["renamings"]) {
      Renaming r;
      r.from_part = need(rj, "from").get<std::string>();
      r.to_part = need(rj, "to").get<std::string>();
      for (auto it = rj.at("map").begin(); it != rj.at("map").end(); ++it)
        r.atom_map[it.key()] = it.value().get<std::string>();
      inst.renamings.push_back(std::move(r));
    }
  if (j.contains("defining_relations"))
    for (auto it = j["defining_relations"].begin(); it != j["defining_relations"].end(); ++it) {
      const FamilyPart* part = nullptr;
      for (const auto& p : inst.parts)
        if (p.label == it.key()) part = &p;
      if (!part) schema_error("defining relations for unknown part " + it.key());
      std::vector<std::pair<Formula, Formula>> rel;
      for (const auto& pr : it.value())
        rel.emplace_back(part->logic->parse(pr.at(0).get<std::string>()),
                         part->logic->parse(pr.at(1).get<std::string>()));
      inst.defining_relations[it.key()] = std::move(rel);
    }
  if (j.contains("refute_4b")) {
    const json& rj = j["refute_4b"];
    HSPWitness w;
    for (const auto& b : need(rj, "bases")) w.bases.push_back(wb.algebra(b.get<std::string>()));
    w.claimed = wb.algebra(need(rj, "claimed").get<std::string>());
    FiniteAlgebra prod = product(w.bases);
    if (rj.contains("subalgebra"))
      for (const auto& e : rj["subalgebra"]) w.subalgebra.push_back(e.get<int>());
    else {
      w.subalgebra.resize(prod.size());
      std::iota(w.subalgebra.begin(), w.subalgebra.end(), 0);
    }
    for (const auto& e : need(rj, "surjection")) w.surjection.push_back(element_index(*w.claimed, e));
    std::vector<int> h(inst.union_logic->atoms().size());
    const json& assign = need(rj, "assignment");
    for (size_t i = 0; i < h.size(); ++i)
      h[i] = element_index(*w.claimed, need(assign, inst.union_logic->atoms()[i]));
    inst.refute_4b = std::make_pair(std::move(w), std::move(h));
  }
  wb.instances.emplace(inst.name, std::move(inst));
}

void parse_fol_instance(Workbench& wb, const json& j, const RunOptions& opt) {
  FolFamilyInstance inst;
  inst.name = need(j, "name").get<std::string>();
  inst.type = parse_type(need(j, "type"));
  inst.k = need(j, "vars").get<int>();
  inst.max_size = need(j, "max_size").get<int>();
  if (opt.max_size >= 0) inst.max_size = opt.max_size;
  for (const auto& mj : need(j, "extras")) {
    inst.extra_models.push_back(parse_fomodel(mj, inst.type));
    inst.extra_labels.push_back(need(mj, "label").get<std::string>());
  }
  for (const auto& pj : need(j, "parts")) {
    SimilarityType pt;
    for (const auto& r : pj) {
      std::string name = r.get<std::string>();
      pt.relations.emplace_back(name, inst.type.arity_of(name));
    }
    inst.part_types.push_back(std::move(pt));
  }
  if (j.contains("hint")) {
    const json& hj = j["hint"];
    FolFamilyInstance::Hint hint;
    hint.target_label = need(hj, "target").get<std::string>();
    int target = -1;
    for (size_t i = 0; i < inst.extra_labels.size(); ++i)
      if (inst.extra_labels[i] == hint.target_label) target = static_cast<int>(i);
    if (target < 0) schema_error("hint target not among extras");
    int m = inst.extra_models[target].size;
    size_t cells = 1;
    for (int i = 0; i < inst.k; ++i) cells *= static_cast<size_t>(m);
    for (auto it = need(hj, "h").begin(); it != need(hj, "h").end(); ++it) {
      Bitset b(cells);
      for (const auto& tuple : it.value()) {
        size_t cell = 0, stride = 1;
        for (const auto& comp : tuple) {
          cell += static_cast<size_t>(comp.get<int>()) * stride;
          stride *= static_cast<size_t>(m);
        }
        b.set(cell);
      }
      hint.h_atoms.emplace(it.key(), std::move(b));
    }
    Signature sig = fol_signature(inst.k);
    std::set<std::string> atomset;
    for (const auto& a : fol_atoms(inst.type, inst.k)) atomset.insert(a);
    hint.pair_lhs = parse_formula(need(hj, "pair").at(0).get<std::string>(), sig, atomset);
    hint.pair_rhs = parse_formula(need(hj, "pair").at(1).get<std::string>(), sig, atomset);
    inst.hint = std::move(hint);
  }
  wb.fol_instances.emplace(inst.name, std::move(inst));
}

}  // namespace

const LogicPtr& Workbench::logic(const std::string& name) const {
  auto it = logics.find(name);
  if (it == logics.end()) throw Error("SchemaError", "unknown logic " + name);
  return it->second;
}

const FolLogic& Workbench::fol(const std::string& name) const {
  auto it = fol_logics.find(name);
  if (it == fol_logics.end()) throw Error("SchemaError", "unknown fol logic " + name);
  return it->second;
}

const AlgebraPtr& Workbench::algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it == algebras.end()) throw Error("SchemaError", "unknown algebra " + name);
  return it->second;
}

Workbench parse_workbench(const nlohmann::json& j, const RunOptions& opt) {
  if (!j.contains("version") || j["version"].get<int>() != 1)
    schema_error("workbench file needs \"version\": 1");
  Workbench wb;
  if (j.contains("algebras"))
    for (const auto& aj : j["algebras"]) {
      auto alg = parse_algebra(aj);
      if (!wb.algebras.emplace(alg->name(), alg).second)
        schema_error("duplicate algebra " + alg->name());
    }
  if (j.contains("logics"))
    for (const auto& lj : j["logics"]) {
      auto logic = parse_logic(wb, lj);
      if (!wb.logics.emplace(logic->name(), logic).second)
        schema_error("duplicate logic " + logic->name());
    }
  if (j.contains("fol"))
    for (const auto& fj : j["fol"]) parse_fol_block(wb, fj, opt);
  if (j.contains("family_instances"))
    for (const auto& ij : j["family_instances"]) parse_instance(wb, ij, opt);
  if (j.contains("fol_instances"))
    for (const auto& ij : j["fol_instances"]) parse_fol_instance(wb, ij, opt);
  if (j.contains("checks"))
    for (const auto& cj : j["checks"]) {
      CheckSpec spec;
      spec.kind = need(cj, "check").get<std::string>();
      spec.params = cj;
      spec.expect = cj.value("expect", true);
      wb.checks.push_back(std::move(spec));
    }
  return wb;
}

Workbench load_workbench(const std::string& path, const RunOptions& opt) {
  std::ifstream in(path);
  if (!in) throw Error("InputError", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("SchemaError", std::string("invalid JSON: ") + e.what());
  }
  return parse_workbench(j, opt);
}

namespace {

std::pair<Formula, Formula> parse_pair(const LogicPtr& logic, const json& params,
                                       const char* lhs_key = "lhs", const char* rhs_key = "rhs") {
  return {logic->parse(need(params, lhs_key).get<std::string>()),
          logic->parse(need(params, rhs_key).get<std::string>())};
}

}  // namespace

Verdict run_check(const Workbench& wb, const CheckSpec& spec, const RunOptions& opt) {
  const json& p = spec.params;
  ExecPolicy policy{opt.jobs};

  if (spec.kind == "lindenbaum_size") {
    const auto& logic = wb.logic(need(p, "logic").get<std::string>());
    const auto& lind = logic->lindenbaum(opt.element_budget);
    int want = need(p, "size").get<int>();
    Verdict v;
    v.check = "lindenbaum_size@" + logic->name();
    v.condition = "Lindenbaum-Tarski algebra size";
    v.method = "generated subalgebra of the model-algebra product";
    v.holds = lind.algebra.size() == want;
    v.witness = {{"size", lind.algebra.size()}, {"expected", want}};
    return v;
  }
  if (spec.kind == "taut_equivalent" || spec.kind == "si_equivalent") {
    const auto& logic = wb.logic(need(p, "logic").get<std::string>());
    auto [l, r] = parse_pair(logic, p);
    Verdict v;
    v.check = spec.kind + "@" + logic->name() + ":" + format_formula(l) + "~" + format_formula(r);
    v.condition = spec.kind == "taut_equivalent" ? "~ (tautological congruence)" : "si(~)";
    v.method = spec.kind == "taut_equivalent" ? "meaning equality in every listed model"
                                              : "equational theory of the model algebras";
    v.holds = spec.kind == "taut_equivalent" ? taut_equivalent(*logic, l, r)
                                             : si_equivalent(*logic, l, r, opt.budget);
    return v;
  }
  if (spec.kind == "entails") {
    const auto& logic = wb.logic(need(p, "logic").get<std::string>());
    std::vector<std::pair<Formula, Formula>> hyps;
    for (const auto& h : need(p, "hypotheses"))
      hyps.emplace_back(logic->parse(h.at(0).get<std::string>()),
                        logic->parse(h.at(1).get<std::string>()));
    auto goal = std::make_pair(logic->parse(need(p, "goal").at(0).get<std::string>()),
                               logic->parse(need(p, "goal").at(1).get<std::string>()));
    Verdict v;
    v.check = "entails@" + logic->name();
    v.condition = "|- (largest substitutional sound deductive system)";
    v.method = "quasi-equational check over the model algebras";
    v.holds = entails(*logic, hyps, goal, opt.budget);
    return v;
  }
  if (spec.kind == "kernel_contains_taut") {
    const auto& logic = wb.logic(need(p, "logic").get<std::string>());
    const auto& alg = wb.algebra(need(p, "algebra").get<std::string>());
    std::vector<int> images(logic->atoms().size());
    for (size_t i = 0; i < images.size(); ++i)
      images[i] = element_index(*alg, need(need(p, "assignment"), logic->atoms()[i]));
    Verdict v;
    v.check = "kernel_contains_taut@" + logic->name() + "->" + alg->name();
    v.condition = "~ contained in ker(h)";
    v.method = "homomorphic extension from the Lindenbaum algebra";
    v.holds = kernel_contains_taut(*logic, *alg, images);
    return v;
  }
  if (spec.kind == "substitutional")
    return is_substitutional(*wb.logic(need(p, "logic").get<std::string>()), opt.budget);
  if (spec.kind == "cond_substitutional")
    return is_cond_substitutional(*wb.logic(need(p, "logic").get<std::string>()), opt.budget);
  if (spec.kind == "reduct") {
    const auto& part = wb.logic(need(p, "part").get<std::string>());
    const auto& whole = wb.logic(need(p, "whole").get<std::string>());
    auto map = parse_model_map(need(p, "model_map"), *part, *whole);
    return check_reduct(*part, *whole, map);
  }
  if (spec.kind == "check_4") return check_4(wb.instances.at(need(p, "instance").get<std::string>()));
  if (spec.kind == "check_4b")
    return check_4b(wb.instances.at(need(p, "instance").get<std::string>()));
  if (spec.kind == "check_4a") {
    const auto& inst = wb.instances.at(need(p, "instance").get<std::string>());
    std::vector<std::pair<Formula, Formula>> probes;
    for (const auto& pr : need(p, "probes"))
      probes.emplace_back(inst.union_logic->parse(pr.at(0).get<std::string>()),
                          inst.union_logic->parse(pr.at(1).get<std::string>()));
    return check_4a(inst, probes);
  }
  if (spec.kind == "patchwork") {
    const auto& inst = wb.instances.at(need(p, "instance").get<std::string>());
    std::vector<std::string> labels;
    for (const auto& l : need(p, "part_models")) labels.push_back(l.get<std::string>());
    return patchwork_check(inst, labels);
  }
  if (spec.kind == "meaning_iso") {
    const auto& from = wb.logic(need(p, "from").get<std::string>());
    const auto& to = wb.logic(need(p, "to").get<std::string>());
    std::map<std::string, std::string> map;
    for (auto it = need(p, "map").begin(); it != need(p, "map").end(); ++it)
      map[it.key()] = it.value().get<std::string>();
    return meaning_iso_check(map, *from, *to);
  }
  if (spec.kind == "check_family" || spec.kind == "fol_family") {
    std::vector<Verdict> bundle;
    if (spec.kind == "check_family")
      bundle = check_family(wb.instances.at(need(p, "instance").get<std::string>()));
    else
      bundle = check_family_fol(wb.fol_instances.at(need(p, "instance").get<std::string>()), policy);
    // expected per-condition verdicts: {"check id substring": bool}
    Verdict v;
    v.check = spec.kind + "@" + need(p, "instance").get<std::string>();
    v.condition = "family conditions (1)-(5)";
    v.method = "bundle";
    v.holds = true;
    nlohmann::json results = nlohmann::json::array();
    const json& expected = need(p, "expected");
    for (const auto& sub : bundle) {
      bool want = true;
      for (auto it = expected.begin(); it != expected.end(); ++it)
        if (sub.check.find(it.key()) != std::string::npos) want = it.value().get<bool>();
      if (sub.holds != want) v.holds = false;
      results.push_back({{"check", sub.check},
                         {"holds", sub.holds},
                         {"expected", want},
                         {"qualifier", sub.qualifier},
                         {"witness", sub.witness}});
    }
    v.witness = {{"bundle", results}};
    return v;
  }
  if (spec.kind == "defining_relations")
    return check_defining_relations(wb.instances.at(need(p, "instance").get<std::string>()));
  if (spec.kind == "check_4_fol")
    return check_4_fol(wb.fol_instances.at(need(p, "instance").get<std::string>()), policy);
  if (spec.kind == "bounded_pair") {
    const auto& fl = wb.fol(need(p, "fol").get<std::string>());
    Signature sig = fol_signature(fl.k);
    std::set<std::string> atomset;
    for (const auto& a : fol_atoms(fl.type, fl.k)) atomset.insert(a);
    Formula l = parse_formula(need(p, "lhs").get<std::string>(), sig, atomset);
    Formula r = parse_formula(need(p, "rhs").get<std::string>(), sig, atomset);
    int max_size = need(p, "max_size").get<int>();
    BoundedResult res = taut_equivalent_bounded(fl.type, fl.k, l, r, max_size, policy);
    Verdict v;
    v.check = "bounded_pair@" + need(p, "fol").get<std::string>() + ":" + format_formula(l);
    v.condition = "bounded tautological equivalence";
    v.qualifier = "bounded";
    v.method = "exhaustive model enumeration up to size " + std::to_string(max_size);
    bool want_refuted = need(p, "outcome").get<std::string>() == "refuted";
    v.holds = res.refuted == want_refuted;
    v.witness = {{"refuted", res.refuted}, {"checked_up_to", res.checked_up_to}};
    if (res.refuted) {
      nlohmann::json rels = nlohmann::json::object();
      for (size_t ri = 0; ri < fl.type.relations.size(); ++ri) {
        nlohmann::json tuples = nlohmann::json::array();
        const Bitset& b = res.model.relations[ri];
        int arity = fl.type.relations[ri].second;
        for (size_t c = 0; c < b.bits; ++c)
          if (b.get(c)) {
            nlohmann::json tup = nlohmann::json::array();
            size_t cc = c;
            for (int i = 0; i < arity; ++i) {
              tup.push_back(cc % res.model.size);
              cc /= res.model.size;
            }
            tuples.push_back(tup);
          }
        rels[fl.type.relations[ri].first] = tuples;
      }
      v.witness["model"] = {{"size", res.model.size}, {"relations", rels}};
      v.witness["assignment"] = res.assignment;
    }
    return v;
  }
  if (spec.kind == "regular_all") {
    const auto& fl = wb.fol(need(p, "fol").get<std::string>());
    Verdict v;
    v.check = "regular_all@" + need(p, "fol").get<std::string>();
    v.condition = "all concept algebra elements are regular";
    v.method = "Delta-projection grouping per element";
    v.holds = true;
    for (size_t mi = 0; mi < fl.concepts.size(); ++mi)
      for (int e = 0; e < static_cast<int>(fl.concepts[mi].elements.size()); ++e)
        if (!is_regular(fl.concepts[mi], e)) {
          v.holds = false;
          v.witness = {{"model", fl.logic->models()[mi].label}, {"element", e}};
          return v;
        }
    return v;
  }
  if (spec.kind == "generate_dt") {
    const auto& fl = wb.fol(need(p, "fol").get<std::string>());
    DtPairs dt = generate_Dt(fl.type, fl.k);
    Verdict v;
    v.check = "generate_dt@" + need(p, "fol").get<std::string>();
    v.condition = "D(t) fragment lies in every model kernel";
    v.method = "direct meaning evaluation per model";
    v.holds = true;
    for (const auto& e : dt.entries)
      for (const auto& model : fl.fomodels)
        if (!pair_in_kernel(model, fl.type, fl.k, e.lhs, e.rhs)) {
          v.holds = false;
          v.witness = {{"lhs", format_formula(e.lhs)}, {"rhs", format_formula(e.rhs)}};
          return v;
        }
    if (p.contains("expect_skips") &&
        dt.skipped_atoms.size() != static_cast<size_t>(p["expect_skips"].get<int>()))
      v.holds = false;
    v.witness = {{"entries", dt.entries.size()}, {"skipped", dt.skipped_atoms}};
    return v;
  }
  throw Error("SchemaError", "unknown check kind " + spec.kind);
}

std::vector<CheckOutcome> run_all_checks(const Workbench& wb, const RunOptions& opt) {
  std::vector<CheckOutcome> out;
  for (const auto& spec : wb.checks) {
    CheckOutcome o;
    o.expect = spec.expect;
    auto start = std::chrono::steady_clock::now();
    o.verdict = run_check(wb, spec, opt);
    o.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                   .count();
    o.met = o.verdict.holds == o.expect;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace ualw
