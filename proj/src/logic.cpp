#include "ualw/logic.hpp"

#include <algorithm>
#include <random>

namespace ualw {

bool ModelPresentation::designates(int e) const {
  return std::binary_search(designated.begin(), designated.end(), e);
}

PresentedLogic::PresentedLogic(std::string name, std::vector<std::string> atoms,
                               Signature connectives, std::vector<ModelPresentation> models)
    : name_(std::move(name)),
      atoms_(std::move(atoms)),
      connectives_(std::move(connectives)),
      models_(std::move(models)) {
  if (models_.empty()) throw Error("InvariantViolation", "logic needs a nonempty model list");
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (connectives_.has(atoms_[i]))
      throw Error("InvariantViolation", "atom " + atoms_[i] + " collides with a connective");
    if (!atom_index_.emplace(atoms_[i], static_cast<int>(i)).second)
      throw Error("InvariantViolation", "duplicate atom " + atoms_[i]);
  }
  for (auto& m : models_) {
    if (!m.algebra) throw Error("InvariantViolation", "model without algebra");
    if (!(m.algebra->signature() == connectives_))
      throw Error("SignatureMismatch", "model " + m.label + " has a different signature");
    if (m.assignment.size() != atoms_.size())
      throw Error("InvariantViolation", "model " + m.label + " assignment not total on atoms");
    for (int e : m.assignment)
      if (e < 0 || e >= m.algebra->size())
        throw Error("IndexOutOfRange", "assignment out of range in model " + m.label);
    for (int e : m.designated)
      if (e < 0 || e >= m.algebra->size())
        throw Error("IndexOutOfRange", "designated element out of range in model " + m.label);
    std::sort(m.designated.begin(), m.designated.end());
    m.designated.erase(std::unique(m.designated.begin(), m.designated.end()), m.designated.end());
  }
}

int PresentedLogic::atom_index(const std::string& atom) const {
  auto it = atom_index_.find(atom);
  return it == atom_index_.end() ? -1 : it->second;
}

std::set<std::string> PresentedLogic::atom_set() const {
  return std::set<std::string>(atoms_.begin(), atoms_.end());
}

const ModelPresentation* PresentedLogic::model_by_label(const std::string& label) const {
  for (const auto& m : models_)
    if (m.label == label) return &m;
  return nullptr;
}

std::vector<AlgebraPtr> PresentedLogic::distinct_algebras() const {
  std::vector<AlgebraPtr> out;
  for (const auto& m : models_)
    if (std::find(out.begin(), out.end(), m.algebra) == out.end()) out.push_back(m.algebra);
  return out;
}

Formula PresentedLogic::parse(const std::string& text) const {
  return parse_formula(text, connectives_, atom_set());
}

const LindenbaumAlgebra& PresentedLogic::lindenbaum(size_t element_budget) const {
  std::lock_guard<std::mutex> lock(cache_->m);
  if (!cache_->lind) {
    std::vector<AlgebraPtr> factors;
    std::vector<std::string> coords;
    for (const auto& m : models_) {
      factors.push_back(m.algebra);
      coords.push_back(m.label);
    }
    std::vector<std::vector<int>> gen_tuples(atoms_.size(),
                                             std::vector<int>(models_.size()));
    for (size_t p = 0; p < atoms_.size(); ++p)
      for (size_t j = 0; j < models_.size(); ++j) gen_tuples[p][j] = models_[j].assignment[p];

    auto gen = generated_product_subalgebra(factors, atoms_, gen_tuples, element_budget);
    auto lind = std::make_shared<LindenbaumAlgebra>();
    lind->algebra = std::move(gen.algebra);
    lind->coordinates = std::move(coords);
    lind->tuples = std::move(gen.tuples);
    lind->witness_terms = std::move(gen.witness_terms);
    lind->generator_image.resize(atoms_.size());
    for (size_t p = 0; p < atoms_.size(); ++p) {
      // generators were interned first, in atom order, deduplicated
      for (size_t e = 0; e < lind->tuples.size(); ++e)
        if (lind->tuples[e] == gen_tuples[p]) {
          lind->generator_image[p] = static_cast<int>(e);
          break;
        }
    }
    cache_->lind = std::move(lind);
  }
  return *cache_->lind;
}

namespace {

GenAssignment model_env(const PresentedLogic& logic, const ModelPresentation& m) {
  return GenAssignment{logic.atoms(), m.assignment};
}

void require_atoms(const PresentedLogic& logic, const Formula& f) {
  for (const auto& a : f.atoms())
    if (logic.atom_index(a) < 0) throw Error("UnknownAtom", a + " not an atom of " + logic.name());
}

}  // namespace

int meaning(const PresentedLogic& logic, const ModelPresentation& m, const Formula& f) {
  require_atoms(logic, f);
  return evaluate(*m.algebra, f, model_env(logic, m));
}

bool is_valid(const PresentedLogic& logic, const ModelPresentation& m, const Formula& f) {
  return m.designates(meaning(logic, m, f));
}

bool taut_equivalent(const PresentedLogic& logic, const Formula& phi, const Formula& psi) {
  for (const auto& m : logic.models())
    if (meaning(logic, m, phi) != meaning(logic, m, psi)) return false;
  return true;
}

int evaluate_in_lindenbaum(const PresentedLogic& logic, const Formula& f) {
  require_atoms(logic, f);
  const auto& lind = logic.lindenbaum();
  return evaluate(lind.algebra, f, GenAssignment{logic.atoms(), lind.generator_image});
}

namespace {

// Odometer over assignments of `labels` into alg, lexicographic by element
// index; returns false from the visitor to stop.
bool for_each_assignment(const FiniteAlgebra& alg, const std::vector<std::string>& labels,
                         size_t budget,
                         const std::function<bool(const GenAssignment&)>& visit) {
  double total = 1;
  for (size_t i = 0; i < labels.size(); ++i) {
    total *= alg.size();
    if (total > static_cast<double>(budget))
      throw Error("BudgetExceeded", "assignment space exceeds budget");
  }
  GenAssignment g{labels, std::vector<int>(labels.size(), 0)};
  for (;;) {
    if (!visit(g)) return false;
    size_t i = labels.size();
    while (i > 0) {
      if (++g.images[i - 1] < alg.size()) break;
      g.images[i - 1] = 0;
      --i;
    }
    if (i == 0) return true;
  }
}

}  // namespace

bool si_equivalent(const PresentedLogic& logic, const Formula& phi, const Formula& psi,
                   size_t budget) {
  require_atoms(logic, phi);
  require_atoms(logic, psi);
  std::set<std::string> atom_set = phi.atoms();
  psi.collect_atoms(atom_set);
  std::vector<std::string> labels(atom_set.begin(), atom_set.end());
  for (const auto& alg : logic.distinct_algebras()) {
    bool ok = for_each_assignment(*alg, labels, budget, [&](const GenAssignment& g) {
      return evaluate(*alg, phi, g) == evaluate(*alg, psi, g);
    });
    if (!ok) return false;
  }
  return true;
}

bool entails(const PresentedLogic& logic,
             const std::vector<std::pair<Formula, Formula>>& hypotheses,
             const std::pair<Formula, Formula>& goal, size_t budget) {
  std::set<std::string> atom_set = goal.first.atoms();
  goal.second.collect_atoms(atom_set);
  for (const auto& [l, r] : hypotheses) {
    l.collect_atoms(atom_set);
    r.collect_atoms(atom_set);
  }
  for (const auto& a : atom_set)
    if (logic.atom_index(a) < 0) throw Error("UnknownAtom", a);
  std::vector<std::string> labels(atom_set.begin(), atom_set.end());
  for (const auto& alg : logic.distinct_algebras()) {
    bool ok = for_each_assignment(*alg, labels, budget, [&](const GenAssignment& g) {
      for (const auto& [l, r] : hypotheses)
        if (evaluate(*alg, l, g) != evaluate(*alg, r, g)) return true;  // vacuous
      return evaluate(*alg, goal.first, g) == evaluate(*alg, goal.second, g);
    });
    if (!ok) return false;
  }
  return true;
}

bool kernel_contains_taut(const PresentedLogic& logic, const FiniteAlgebra& target,
                          const std::vector<int>& atom_images) {
  if (atom_images.size() != logic.atoms().size())
    throw Error("InvariantViolation", "atom assignment not total");
  if (!(target.signature() == logic.connectives()))
    throw Error("SignatureMismatch", "kernel_contains_taut target signature");
  const auto& lind = logic.lindenbaum();
  std::vector<std::pair<int, int>> anchor;
  for (size_t p = 0; p < atom_images.size(); ++p)
    anchor.emplace_back(lind.generator_image[p], atom_images[p]);
  return extend_to_hom(lind.algebra, target, anchor).has_value();
}

bool is_listed_meaning(const PresentedLogic& logic, const AlgebraPtr& target,
                       const std::vector<int>& atom_images) {
  for (const auto& m : logic.models())
    if (m.algebra == target && m.assignment == atom_images) return true;
  return false;
}

namespace {

nlohmann::json assignment_json(const PresentedLogic& logic, const AlgebraPtr& alg,
                               const std::vector<int>& images) {
  nlohmann::json j;
  j["algebra"] = alg->name();
  nlohmann::json map = nlohmann::json::object();
  for (size_t p = 0; p < logic.atoms().size(); ++p)
    map[logic.atoms()[p]] = alg->element_name(images[p]);
  j["assignment"] = map;
  return j;
}

}  // namespace

Verdict is_substitutional(const PresentedLogic& logic, size_t budget) {
  Verdict v;
  v.check = "is_substitutional@" + logic.name();
  v.condition = "substitution property";
  v.method = "enumerate atom assignments into each model algebra; each must be listed";
  v.holds = true;
  (void)budget;
  for (const auto& alg : logic.distinct_algebras()) {
    // an assignment can be listed at most once per (algebra, assignment)
    // pair, so a witness shows up within the first models()+1 assignments
    size_t scan_limit = logic.models().size() + 1;
    size_t visited = 0;
    bool ok = for_each_assignment(*alg, logic.atoms(), SIZE_MAX, [&](const GenAssignment& g) {
      if (!is_listed_meaning(logic, alg, g.images)) {
        v.holds = false;
        v.witness = assignment_json(logic, alg, g.images);
        v.witness["why"] = "a homomorphism into a meaning algebra that is no listed meaning function";
        return false;
      }
      return ++visited < scan_limit;
    });
    if (!v.holds) break;
    // more distinct listed assignments than models cannot exist
    if (!ok) throw Error("InvariantViolation", "pigeonhole scan bound violated");
  }
  return v;
}

Verdict is_cond_substitutional(const PresentedLogic& logic, size_t budget) {
  Verdict v;
  v.check = "is_cond_substitutional@" + logic.name();
  v.condition = "conditional substitution property";
  v.method =
      "enumerate homomorphisms from the Lindenbaum algebra into each model algebra; "
      "each induced atom assignment must be listed";
  v.holds = true;
  (void)budget;
  const auto& lind = logic.lindenbaum();
  std::vector<int> gens;
  for (int g : lind.generator_image)
    if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  for (const auto& alg : logic.distinct_algebras()) {
    bool stopped = false;
    enumerate_algebra_homs(lind.algebra, *alg, gens, {}, [&](const std::vector<int>& hom) {
      std::vector<int> images(logic.atoms().size());
      for (size_t p = 0; p < images.size(); ++p) images[p] = hom[lind.generator_image[p]];
      if (!is_listed_meaning(logic, alg, images)) {
        v.holds = false;
        v.witness = assignment_json(logic, alg, images);
        v.witness["why"] = "kernel contains the tautological congruence but no model lists it";
        stopped = true;
        return false;
      }
      return true;
    });
    if (stopped) break;
  }
  return v;
}

Correspondence meaning_correspondence(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                      const std::vector<std::string>& labels,
                                      const std::vector<std::pair<int, int>>& anchor,
                                      size_t element_budget) {
  std::vector<AlgebraPtr> factors{std::make_shared<FiniteAlgebra>(a),
                                  std::make_shared<FiniteAlgebra>(b)};
  std::vector<std::vector<int>> gens;
  gens.reserve(anchor.size());
  for (auto [x, y] : anchor) gens.push_back({x, y});
  auto sub = generated_product_subalgebra(factors, labels, gens, element_budget);

  Correspondence c;
  c.pairs.reserve(sub.tuples.size());
  for (const auto& t : sub.tuples) c.pairs.emplace_back(t[0], t[1]);
  for (size_t i = 0; i < c.pairs.size(); ++i)
    for (size_t j = i + 1; j < c.pairs.size(); ++j) {
      bool clash_first = c.pairs[i].first == c.pairs[j].first;
      bool clash_second = c.pairs[i].second == c.pairs[j].second;
      if (clash_first || clash_second) {  // tuples are distinct, so this breaks the bijection
        c.ok = false;
        c.clash_lhs = sub.witness_terms[i];
        c.clash_rhs = sub.witness_terms[j];
        return c;
      }
    }
  c.ok = true;
  return c;
}

Verdict check_reduct(const PresentedLogic& part, const PresentedLogic& whole,
                     const std::map<std::string, std::string>& model_map) {
  Verdict v;
  v.check = "check_reduct@" + part.name() + "<=" + whole.name();
  v.condition = "reduct";
  v.method = "anchored meaning correspondences per model; probe restriction of ~";
  v.holds = false;

  for (const auto& p : part.atoms())
    if (whole.atom_index(p) < 0) {
      v.witness = {{"error", "InvariantViolation"}, {"missing_atom", p}};
      return v;
    }

  // model_map total on whole's labels, onto part's labels
  std::set<std::string> covered;
  for (const auto& m : whole.models()) {
    auto it = model_map.find(m.label);
    if (it == model_map.end()) {
      v.witness = {{"error", "NotSurjective"}, {"unmapped_model", m.label}};
      return v;
    }
    if (!part.model_by_label(it->second)) {
      v.witness = {{"error", "NotSurjective"}, {"unknown_part_model", it->second}};
      return v;
    }
    covered.insert(it->second);
  }
  for (const auto& m : part.models())
    if (!covered.count(m.label)) {
      v.witness = {{"error", "NotSurjective"}, {"uncovered_part_model", m.label}};
      return v;
    }

  for (const auto& m : whole.models()) {
    const ModelPresentation& pm = *part.model_by_label(model_map.at(m.label));
    std::vector<std::pair<int, int>> anchor;
    for (size_t i = 0; i < part.atoms().size(); ++i)
      anchor.emplace_back(pm.assignment[i], m.assignment[whole.atom_index(part.atoms()[i])]);
    Correspondence c = meaning_correspondence(*pm.algebra, *m.algebra, part.atoms(), anchor);
    if (!c.ok) {
      v.witness = {{"error", "MeaningMismatch"},
                   {"whole_model", m.label},
                   {"part_model", pm.label},
                   {"lhs", format_formula(c.clash_lhs)},
                   {"rhs", format_formula(c.clash_rhs)}};
      return v;
    }
    for (size_t i = 0; i < c.pairs.size(); ++i) {
      if (pm.designates(c.pairs[i].first) != m.designates(c.pairs[i].second)) {
        v.witness = {{"error", "ValidityMismatch"},
                     {"whole_model", m.label},
                     {"part_model", pm.label},
                     {"meaning_element", pm.algebra->element_name(c.pairs[i].first)}};
        return v;
      }
    }
  }

  // ~^P = ~^Q restricted to F^P, asserted on a probe formula set
  auto probes = probe_formulas(part.connectives(), part.atoms(), 2, 120, 60, 4);
  for (size_t i = 0; i < probes.size(); ++i)
    for (size_t j = i + 1; j < std::min(probes.size(), i + 25); ++j) {
      bool in_part = taut_equivalent(part, probes[i], probes[j]);
      bool in_whole = taut_equivalent(whole, probes[i], probes[j]);
      if (in_part != in_whole) {
        v.witness = {{"error", "CongruenceRestrictionMismatch"},
                     {"lhs", format_formula(probes[i])},
                     {"rhs", format_formula(probes[j])},
                     {"part_equivalent", in_part},
                     {"whole_equivalent", in_whole}};
        return v;
      }
    }

  v.holds = true;
  return v;
}

namespace {

void random_formula(std::mt19937_64& rng, const Signature& sig,
                    const std::vector<std::string>& atoms, int depth, Formula& out) {
  std::vector<int> nullary;
  for (size_t i = 0; i < sig.ops().size(); ++i)
    if (sig.ops()[i].arity == 0) nullary.push_back(static_cast<int>(i));
  size_t leaves = atoms.size() + nullary.size();
  if (depth <= 0 || (rng() % 4 == 0 && leaves > 0)) {
    size_t pick = rng() % leaves;
    if (pick < atoms.size())
      out = Formula::atom(atoms[pick]);
    else
      out = Formula::app(sig.ops()[nullary[pick - atoms.size()]].name, {});
    return;
  }
  size_t op = rng() % sig.ops().size();
  int k = sig.ops()[op].arity;
  if (k == 0) {
    out = Formula::app(sig.ops()[op].name, {});
    return;
  }
  std::vector<Formula> args(k);
  for (int i = 0; i < k; ++i) random_formula(rng, sig, atoms, depth - 1, args[i]);
  out = Formula::app(sig.ops()[op].name, std::move(args));
}

}  // namespace

std::vector<Formula> probe_formulas(const Signature& sig, const std::vector<std::string>& atoms,
                                    int exhaustive_depth, size_t exhaustive_cap,
                                    size_t random_count, int random_depth, uint64_t seed) {
  std::vector<Formula> out;
  std::set<std::string> seen;
  auto push = [&](const Formula& f) {
    if (out.size() >= exhaustive_cap) return false;
    if (seen.insert(format_formula(f)).second) out.push_back(f);
    return true;
  };

  std::vector<std::string> probe_atoms(atoms.begin(),
                                       atoms.begin() + std::min<size_t>(atoms.size(), 3));
  size_t level_start = 0;
  for (const auto& a : probe_atoms) push(Formula::atom(a));
  for (const auto& op : sig.ops())
    if (op.arity == 0) push(Formula::app(op.name, {}));

  for (int d = 0; d < exhaustive_depth && out.size() < exhaustive_cap; ++d) {
    size_t level_end = out.size();
    for (const auto& op : sig.ops()) {
      int k = op.arity;
      if (k == 0) continue;
      std::vector<size_t> pick(k, 0);
      for (;;) {
        bool fresh = false;  // at least one argument from the newest level
        for (int i = 0; i < k; ++i)
          if (pick[i] >= level_start) fresh = true;
        if (fresh || d == 0) {
          std::vector<Formula> args;
          for (int i = 0; i < k; ++i) args.push_back(out[pick[i]]);
          if (!push(Formula::app(op.name, std::move(args)))) break;
        }
        int i = k - 1;
        while (i >= 0 && ++pick[i] == level_end) pick[i--] = 0;
        if (i < 0) break;
      }
      if (out.size() >= exhaustive_cap) break;
    }
    level_start = level_end;
  }

  if (!probe_atoms.empty() || sig.ops().size() > 0) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> rand_atoms = probe_atoms.empty()
                                              ? std::vector<std::string>{}
                                              : probe_atoms;
    bool has_leaf = !rand_atoms.empty();
    for (const auto& op : sig.ops())
      if (op.arity == 0) has_leaf = true;
    if (has_leaf) {
      for (size_t i = 0; i < random_count; ++i) {
        Formula f;
        random_formula(rng, sig, rand_atoms, random_depth, f);
        if (seen.insert(format_formula(f)).second) out.push_back(f);
      }
    }
  }
  return out;
}

}  // namespace ualw
