#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ualw/algebra.hpp"
#include "ualw/term.hpp"
#include "ualw/verdict.hpp"

namespace ualw {

constexpr uint64_t kProbeSeed = 0xA16EB7A;       // fixed seed for probe corpora
constexpr size_t kDefaultElementBudget = 1u << 20;
constexpr size_t kDefaultCoordinateBudget = 1000000;

/// One model of a presented logic: target algebra, atom assignment (aligned
/// with the logic's atom order) and the designated validity filter.
struct ModelPresentation {
  std::string label;
  AlgebraPtr algebra;
  std::vector<int> assignment;  // atom index -> element
  std::vector<int> designated;  // sorted element list

  bool designates(int e) const;
};

/// Lindenbaum-Tarski algebra of a presented logic: the subalgebra of the
/// product of all model algebras generated by the atom meaning tuples.  Two
/// formulas evaluate equally here iff they are taut-equivalent.
struct LindenbaumAlgebra {
  FiniteAlgebra algebra;
  std::vector<int> generator_image;        // atom index -> element
  std::vector<std::string> coordinates;    // model labels, in model order
  std::vector<std::vector<int>> tuples;    // element -> meaning per model
  std::vector<Formula> witness_terms;      // element -> a realizing formula
};

/// A logic presented by finite data: atoms P, connectives Cn and a finite
/// nonempty model list.  Immutable after construction; the Lindenbaum algebra
/// is computed on demand and cached.
class PresentedLogic {
 public:
  PresentedLogic(std::string name, std::vector<std::string> atoms, Signature connectives,
                 std::vector<ModelPresentation> models);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const Signature& connectives() const { return connectives_; }
  const std::vector<ModelPresentation>& models() const { return models_; }

  int atom_index(const std::string& atom) const;  // -1 if absent
  std::set<std::string> atom_set() const;
  const ModelPresentation* model_by_label(const std::string& label) const;

  /// Model algebras deduplicated by object, first occurrence order.
  std::vector<AlgebraPtr> distinct_algebras() const;

  Formula parse(const std::string& text) const;

  const LindenbaumAlgebra& lindenbaum(size_t element_budget = kDefaultElementBudget) const;

 private:
  std::string name_;
  std::vector<std::string> atoms_;
  Signature connectives_;
  std::vector<ModelPresentation> models_;
  std::map<std::string, int> atom_index_;

  struct Cache {
    std::mutex m;
    std::shared_ptr<const LindenbaumAlgebra> lind;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

using LogicPtr = std::shared_ptr<const PresentedLogic>;

int meaning(const PresentedLogic& logic, const ModelPresentation& m, const Formula& f);
bool is_valid(const PresentedLogic& logic, const ModelPresentation& m, const Formula& f);

/// phi ~ psi : equal meanings in every listed model.
bool taut_equivalent(const PresentedLogic& logic, const Formula& phi, const Formula& psi);

int evaluate_in_lindenbaum(const PresentedLogic& logic, const Formula& f);

/// si(~): equal values under every assignment of the involved atoms into
/// every model algebra (the equational theory of the meaning algebras).
bool si_equivalent(const PresentedLogic& logic, const Formula& phi, const Formula& psi,
                   size_t budget = kDefaultCoordinateBudget);

/// H |- goal : in every model algebra, under every assignment, if all
/// hypothesis pairs evaluate equal then the goal pair does.
bool entails(const PresentedLogic& logic,
             const std::vector<std::pair<Formula, Formula>>& hypotheses,
             const std::pair<Formula, Formula>& goal,
             size_t budget = kDefaultCoordinateBudget);

/// ~ contained in ker(h) for the atom assignment h into target: decided by
/// extending {lindenbaum generator of p -> h(p)} to a homomorphism.
bool kernel_contains_taut(const PresentedLogic& logic, const FiniteAlgebra& target,
                          const std::vector<int>& atom_images);

/// A meaning function is identified by its target algebra object plus atom
/// assignment (model-slim presentations).
bool is_listed_meaning(const PresentedLogic& logic, const AlgebraPtr& target,
                       const std::vector<int>& atom_images);

Verdict is_substitutional(const PresentedLogic& logic,
                          size_t budget = kDefaultCoordinateBudget);
Verdict is_cond_substitutional(const PresentedLogic& logic,
                               size_t budget = kDefaultCoordinateBudget);

/// Anchored meaning correspondence between two models: the subalgebra of
/// A x B generated by paired anchor elements (plus constants) must be the
/// graph of a partial bijection.  Returns the pair list, or the two witness
/// terms mapping to a violation.
struct Correspondence {
  bool ok = false;
  std::vector<std::pair<int, int>> pairs;
  Formula clash_lhs, clash_rhs;  // set when !ok
};
Correspondence meaning_correspondence(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                      const std::vector<std::string>& labels,
                                      const std::vector<std::pair<int, int>>& anchor,
                                      size_t element_budget = kDefaultElementBudget);

/// Reduct check: P subset of Q, model_map maps every Q-model label onto the
/// P-model labels, meanings and validity agree on F^P (exact, via anchored
/// correspondences), and ~^P equals ~^Q restricted to F^P on a probe set.
Verdict check_reduct(const PresentedLogic& part, const PresentedLogic& whole,
                     const std::map<std::string, std::string>& model_map);

/// Deterministic probe corpus: breadth-first enumeration up to a depth and
/// cap, then seeded random formulas.
std::vector<Formula> probe_formulas(const Signature& sig, const std::vector<std::string>& atoms,
                                    int exhaustive_depth, size_t exhaustive_cap,
                                    size_t random_count, int random_depth,
                                    uint64_t seed = kProbeSeed);

}  // namespace ualw
