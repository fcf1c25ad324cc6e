#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ualw/logic.hpp"
#include "ualw/parallel.hpp"

namespace ualw {

/// Assignment sets over ^V M.  Cell index is mixed radix with v0 least
/// significant: cell = sum_i h(v_i) * m^i.  Relation tuples use the same
/// convention (first component least significant).
struct Bitset {
  std::vector<uint64_t> w;
  size_t bits = 0;

  explicit Bitset(size_t nbits = 0) : w((nbits + 63) / 64, 0), bits(nbits) {}
  bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
  bool empty() const;
  size_t count() const;

  friend bool operator==(const Bitset& a, const Bitset& b) { return a.bits == b.bits && a.w == b.w; }
  friend bool operator<(const Bitset& a, const Bitset& b) { return a.w < b.w; }
  Bitset operator&(const Bitset& o) const;
  Bitset operator|(const Bitset& o) const;
  Bitset complement() const;  // within the universe of `bits` cells
};

struct SimilarityType {
  std::vector<std::pair<std::string, int>> relations;  // (name, arity >= 1)

  int arity_of(const std::string& name) const;
  int index_of(const std::string& name) const;
};

struct FOModel {
  int size = 0;
  std::vector<Bitset> relations;  // per relation, over size^arity tuple cells

  bool holds(int rel, const std::vector<int>& tuple, const SimilarityType& t) const;
};

/// Connectives of the k-variable first-order fragment: and, not, bot, E<i>
/// (existential quantifier on v_i, unary) and eq<i><j> (v_i = v_j, nullary,
/// i < j).
Signature fol_signature(int k);
std::string fol_atom_name(const std::string& rel, const std::vector<int>& idx);
std::string fol_eq_name(int i, int j);

/// All atoms r[i0,...,i_{n-1}] in relation order, index tuples lexicographic.
std::vector<std::string> fol_atoms(const SimilarityType& t, int k);

/// Parse an atom name back into (relation index, variable indices).
std::optional<std::pair<int, std::vector<int>>> parse_fol_atom(const std::string& name,
                                                               const SimilarityType& t);

/// Meaning of a formula in a model as an assignment set; the structural
/// reference evaluator.
Bitset eval_meaning(const FOModel& model, const SimilarityType& t, int k, const Formula& f);

/// Concept algebra of a model: the subalgebra of the full set algebra over
/// ^V M generated by the atomic meanings, with intersection, complement,
/// empty set, cylindrifications and diagonals.
struct ConceptAlgebra {
  AlgebraPtr algebra;
  std::vector<Bitset> elements;   // element index -> assignment set
  std::vector<int> atom_meaning;  // fol atom index -> element index
  int m = 0, k = 0;

  int element_of(const Bitset& b) const;  // -1 if not present
  int full_element() const;
};
ConceptAlgebra build_concept_algebra(const FOModel& model, const SimilarityType& t, int k,
                                     size_t element_budget = kDefaultElementBudget);

/// Presented k-variable first-order logic over explicit finite models.
/// Validity is the filter {full set}.
struct FolLogic {
  LogicPtr logic;
  SimilarityType type;
  int k = 0;
  std::vector<FOModel> fomodels;         // aligned with logic->models()
  std::vector<ConceptAlgebra> concepts;  // aligned with logic->models()
};
FolLogic build_presented_fol(const std::vector<FOModel>& models,
                             const std::vector<std::string>& labels, const SimilarityType& t,
                             int k, size_t element_budget = kDefaultElementBudget,
                             const std::string& name = "fol");

/// Enumeration of all models of a similarity type up to a size bound.  Codes
/// are deterministic: sizes ascending, then the relation-membership bits as
/// an integer (relation-major, tuple cells ascending, first cell least
/// significant).
struct BoundedModelSpace {
  SimilarityType t;
  int max_size = 0;

  uint64_t models_of_size(int m) const;  // 2^(sum of m^arity)
  uint64_t total() const;
  std::pair<int, uint64_t> locate(uint64_t index) const;  // (size, code)
  FOModel decode(int m, uint64_t code) const;
};

struct BoundedResult {
  bool refuted = false;
  int checked_up_to = 0;
  FOModel model;                 // set when refuted
  uint64_t model_index = 0;      // global enumeration index
  std::vector<int> assignment;   // v_i -> element, the least differing cell
};

/// Sound refutation oracle: Refuted results are exact and replayable;
/// VerifiedUpTo(maxSize) is bounded evidence, not proof.
BoundedResult taut_equivalent_bounded(const SimilarityType& t, int k, const Formula& phi,
                                      const Formula& psi, int max_size,
                                      ExecPolicy policy = ExecPolicy{});

/// True iff the pair is in ker(mng) of the model (same meanings).
bool pair_in_kernel(const FOModel& model, const SimilarityType& t, int k, const Formula& phi,
                    const Formula& psi);

/// Rewrites an atomic formula r[i0..i_{n-1}] into a taut-equivalent formula
/// whose only atom is the restricted r[0,...,n-1], chaining one spare
/// variable at a time.  Throws NoSpareVariables when impossible.
Formula restricted_rewrite(const std::string& rel, const std::vector<int>& idx, int n, int k);
bool is_restricted(const Formula& f, const SimilarityType& t);

/// One-shot variant binding all n fresh variables at once (lowest index
/// first); nullopt when not enough variables exist.
std::optional<Formula> simultaneous_rewrite(const std::string& rel, const std::vector<int>& idx,
                                            int n, int k);

struct DtPairs {
  struct Entry {
    Formula lhs, rhs;
    char tag;  // 'S' or 'E'
  };
  std::vector<Entry> entries;
  std::vector<std::string> skipped_atoms;  // E-entries lacking fresh variables
};
/// The k-variable fragment of D(t) = union of S(r) and E(r).
DtPairs generate_Dt(const SimilarityType& t, int k);

/// Delta(a) = variables whose cylindrification changes a; a is regular iff
/// membership depends only on the restriction to Delta(a).
std::vector<int> delta_set(const ConceptAlgebra& ca, int element);
bool is_regular(const ConceptAlgebra& ca, int element);

/// Converse of a binary assignment set: cell (u,v) -> (v,u).  k must be 2.
Bitset converse(const Bitset& b, int m);

}  // namespace ualw
