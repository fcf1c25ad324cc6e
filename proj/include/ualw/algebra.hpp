#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ualw/term.hpp"

namespace ualw {

/// Total operation tables over universe 0..n-1.  A table for a k-ary op is a
/// flat row-major array of size n^k; the first argument is most significant,
/// matching the nested-array layout in workbench files.
class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;
  FiniteAlgebra(Signature sig, int size, std::vector<std::vector<int>> tables,
                std::string name = "", std::vector<std::string> element_names = {});

  const Signature& signature() const { return sig_; }
  int size() const { return size_; }
  const std::string& name() const { return name_; }

  const std::vector<int>& table(int op_index) const { return tables_[op_index]; }
  int apply(int op_index, const std::vector<int>& args) const;

  /// Element names are presentation sugar; defaults to decimal indices.
  const std::string& element_name(int e) const { return element_names_[e]; }
  int element_by_name(const std::string& n) const;  // -1 if absent

 private:
  Signature sig_;
  int size_ = 0;
  std::vector<std::vector<int>> tables_;
  std::string name_;
  std::vector<std::string> element_names_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

/// Generator assignment: ordered labels plus their images in some target algebra.
struct GenAssignment {
  std::vector<std::string> labels;
  std::vector<int> images;

  int image_of(const std::string& label) const;
  friend bool operator==(const GenAssignment& a, const GenAssignment& b) {
    return a.labels == b.labels && a.images == b.images;
  }
};

/// Value of the unique homomorphic extension of env at the given term.
int evaluate(const FiniteAlgebra& alg, const Formula& term, const GenAssignment& env);

/// Operation-compatible partition of 0..n-1.  Classes are named by their least
/// element; rep[e] is that representative.
struct Congruence {
  std::vector<int> rep;

  int classes() const;
  bool related(int a, int b) const { return rep[a] == rep[b]; }
  std::vector<std::vector<int>> class_list() const;

  friend bool operator==(const Congruence& a, const Congruence& b) { return a.rep == b.rep; }
};

/// Least congruence of alg merging each given pair.  Union-find seeded with
/// the pairs, then merge op-results of componentwise congruent argument
/// tuples to fixpoint.
Congruence congruence_generated(const FiniteAlgebra& alg,
                                const std::vector<std::pair<int, int>>& pairs);

/// Least subuniverse containing seeds, closed under all operations (constants
/// always included).  Returns the renumbered algebra together with the list
/// of original elements, ascending: element i of the subalgebra is
/// inclusion[i] in the parent.
struct Subalgebra {
  FiniteAlgebra algebra;
  std::vector<int> inclusion;
};
Subalgebra subalgebra_generated(const FiniteAlgebra& alg, const std::vector<int>& seeds);

/// Componentwise product; factor sizes multiply, so callers keep this small.
/// Element index is mixed radix with the first factor most significant.
FiniteAlgebra product(const std::vector<AlgebraPtr>& factors);

/// Quotient by a congruence; classes become elements ordered by least member.
struct Quotient {
  FiniteAlgebra algebra;
  std::vector<int> projection;  // parent element -> class index
};
Quotient quotient(const FiniteAlgebra& alg, const Congruence& cong);

/// Subalgebra of a product of factor algebras generated by explicit tuples,
/// built without materializing the product.  Elements are interned tuples in
/// closure (BFS) order: the generators first, then constants, then op results.
struct GeneratedProductSubalgebra {
  FiniteAlgebra algebra;
  std::vector<std::vector<int>> tuples;  // tuple of element i, one slot per factor
  std::vector<Formula> witness_terms;    // a term over generator labels realizing element i
};
GeneratedProductSubalgebra generated_product_subalgebra(
    const std::vector<AlgebraPtr>& factors,
    const std::vector<std::string>& generator_labels,
    const std::vector<std::vector<int>>& generator_tuples, size_t element_budget);

/// Backtracking search for homomorphisms determined by generator images.
/// Constraints are term pairs over the generators whose evaluations must
/// agree; relators and kernel constraints share this form.  Assignments are
/// produced in lexicographic order (label order, element index); the visitor
/// returns false to stop early.
struct HomSearchSpec {
  std::vector<std::string> generators;
  std::vector<std::pair<Formula, Formula>> relators;  // optional presentation
  std::vector<std::pair<Formula, Formula>> kernel_must_contain;
  GenAssignment partial;  // pre-pinned generator images
};
void enumerate_homs(const HomSearchSpec& spec, const FiniteAlgebra& target,
                    const std::function<bool(const GenAssignment&)>& visit);
std::vector<GenAssignment> enumerate_homs(const HomSearchSpec& spec,
                                          const FiniteAlgebra& target);

/// All homomorphisms source -> target, represented as full element maps.
/// Determined by images of a generating set; generating_set defaults to the
/// whole universe.  anchor pins images of some source elements.
void enumerate_algebra_homs(const FiniteAlgebra& source, const FiniteAlgebra& target,
                            const std::vector<int>& generating_set,
                            const std::vector<std::pair<int, int>>& anchor,
                            const std::function<bool(const std::vector<int>&)>& visit);

/// Extend anchor pairs to a homomorphism from the subalgebra generated by the
/// anchored elements into the target; nullopt on conflict.  map[e] is -1 for
/// unreached elements.
std::optional<std::vector<int>> extend_to_hom(const FiniteAlgebra& source,
                                              const FiniteAlgebra& target,
                                              const std::vector<std::pair<int, int>>& anchor);

/// Exhaustive anchored isomorphism search; nullopt is a proof of absence.
std::optional<std::vector<int>> find_isomorphism(
    const FiniteAlgebra& a, const FiniteAlgebra& b,
    const std::vector<std::pair<int, int>>& anchor = {});

bool is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     const std::vector<int>& map);

}  // namespace ualw
