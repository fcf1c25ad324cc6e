#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ualw/fol.hpp"
#include "ualw/logic.hpp"
#include "ualw/verdict.hpp"

namespace ualw {

/// A labeled part of a family instance: its logic, its atoms (a subset of
/// the union logic's atoms) and the reduct map from union model labels onto
/// part model labels.
struct FamilyPart {
  std::string label;
  LogicPtr logic;
  std::map<std::string, std::string> model_map;  // union label -> part label
};

/// An HSP membership witness: a chain product-of-bases -> subalgebra ->
/// surjective image.  Every step is verified, never trusted.
struct HSPWitness {
  std::vector<AlgebraPtr> bases;
  std::vector<int> subalgebra;  // element selection in the product
  std::vector<int> surjection;  // selection position -> element of claimed
  AlgebraPtr claimed;
};

struct Renaming {
  std::string from_part, to_part;
  std::map<std::string, std::string> atom_map;
};

/// Finite probe into a logic family: per-part logics plus the union logic.
struct FamilyInstance {
  std::string name;
  LogicPtr union_logic;
  std::vector<FamilyPart> parts;
  std::vector<Renaming> renamings;
  // optional: per part label, defining relation sets S_i with
  // Mng^{P_i} = Hom(F, Alg_m, S_i)
  std::map<std::string, std::vector<std::pair<Formula, Formula>>> defining_relations;
  std::optional<std::pair<HSPWitness, std::vector<int>>> refute_4b;  // witness + atom images
  size_t coordinate_budget = kDefaultCoordinateBudget;
  size_t element_budget = kDefaultElementBudget;

  const FamilyPart* part_by_label(const std::string& label) const;
  std::vector<std::string> part_atoms(const FamilyPart& p) const;
};

/// Condition (4) by hom enumeration: every assignment of the union atoms
/// into a union model algebra whose kernel contains every part's tautological
/// congruence also contains the union's.  Cross-checked against the
/// free-product characterization (families of part-Lindenbaum homomorphisms
/// must share a common extension).
Verdict check_4(const FamilyInstance& inst);

/// The free-product form alone (used for the agreement property).
Verdict check_4_free_product(const FamilyInstance& inst);

/// Condition (4b), exact mode: compare the congruences generated on
/// Fr(Alg_m(L^P), P) by the transferred union congruence and by the union of
/// the transferred part congruences.  When refutation data is present it is
/// verified as well and enriches a failing verdict.
Verdict check_4b(const FamilyInstance& inst);

/// Condition (4a) on probe pairs; refutable only.
Verdict check_4a(const FamilyInstance& inst,
                 const std::vector<std::pair<Formula, Formula>>& probes);

/// Patchwork property for one choice of part models (labels per part, in
/// part order).  Parts may overlap; the hypothesis (agreement on shared
/// formulas) is checked exactly and its failure raises IncompatibleParts.
Verdict patchwork_check(const FamilyInstance& inst,
                        const std::vector<std::string>& part_models);

/// Renaming check (6a): does the atom bijection extend to an isomorphism of
/// the Lindenbaum algebras, and if so, is Mng^P = { g o b : g in Mng^Q }?
Verdict meaning_iso_check(const std::map<std::string, std::string>& bijection,
                          const PresentedLogic& lp, const PresentedLogic& lq);

/// Conditions (1)-(5) bundle; (5) is instance-level (supplied renamings).
std::vector<Verdict> check_family(const FamilyInstance& inst);

/// The disjoint-union family construction: copies x I of a conditionally
/// substitutional base logic, models the I-tuples of base models sharing a
/// target algebra.  copies >= 1.
FamilyInstance family_from_logic(const PresentedLogic& base, int copies);

/// Verifies Mng^{P_i} = Hom(F, Alg_m, S_i) by enumeration, then compares the
/// union Lindenbaum algebra against the conditionally free algebra with
/// conditions the union of the S_i (anchored isomorphism).  Requires
/// defining_relations for every part.
Verdict check_defining_relations(const FamilyInstance& inst);

/// ---- Streamed first-order instances -------------------------------------
/// The finite-variable fragments are presented with generated model families
/// (all models of the type up to max_size) plus explicit extras; the union
/// side is streamed, never materialized.  check_4 here verifies a supplied
/// witness exactly, part by part and through the separating pair.
struct FolFamilyInstance {
  std::string name;
  SimilarityType type;  // union similarity type; parts partition its relations
  int k = 0;
  int max_size = 0;  // generated models 1..max_size (0 = explicit only)
  std::vector<FOModel> extra_models;
  std::vector<std::string> extra_labels;
  std::vector<SimilarityType> part_types;

  struct Hint {
    std::string target_label;               // explicit model whose concept algebra hosts h
    std::map<std::string, Bitset> h_atoms;  // union atom -> assignment set
    Formula pair_lhs, pair_rhs;
  };
  std::optional<Hint> hint;
};

Verdict check_4_fol(const FolFamilyInstance& inst, ExecPolicy policy = ExecPolicy{});
std::vector<Verdict> check_family_fol(const FolFamilyInstance& inst,
                                      ExecPolicy policy = ExecPolicy{});

}  // namespace ualw
