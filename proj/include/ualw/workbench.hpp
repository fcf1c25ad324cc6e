#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ualw/family.hpp"
#include "ualw/fol.hpp"
#include "ualw/logic.hpp"

namespace ualw {

struct RunOptions {
  int jobs = 0;           // 0 = OpenMP default, 1 = serial reference
  int max_size = -1;      // override for generated fol model families (-1 = as declared)
  size_t budget = kDefaultCoordinateBudget;
  size_t element_budget = kDefaultElementBudget;
  std::string format = "json";  // json | text
  bool timings = false;
};

/// One entry of the checks-to-run block.  `expect` is the expected holds
/// value (defaults to true); a run meets expectations when every check's
/// verdict matches its expectation.
struct CheckSpec {
  std::string kind;
  nlohmann::json params;
  bool expect = true;
};

struct Workbench {
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, LogicPtr> logics;
  std::map<std::string, FolLogic> fol_logics;
  std::map<std::string, FamilyInstance> instances;
  std::map<std::string, FolFamilyInstance> fol_instances;
  std::vector<CheckSpec> checks;

  const LogicPtr& logic(const std::string& name) const;
  const FolLogic& fol(const std::string& name) const;
  const AlgebraPtr& algebra(const std::string& name) const;
};

Workbench parse_workbench(const nlohmann::json& j, const RunOptions& opt = RunOptions{});
Workbench load_workbench(const std::string& path, const RunOptions& opt = RunOptions{});

/// Executes one declared check; the verdict's `holds` is the measured truth
/// (size/value checks fold the comparison into `holds`).
Verdict run_check(const Workbench& wb, const CheckSpec& spec, const RunOptions& opt);

struct CheckOutcome {
  Verdict verdict;
  bool expect = true;
  bool met = false;
  double millis = 0;
};
std::vector<CheckOutcome> run_all_checks(const Workbench& wb, const RunOptions& opt);

}  // namespace ualw
