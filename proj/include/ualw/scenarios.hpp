#pragma once

#include <string>
#include <vector>

#include "ualw/report.hpp"
#include "ualw/workbench.hpp"

namespace ualw {

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::string fixture;  // file under the scenario directory
};

const std::vector<ScenarioInfo>& scenarios();
std::string default_scenario_dir();

struct ScenarioRun {
  std::vector<CheckOutcome> outcomes;
  std::string fixture_digest;
};

/// Loads the scenario fixture, runs its declared checks and the scenario's
/// extra assertions; every outcome carries its expectation.
ScenarioRun run_scenario(const std::string& name, const RunOptions& opt,
                         std::string scenario_dir = "");

}  // namespace ualw
