#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ualw/report.hpp"
#include "ualw/scenarios.hpp"

using namespace ualw;

namespace {

std::string render(const ScenarioRun& run) {
  std::ostringstream os;
  RunOptions opt;
  emit_report(os, run.outcomes, run.fixture_digest, opt);
  return os.str();
}

}  // namespace

TEST_CASE("every registered scenario meets its expectations") {
  for (const auto& s : scenarios()) {
    INFO(s.name);
    ScenarioRun run = run_scenario(s.name, RunOptions{}, UALW_TEST_SCENARIO_DIR);
    for (const auto& o : run.outcomes) {
      INFO(o.verdict.check << " holds=" << o.verdict.holds << " expected=" << o.expect);
      CHECK(o.met);
    }
  }
}

TEST_CASE("scenario runs are deterministic") {
  ScenarioRun a = run_scenario("dialectic", RunOptions{}, UALW_TEST_SCENARIO_DIR);
  ScenarioRun b = run_scenario("dialectic", RunOptions{}, UALW_TEST_SCENARIO_DIR);
  CHECK(render(a) == render(b));

  // parallel execution must not change a verdict or witness
  RunOptions serial;
  serial.jobs = 1;
  ScenarioRun c = run_scenario("mod7-no-family", RunOptions{}, UALW_TEST_SCENARIO_DIR);
  ScenarioRun d = run_scenario("mod7-no-family", serial, UALW_TEST_SCENARIO_DIR);
  CHECK(render(c) == render(d));
}

TEST_CASE("unknown scenarios are rejected") {
  CHECK_THROWS_WITH_AS(run_scenario("no-such", RunOptions{}), doctest::Contains("UnknownScenario"),
                       Error);
}
