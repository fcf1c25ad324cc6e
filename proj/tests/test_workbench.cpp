#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ualw/report.hpp"
#include "ualw/scenarios.hpp"
#include "ualw/workbench.hpp"

using namespace ualw;

namespace {

nlohmann::json minimal() {
  return nlohmann::json::parse(R"wb({
    "version": 1,
    "algebras": [
      {"name": "bool2", "elements": ["0", "1"],
       "ops": [
         {"name": "and", "arity": 2, "table": [["0","0"],["0","1"]]},
         {"name": "not", "arity": 1, "table": ["1","0"]},
         {"name": "bot", "arity": 0, "table": "0"}
       ]}
    ],
    "logics": [
      {"name": "L", "atoms": ["p"], "connectives": [["and",2],["not",1],["bot",0]],
       "models": [{"all_assignments": {"algebra": "bool2", "designated": ["1"]}}]}
    ],
    "checks": [
      {"check": "lindenbaum_size", "logic": "L", "size": 4},
      {"check": "taut_equivalent", "logic": "L", "lhs": "p", "rhs": "not(not(p))", "expect": true}
    ]
  })wb");
}

}  // namespace

TEST_CASE("parse a minimal workbench and run its checks") {
  Workbench wb = parse_workbench(minimal());
  CHECK(wb.logic("L")->models().size() == 2);
  CHECK(wb.logic("L")->models()[0].label == "bool2:0");
  auto outcomes = run_all_checks(wb, RunOptions{});
  CHECK(all_met(outcomes));
}

TEST_CASE("schema errors carry stable codes") {
  auto bad_version = minimal();
  bad_version["version"] = 2;
  CHECK_THROWS_WITH_AS(parse_workbench(bad_version), doctest::Contains("SchemaError"), Error);

  auto bad_element = minimal();
  bad_element["algebras"][0]["ops"][1]["table"] = {"1", "misnamed"};
  CHECK_THROWS_AS(parse_workbench(bad_element), Error);

  auto dup = minimal();
  dup["algebras"].push_back(dup["algebras"][0]);
  CHECK_THROWS_AS(parse_workbench(dup), Error);

  auto missing = minimal();
  missing["logics"][0].erase("atoms");
  CHECK_THROWS_AS(parse_workbench(missing), Error);

  CHECK_THROWS_AS(load_workbench("does_not_exist.wb.json"), Error);
}

TEST_CASE("validate accepts every checked-in scenario fixture") {
  for (const auto& s : scenarios()) {
    std::string path = std::string(UALW_TEST_SCENARIO_DIR) + "/" + s.fixture;
    CHECK_NOTHROW(load_workbench(path));
  }
}

TEST_CASE("reports are byte-identical across runs") {
  Workbench wb = parse_workbench(minimal());
  RunOptions opt;
  opt.format = "json";
  std::ostringstream a, b;
  emit_report(a, run_all_checks(wb, opt), "deadbeef", opt);
  emit_report(b, run_all_checks(wb, opt), "deadbeef", opt);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("\"type\":\"summary\"") != std::string::npos);

  // timings are opt-in precisely because they break byte-identity
  CHECK(a.str().find("timing") == std::string::npos);
}

TEST_CASE("digest is stable and input sensitive") {
  CHECK(digest_bytes("abc") == digest_bytes("abc"));
  CHECK(digest_bytes("abc") != digest_bytes("abd"));
}

TEST_CASE("unknown check kinds are input errors") {
  Workbench wb = parse_workbench(minimal());
  CheckSpec spec;
  spec.kind = "no_such_kind";
  CHECK_THROWS_AS(run_check(wb, spec, RunOptions{}), Error);
}
