#include <iostream>

#include <CLI11.hpp>

#include "ualw/report.hpp"
#include "ualw/scenarios.hpp"
#include "ualw/workbench.hpp"

using namespace ualw;

namespace {

int exit_code(const std::vector<CheckOutcome>& outcomes) { return all_met(outcomes) ? 0 : 1; }

std::pair<Formula, Formula> parse_eq(const PresentedLogic& logic, const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw Error("SyntaxError", "expected 'lhs = rhs' in '" + text + "'");
  return {logic.parse(text.substr(0, eq)), logic.parse(text.substr(eq + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ualw: a workbench for finitely presented logics and logic families"};
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions opt;
  std::string scenario_dir;
  app.add_option("--jobs", opt.jobs, "worker threads (1 = serial reference)");
  app.add_option("--max-size", opt.max_size, "override for generated model families");
  app.add_option("--budget", opt.budget, "coordinate budget for enumeration-backed checks");
  app.add_option("--format", opt.format, "report format: json | text");
  app.add_flag("--timings", opt.timings, "include per-check timings in the report");
  app.add_option("--scenario-dir", scenario_dir, "scenario fixture directory");

  std::string file, logic_name, goal_text, pair_text, scenario_name;
  std::vector<std::string> hyp_texts;

  CLI::App* check = app.add_subcommand("check", "run the checks declared in a workbench file");
  check->add_option("file", file)->required();

  CLI::App* repro = app.add_subcommand("repro", "replay a named scenario");
  repro->add_option("name", scenario_name)->required();

  CLI::App* list = app.add_subcommand("list-scenarios", "list registered scenarios");

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a workbench file");
  validate->add_option("file", file)->required();

  CLI::App* lind = app.add_subcommand("lindenbaum", "print the Lindenbaum-Tarski algebra of a logic");
  lind->add_option("file", file)->required();
  lind->add_option("--logic", logic_name)->required();

  CLI::App* entails_cmd = app.add_subcommand("entails", "evaluate an entailment query");
  entails_cmd->add_option("file", file)->required();
  entails_cmd->add_option("--logic", logic_name)->required();
  entails_cmd->add_option("--hyp", hyp_texts, "hypothesis pairs, each 'lhs = rhs'");
  entails_cmd->add_option("--goal", goal_text, "goal pair 'lhs = rhs'")->required();

  CLI::App* si_cmd = app.add_subcommand("si", "evaluate a substitution-invariant equivalence query");
  si_cmd->add_option("file", file)->required();
  si_cmd->add_option("--logic", logic_name)->required();
  si_cmd->add_option("--pair", pair_text, "query pair 'lhs = rhs'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& s : scenarios()) std::cout << s.name << "  " << s.description << "\n";
      return 0;
    }
    if (*repro) {
      ScenarioRun run = run_scenario(scenario_name, opt, scenario_dir);
      emit_report(std::cout, run.outcomes, run.fixture_digest, opt);
      return exit_code(run.outcomes);
    }
    if (*check) {
      Workbench wb = load_workbench(file, opt);
      auto outcomes = run_all_checks(wb, opt);
      emit_report(std::cout, outcomes, digest_file(file), opt);
      return exit_code(outcomes);
    }
    if (*validate) {
      load_workbench(file, opt);
      std::cout << "ok: " << file << " (digest " << digest_file(file) << ")\n";
      return 0;
    }
    if (*lind) {
      Workbench wb = load_workbench(file, opt);
      const auto& logic = wb.logic(logic_name);
      const auto& l = logic->lindenbaum(opt.element_budget);
      std::cout << "size: " << l.algebra.size() << "\n";
      std::cout << "coordinates:";
      for (const auto& c : l.coordinates) std::cout << " " << c;
      std::cout << "\ngenerators:\n";
      for (size_t p = 0; p < logic->atoms().size(); ++p)
        std::cout << "  " << logic->atoms()[p] << " -> " << l.generator_image[p] << "  ("
                  << format_formula(l.witness_terms[l.generator_image[p]]) << ")\n";
      for (size_t op = 0; op < l.algebra.signature().ops().size(); ++op) {
        std::cout << "op " << l.algebra.signature().ops()[op].name << ":";
        for (int v : l.algebra.table(op)) std::cout << " " << v;
        std::cout << "\n";
      }
      return 0;
    }
    if (*entails_cmd || *si_cmd) {
      Workbench wb = load_workbench(file, opt);
      const auto& logic = wb.logic(logic_name);
      bool holds;
      if (*entails_cmd) {
        std::vector<std::pair<Formula, Formula>> hyps;
        for (const auto& h : hyp_texts) hyps.push_back(parse_eq(*logic, h));
        holds = entails(*logic, hyps, parse_eq(*logic, goal_text), opt.budget);
      } else {
        auto [l, r] = parse_eq(*logic, pair_text);
        holds = si_equivalent(*logic, l, r, opt.budget);
      }
      std::cout << (holds ? "true" : "false") << "\n";
      return holds ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
