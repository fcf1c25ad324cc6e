#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ualw/term.hpp"

using namespace ualw;

namespace {

Signature cpl_sig() {
  return Signature({{"and", 2}, {"not", 1}, {"bot", 0}});
}

}  // namespace

TEST_CASE("parse and format basic formulas") {
  Signature sig = cpl_sig();
  std::set<std::string> atoms{"p", "q"};

  Formula f = parse_formula("and(p, not(q))", sig, atoms);
  CHECK(f.head() == "and");
  CHECK(f.args()[0].is_atom());
  CHECK(format_formula(f) == "and(p,not(q))");

  CHECK(format_formula(parse_formula("bot", sig, atoms)) == "bot");
  CHECK(format_formula(parse_formula("not(bot)", sig, atoms)) == "not(bot)");
}

TEST_CASE("fol-style connectives: quantifier and diagonal constants") {
  Signature sig({{"and", 2}, {"not", 1}, {"bot", 0}, {"E0", 1}, {"E1", 1}, {"eq01", 0}});
  std::set<std::string> atoms{"R[0,1]"};
  Formula f = parse_formula("E0(eq01)", sig, atoms);
  CHECK(f.head() == "E0");
  CHECK(f.args()[0].head() == "eq01");
  CHECK(format_formula(f) == "E0(eq01)");

  Formula g = parse_formula("E1(and(eq01,R[0,1]))", sig, atoms);
  CHECK(format_formula(g) == "E1(and(eq01,R[0,1]))");
}

TEST_CASE("atoms are not applicable") {
  Signature sig = cpl_sig();
  std::set<std::string> atoms{"p", "q"};
  CHECK_THROWS_WITH_AS(parse_formula("p(q)", sig, atoms), doctest::Contains("SyntaxError"),
                       Error);
  CHECK_THROWS_AS(parse_formula("mystery(p)", sig, atoms), Error);
  CHECK_THROWS_AS(parse_formula("and(p)", sig, atoms), Error);
}

TEST_CASE("infix sugar is input only") {
  Signature sig = cpl_sig();
  std::set<std::string> atoms{"p", "q"};
  Formula f = parse_formula("(p and not(q))", sig, atoms);
  CHECK(format_formula(f) == "and(p,not(q))");
  CHECK(format_formula(parse_formula("((p))", sig, atoms)) == "p");
}

TEST_CASE("substitution is homomorphic and composes") {
  Signature sig = cpl_sig();
  std::set<std::string> atoms{"p", "q"};
  Formula pq = parse_formula("and(p,p)", sig, atoms);

  Substitution id = Substitution::identity_on(atoms);
  CHECK(apply_substitution(id, pq) == pq);

  Substitution s;
  s.map["p"] = parse_formula("not(q)", sig, atoms);
  s.map["q"] = Formula::atom("q");
  CHECK(format_formula(apply_substitution(s, pq)) == "and(not(q),not(q))");

  // apply_substitution(compose(s,t), f) == apply_substitution(t, apply_substitution(s, f))
  std::mt19937_64 rng(7);
  auto random_formula = [&](auto&& self, int depth) -> Formula {
    if (depth == 0 || rng() % 3 == 0) {
      switch (rng() % 3) {
        case 0: return Formula::atom("p");
        case 1: return Formula::atom("q");
        default: return Formula::app("bot", {});
      }
    }
    if (rng() % 2)
      return Formula::app("not", {self(self, depth - 1)});
    return Formula::app("and", {self(self, depth - 1), self(self, depth - 1)});
  };
  for (int trial = 0; trial < 200; ++trial) {
    Substitution t;
    t.map["p"] = random_formula(random_formula, 2);
    t.map["q"] = random_formula(random_formula, 2);
    Formula f = random_formula(random_formula, 4);
    CHECK(apply_substitution(compose(s, t), f) ==
          apply_substitution(t, apply_substitution(s, f)));
  }
}

TEST_CASE("round trip on a random corpus") {
  Signature sig = cpl_sig();
  std::set<std::string> atoms{"p", "q", "r"};
  std::mt19937_64 rng(0xA16EB7A);
  auto gen = [&](auto&& self, int depth) -> Formula {
    if (depth == 0 || rng() % 4 == 0) {
      switch (rng() % 4) {
        case 0: return Formula::atom("p");
        case 1: return Formula::atom("q");
        case 2: return Formula::atom("r");
        default: return Formula::app("bot", {});
      }
    }
    if (rng() % 2)
      return Formula::app("not", {self(self, depth - 1)});
    return Formula::app("and", {self(self, depth - 1), self(self, depth - 1)});
  };
  for (int i = 0; i < 10000; ++i) {
    Formula f = gen(gen, 6);
    CHECK(parse_formula(format_formula(f), sig, atoms) == f);
  }
}
