#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ualw/algebra.hpp"

using namespace ualw;

namespace {

// The dialectic algebra B: universe {T,F,D} as 0,1,2; not swaps T,F and
// fixes D.
AlgebraPtr algebra_B() {
  Signature sig({{"not", 1}});
  return std::make_shared<FiniteAlgebra>(sig, 3, std::vector<std::vector<int>>{{1, 0, 2}}, "B",
                                         std::vector<std::string>{"T", "F", "D"});
}

AlgebraPtr boolean_fragment() {
  Signature sig({{"and", 2}, {"not", 1}, {"bot", 0}});
  return std::make_shared<FiniteAlgebra>(
      sig, 2, std::vector<std::vector<int>>{{0, 0, 0, 1}, {1, 0}, {0}}, "bool2");
}

// Independent oracle for congruence generation: enumerate all partitions of
// the universe (restricted growth strings), keep the compatible ones
// containing the pairs, and return their meet.
std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(n, 0);
  auto emit = [&]() { out.push_back(rgs); };
  std::function<void(int, int)> rec = [&](int i, int maxblock) {
    if (i == n) {
      emit();
      return;
    }
    for (int b = 0; b <= maxblock + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(maxblock, b));
    }
  };
  rec(0, -1);
  return out;
}

bool partition_compatible(const FiniteAlgebra& alg, const std::vector<int>& block) {
  int n = alg.size();
  for (size_t op = 0; op < alg.signature().ops().size(); ++op) {
    int k = alg.signature().ops()[op].arity;
    if (k == 0) continue;
    size_t total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    for (size_t ia = 0; ia < total; ++ia)
      for (size_t ib = 0; ib < total; ++ib) {
        size_t ta = ia, tb = ib;
        bool congruent = true;
        std::vector<int> argsa(k), argsb(k);
        for (int i = k - 1; i >= 0; --i) {
          argsa[i] = static_cast<int>(ta % n);
          argsb[i] = static_cast<int>(tb % n);
          ta /= n;
          tb /= n;
          if (block[argsa[i]] != block[argsb[i]]) congruent = false;
        }
        if (congruent &&
            block[alg.apply(static_cast<int>(op), argsa)] !=
                block[alg.apply(static_cast<int>(op), argsb)])
          return false;
      }
  }
  return true;
}

Congruence oracle_congruence(const FiniteAlgebra& alg,
                             const std::vector<std::pair<int, int>>& pairs) {
  int n = alg.size();
  std::vector<std::vector<int>> keep;
  for (const auto& block : all_partitions(n)) {
    bool contains = true;
    for (auto [a, b] : pairs)
      if (block[a] != block[b]) contains = false;
    if (contains && partition_compatible(alg, block)) keep.push_back(block);
  }
  REQUIRE(!keep.empty());
  // meet of all kept partitions: a ~ b iff related in every kept partition
  Congruence c;
  c.rep.resize(n);
  for (int e = 0; e < n; ++e) {
    int rep = e;
    for (int f = 0; f < e; ++f) {
      bool everywhere = true;
      for (const auto& block : keep)
        if (block[e] != block[f]) everywhere = false;
      if (everywhere) {
        rep = f;
        break;
      }
    }
    c.rep[e] = c.rep[rep];
    if (rep == e) c.rep[e] = e;
  }
  return c;
}

}  // namespace

TEST_CASE("evaluate: homomorphic extension") {
  auto bool2 = boolean_fragment();
  std::set<std::string> noatoms;
  Formula nb = parse_formula("not(bot)", bool2->signature(), noatoms);
  CHECK(evaluate(*bool2, nb, GenAssignment{}) == 1);

  auto B = algebra_B();
  std::set<std::string> atoms{"N", "D"};
  Formula nnN = parse_formula("not(not(N))", B->signature(), atoms);
  CHECK(evaluate(*B, nnN, GenAssignment{{"N"}, {0}}) == 0);  // T
  Formula nD = parse_formula("not(D)", B->signature(), atoms);
  CHECK(evaluate(*B, nD, GenAssignment{{"D"}, {2}}) == 2);  // D fixed

  CHECK_THROWS_AS(evaluate(*B, Formula::atom("Z"), GenAssignment{{"N"}, {0}}), Error);
}

TEST_CASE("congruence_generated: examples") {
  auto bool2 = boolean_fragment();
  Congruence all2 = congruence_generated(*bool2, {{0, 1}});
  CHECK(all2.classes() == 1);

  auto B = algebra_B();
  Congruence id = congruence_generated(*B, {});
  CHECK(id.classes() == 3);

  // B with (T,F) merged: partition {{T,F},{D}}
  Congruence tf = congruence_generated(*B, {{0, 1}});
  CHECK(tf.classes() == 2);
  CHECK(tf.related(0, 1));
  CHECK(!tf.related(0, 2));
  CHECK(oracle_congruence(*B, {{0, 1}}) == tf);
}

TEST_CASE("congruence_generated minimality against exhaustive partitions") {
  std::mt19937_64 rng(0xA16EB7A);
  std::vector<AlgebraPtr> algebras{algebra_B(), boolean_fragment()};
  // random algebras of size <= 5 with a unary and a binary operation
  for (int i = 0; i < 8; ++i) {
    int n = 2 + static_cast<int>(rng() % 4);
    Signature sig({{"f", 1}, {"g", 2}});
    std::vector<int> ftab(n), gtab(n * n);
    for (auto& x : ftab) x = static_cast<int>(rng() % n);
    for (auto& x : gtab) x = static_cast<int>(rng() % n);
    algebras.push_back(std::make_shared<FiniteAlgebra>(sig, n,
                                                       std::vector<std::vector<int>>{ftab, gtab}));
  }
  int trials = 0;
  while (trials < 100) {
    const auto& alg = algebras[rng() % algebras.size()];
    int npairs = static_cast<int>(rng() % 3);
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < npairs; ++p)
      pairs.emplace_back(static_cast<int>(rng() % alg->size()),
                         static_cast<int>(rng() % alg->size()));
    CHECK(congruence_generated(*alg, pairs) == oracle_congruence(*alg, pairs));
    ++trials;
  }
}

TEST_CASE("subalgebra_generated: closure, idempotence, monotonicity") {
  auto B = algebra_B();
  std::vector<int> universe{0, 1, 2};
  Subalgebra whole = subalgebra_generated(*B, universe);
  CHECK(whole.algebra.size() == 3);

  Subalgebra d = subalgebra_generated(*B, {2});
  CHECK(d.algebra.size() == 1);  // closure of {D} under not
  CHECK(d.inclusion == std::vector<int>{2});

  Subalgebra t = subalgebra_generated(*B, {0});
  CHECK(t.algebra.size() == 2);  // {T,F}

  // idempotence: generating from the subuniverse yields the same members
  Subalgebra again = subalgebra_generated(*B, t.inclusion);
  CHECK(again.inclusion == t.inclusion);

  // monotone in seeds
  Subalgebra more = subalgebra_generated(*B, {0, 2});
  CHECK(std::includes(more.inclusion.begin(), more.inclusion.end(), t.inclusion.begin(),
                      t.inclusion.end()));

  // constants always included
  auto bool2 = boolean_fragment();
  Subalgebra consts = subalgebra_generated(*bool2, {});
  CHECK(consts.algebra.size() == 2);  // bot and its negation
}

TEST_CASE("product and quotient") {
  auto bool2 = boolean_fragment();
  FiniteAlgebra p = product({bool2, bool2});
  CHECK(p.size() == 4);

  auto B = algebra_B();
  Congruence tf = congruence_generated(*B, {{0, 1}});
  Quotient q = quotient(*B, tf);
  CHECK(q.algebra.size() == 2);
  // in the quotient, not fixes both classes
  CHECK(q.algebra.table(0) == std::vector<int>{0, 1});
  CHECK(q.projection == std::vector<int>{0, 0, 1});

  // projection is a surjective homomorphism with kernel = the congruence
  CHECK(is_homomorphism(*B, q.algebra, q.projection));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK((q.projection[a] == q.projection[b]) == tf.related(a, b));
}

TEST_CASE("enumerate_homs: assignment counts and kernel constraints") {
  auto bool2 = boolean_fragment();
  HomSearchSpec plain;
  plain.generators = {"p"};
  CHECK(enumerate_homs(plain, *bool2).size() == 2);

  auto B = algebra_B();
  HomSearchSpec kernel;
  kernel.generators = {"N", "D"};
  std::set<std::string> atoms{"N", "D"};
  Formula D = Formula::atom("D");
  kernel.kernel_must_contain = {{D, Formula::app("not", {D})}};
  auto homs = enumerate_homs(kernel, *B);
  REQUIRE(homs.size() == 3);  // D forced to the fixed point, N free
  for (const auto& h : homs) CHECK(h.image_of("D") == 2);
  // deterministic lexicographic order by (label order, element index)
  CHECK(homs[0].image_of("N") == 0);
  CHECK(homs[1].image_of("N") == 1);
  CHECK(homs[2].image_of("N") == 2);
}

TEST_CASE("enumerate_homs: every emitted assignment satisfies every constraint") {
  std::mt19937_64 rng(0xA16EB7A);
  auto B = algebra_B();
  std::set<std::string> atoms{"x", "y"};
  auto random_term = [&](auto&& self, int depth) -> Formula {
    if (depth == 0 || rng() % 3 == 0) return Formula::atom(rng() % 2 ? "x" : "y");
    return Formula::app("not", {self(self, depth - 1)});
  };
  for (int trial = 0; trial < 50; ++trial) {
    HomSearchSpec spec;
    spec.generators = {"x", "y"};
    for (int c = 0; c < 2; ++c)
      spec.kernel_must_contain.emplace_back(random_term(random_term, 3),
                                            random_term(random_term, 3));
    for (const auto& h : enumerate_homs(spec, *B))
      for (const auto& [l, r] : spec.kernel_must_contain)
        CHECK(evaluate(*B, l, h) == evaluate(*B, r, h));
  }
}

TEST_CASE("enumerate_homs with a full diagram: endomorphisms of B") {
  auto B = algebra_B();
  HomSearchSpec spec;
  spec.generators = {"Tp", "Fp", "Dp"};
  Formula T = Formula::atom("Tp"), F = Formula::atom("Fp"), D = Formula::atom("Dp");
  spec.relators = {{Formula::app("not", {T}), F},
                   {Formula::app("not", {F}), T},
                   {Formula::app("not", {D}), D}};
  auto homs = enumerate_homs(spec, *B);
  REQUIRE(homs.size() == 3);
  for (const auto& h : homs) {
    CHECK(h.image_of("Dp") == 2);
    CHECK(B->table(0)[h.image_of("Tp")] == h.image_of("Fp"));
  }
}

TEST_CASE("extend_to_hom and enumerate_algebra_homs") {
  auto B = algebra_B();
  // anchor T |-> D forces F |-> D
  auto map = extend_to_hom(*B, *B, {{0, 2}});
  REQUIRE(map.has_value());
  CHECK((*map)[1] == 2);
  CHECK((*map)[2] == -1);  // D not reached from T

  int count = 0;
  enumerate_algebra_homs(*B, *B, {0, 1, 2}, {}, [&](const std::vector<int>& hom) {
    CHECK(is_homomorphism(*B, *B, hom));
    ++count;
    return true;
  });
  CHECK(count == 3);
}

TEST_CASE("error codes on malformed inputs") {
  auto B = algebra_B();
  auto bool2 = boolean_fragment();

  CHECK_THROWS_WITH_AS(congruence_generated(*B, {{0, 7}}), doctest::Contains("IndexOutOfRange"),
                       Error);
  CHECK_THROWS_WITH_AS(subalgebra_generated(*B, {9}), doctest::Contains("IndexOutOfRange"),
                       Error);
  CHECK_THROWS_WITH_AS(product({B, bool2}), doctest::Contains("SignatureMismatch"), Error);
  CHECK_THROWS_WITH_AS(quotient(*B, Congruence{{0, 0}}), doctest::Contains("SignatureMismatch"),
                       Error);

  // arity violations surface on evaluation
  Formula bad = Formula::app("not", {Formula::atom("x"), Formula::atom("x")});
  CHECK_THROWS_WITH_AS(evaluate(*B, bad, GenAssignment{{"x"}, {0}}),
                       doctest::Contains("ArityMismatch"), Error);
  CHECK_THROWS_WITH_AS(evaluate(*B, Formula::app("join", {Formula::atom("x")}),
                                GenAssignment{{"x"}, {0}}),
                       doctest::Contains("UnknownOp"), Error);

  // malformed tables are rejected at construction
  CHECK_THROWS_AS(FiniteAlgebra(B->signature(), 3, {{1, 0}}), Error);
  CHECK_THROWS_AS(FiniteAlgebra(B->signature(), 3, {{1, 0, 5}}), Error);
}

TEST_CASE("find_isomorphism: identity anchor, composition, and absence") {
  auto B = algebra_B();
  auto id = find_isomorphism(*B, *B, {{0, 0}, {1, 1}, {2, 2}});
  REQUIRE(id.has_value());
  CHECK(*id == std::vector<int>({0, 1, 2}));

  auto iso1 = find_isomorphism(*B, *B);
  REQUIRE(iso1.has_value());
  // composition of found isomorphisms is an isomorphism
  std::vector<int> comp(3);
  for (int e = 0; e < 3; ++e) comp[e] = (*iso1)[(*id)[e]];
  CHECK(is_homomorphism(*B, *B, comp));

  // no isomorphism maps the not-fixed point to a swapped one
  CHECK(!find_isomorphism(*B, *B, {{2, 0}}).has_value());

  auto bool2 = boolean_fragment();
  CHECK(!find_isomorphism(*B, *bool2).has_value());
}
