#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ualw/fol.hpp"
#include "ualw/parallel.hpp"

using namespace ualw;

TEST_CASE("find_first: serial and parallel agree") {
  std::mt19937_64 rng(kProbeSeed);
  for (int trial = 0; trial < 50; ++trial) {
    uint64_t n = 1 + rng() % 200000;
    uint64_t target = rng() % (2 * n);  // sometimes beyond the range: no hit
    auto pred = [&](uint64_t i) { return i >= target && (i - target) % 37 == 0; };
    auto serial = find_first_serial(n, pred);
    for (int jobs : {0, 2, 3}) {
      auto parallel = find_first_parallel(n, pred, jobs);
      CHECK(serial == parallel);
    }
  }

  // edges: hit at zero, hit at the end, empty range
  auto yes = [](uint64_t) { return true; };
  CHECK(find_first_parallel(1000, yes, 0) == std::optional<uint64_t>{0});
  auto last = [](uint64_t i) { return i == 99999; };
  CHECK(find_first_parallel(100000, last, 0) == std::optional<uint64_t>{99999});
  CHECK(!find_first_parallel(0, yes, 0).has_value());
  CHECK(all_of_range(1000, [](uint64_t) { return true; }, ExecPolicy{0}));
  CHECK(!all_of_range(1000, [](uint64_t i) { return i != 998; }, ExecPolicy{0}));
}

TEST_CASE("bounded oracle: identical witnesses under any schedule") {
  SimilarityType t{{{"R", 2}, {"S", 1}}};
  Signature sig = fol_signature(2);
  std::set<std::string> atoms;
  for (const auto& a : fol_atoms(t, 2)) atoms.insert(a);
  Formula phi = parse_formula("E1(and(R[0,1],S[1]))", sig, atoms);
  Formula psi = parse_formula("E1(R[0,1])", sig, atoms);

  BoundedResult serial = taut_equivalent_bounded(t, 2, phi, psi, 2, ExecPolicy{1});
  REQUIRE(serial.refuted);
  for (int jobs : {0, 2, 4}) {
    BoundedResult par = taut_equivalent_bounded(t, 2, phi, psi, 2, ExecPolicy{jobs});
    CHECK(par.refuted);
    CHECK(par.model_index == serial.model_index);
    CHECK(par.model.relations[0] == serial.model.relations[0]);
    CHECK(par.assignment == serial.assignment);
  }

  // a verified pair stays verified in parallel
  BoundedResult v1 = taut_equivalent_bounded(t, 2, phi, phi, 2, ExecPolicy{1});
  BoundedResult v2 = taut_equivalent_bounded(t, 2, phi, phi, 2, ExecPolicy{0});
  CHECK(!v1.refuted);
  CHECK(!v2.refuted);
}
