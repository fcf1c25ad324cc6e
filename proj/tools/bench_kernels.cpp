// Benchmark of the data-parallel kernels against their serial reference:
// bounded model enumeration (the taut-equivalence oracle) and the raw
// find_first scan.  Prints one line per configuration.

#include <chrono>
#include <iostream>

#include "ualw/fol.hpp"
#include "ualw/parallel.hpp"

using namespace ualw;

namespace {

double seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_oracle(int max_size, int jobs) {
  SimilarityType t{{{"R1", 2}, {"R2", 2}, {"R3", 2}}};
  Signature sig = fol_signature(2);
  std::set<std::string> atoms;
  for (const auto& a : fol_atoms(t, 2)) atoms.insert(a);
  Formula lhs = parse_formula("E0(E1(and(R1[0,1],R2[0,1])))", sig, atoms);
  Formula rhs = parse_formula("E0(E1(and(R1[1,0],R2[1,0])))", sig, atoms);

  BoundedModelSpace space{t, max_size};
  BoundedResult r;
  double dt = seconds([&] {
    r = taut_equivalent_bounded(t, 2, lhs, rhs, max_size, ExecPolicy{jobs});
  });
  std::cout << "oracle maxSize=" << max_size << " jobs=" << jobs << "  models=" << space.total()
            << "  refuted=" << (r.refuted ? "yes" : "no") << "  " << dt << " s  ("
            << static_cast<double>(space.total()) / dt / 1e6 << " M models/s)\n";
}

void bench_find_first(uint64_t n, int jobs) {
  auto pred = [](uint64_t i) { return (i * 2654435761u) % 1000003 == 999983; };
  std::optional<uint64_t> hit;
  double dt = seconds([&] { hit = find_first(n, pred, ExecPolicy{jobs}); });
  std::cout << "find_first n=" << n << " jobs=" << jobs << "  hit="
            << (hit ? std::to_string(*hit) : std::string("none")) << "  " << dt << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  int max_size = argc > 1 ? std::atoi(argv[1]) : 3;
  std::cout << "hardware jobs: " << hardware_jobs() << "\n";
  for (int jobs : {1, 0}) bench_find_first(1u << 26, jobs);
  for (int jobs : {1, 0}) bench_oracle(2, jobs);
  if (max_size >= 3)
    for (int jobs : {1, 0}) bench_oracle(3, jobs);
  return 0;
}
