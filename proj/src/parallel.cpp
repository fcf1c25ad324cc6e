#include "ualw/parallel.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ualw {

int hardware_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<uint64_t> find_first_serial(uint64_t n,
                                          const std::function<bool(uint64_t)>& pred) {
  for (uint64_t i = 0; i < n; ++i)
    if (pred(i)) return i;
  return std::nullopt;
}

std::optional<uint64_t> find_first_parallel(uint64_t n,
                                            const std::function<bool(uint64_t)>& pred,
                                            int jobs) {
#ifndef _OPENMP
  (void)jobs;
  return find_first_serial(n, pred);
#else
  if (n == 0) return std::nullopt;
  uint64_t best = n;
  const uint64_t chunk = 1u << 14;
  const uint64_t chunks = (n + chunk - 1) / chunk;
#pragma omp parallel num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  {
#pragma omp for schedule(dynamic)
    for (int64_t c = 0; c < static_cast<int64_t>(chunks); ++c) {
      uint64_t current;
#pragma omp atomic read
      current = best;
      uint64_t lo = static_cast<uint64_t>(c) * chunk;
      if (lo >= current) continue;  // a smaller hit already exists
      uint64_t hi = std::min(lo + chunk, n);
      for (uint64_t i = lo; i < hi; ++i) {
        if (pred(i)) {
#pragma omp critical(ualw_find_first)
          best = std::min(best, i);
          break;
        }
      }
    }
  }
  if (best == n) return std::nullopt;
  return best;
#endif
}

std::optional<uint64_t> find_first(uint64_t n, const std::function<bool(uint64_t)>& pred,
                                   ExecPolicy policy) {
  if (policy.jobs == 1) return find_first_serial(n, pred);
  return find_first_parallel(n, pred, policy.jobs);
}

bool all_of_range(uint64_t n, const std::function<bool(uint64_t)>& pred, ExecPolicy policy) {
  return !find_first(n, [&](uint64_t i) { return !pred(i); }, policy).has_value();
}

}  // namespace ualw
