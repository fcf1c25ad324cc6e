#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace ualw {

/// Execution policy for the data-parallel kernels.  jobs == 1 selects the
/// serial reference implementation; jobs == 0 uses the OpenMP default team.
struct ExecPolicy {
  int jobs = 0;
};

/// Least index i in [0, n) with pred(i) true, or nullopt.  The parallel
/// version partitions the range into chunks and keeps the minimum hit, so the
/// result is identical to the serial scan regardless of schedule.
std::optional<uint64_t> find_first_serial(uint64_t n,
                                          const std::function<bool(uint64_t)>& pred);
std::optional<uint64_t> find_first_parallel(uint64_t n,
                                            const std::function<bool(uint64_t)>& pred,
                                            int jobs);
std::optional<uint64_t> find_first(uint64_t n, const std::function<bool(uint64_t)>& pred,
                                   ExecPolicy policy);

/// True iff pred holds for every index in [0, n).
bool all_of_range(uint64_t n, const std::function<bool(uint64_t)>& pred, ExecPolicy policy);

int hardware_jobs();

}  // namespace ualw
