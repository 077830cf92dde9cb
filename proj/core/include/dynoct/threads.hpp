#pragma once

#include <functional>

namespace dynoct {

/// Worker count: DYNOCT_THREADS env var caps parallelism (0 or unset = auto).
int thread_count();

/// Runs fn(0..n-1), possibly on several threads. Each index is processed
/// exactly once by a single worker; results must not depend on the schedule
/// (all our workloads write disjoint slots from counter-seeded streams).
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace dynoct
