#pragma once

#include <functional>

namespace acmm {

// Worker-thread cap: ACMM_THREADS if set and positive, else the hardware
// concurrency.
int thread_limit();

// Runs body(i) for i in [0, n).  Each index is visited exactly once; callers
// write results by index, so the outcome does not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace acmm
