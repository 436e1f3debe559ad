#pragma once

#include <functional>

// Worker parallelism capped by the BLEPI_THREADS environment variable
// (0 or unset = auto). Work items are indexed and write only to their own
// slot, so results are deterministic regardless of scheduling.

namespace blepi {

int worker_thread_count();

// Runs fn(0..n-1), possibly on several threads.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace blepi
