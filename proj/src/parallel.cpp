#include "blepi/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace blepi {

int worker_thread_count() {
  int requested = 0;
  if (const char* env = std::getenv("BLEPI_THREADS")) {
    requested = std::atoi(env);
  }
  if (requested <= 0) {
    requested = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (requested < 1) requested = 1;
  if (requested > 64) requested = 64;
  return requested;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int threads = std::min(worker_thread_count(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace blepi
