#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace magbell {

/// Worker count: MAGBELL_WORKERS env var when set, else hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("MAGBELL_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, n). Each index is processed exactly once; callers
/// must write results into per-index slots so the outcome is independent of
/// the worker count.
inline void parallel_for(int n, const std::function<void(int)>& fn,
                         int workers = worker_count()) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  pool.reserve(count - 1);
  for (int w = 1; w < count; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace magbell
