#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gp {

/// Worker count: GRAPHPURSUIT_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
inline int thread_budget() {
  if (const char* s = std::getenv("GRAPHPURSUIT_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(0..n-1), possibly across threads. fn must write only into its
/// own index's slot; callers aggregate by reading slots in index order,
/// which keeps results independent of the schedule. The first exception
/// thrown wins and is rethrown after all workers join.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::mutex mu;
  std::exception_ptr first;
  auto body = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace gp
