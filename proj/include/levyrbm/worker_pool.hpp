#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace levyrbm {

// Thread count resolution: explicit request wins, then the
// LEVYRBM_THREADS environment variable, then hardware concurrency.
inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LEVYRBM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(0..n_tasks-1) over a small worker pool. Each task writes only to
// its own output slot, so results are identical for any thread count. The
// first exception wins and is rethrown on the caller's thread.
inline void parallel_for_tasks(std::size_t n_tasks, int n_threads,
                               const std::function<void(std::size_t)>& fn) {
  if (n_tasks == 0) return;
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_tasks)));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace levyrbm
