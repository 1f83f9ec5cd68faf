#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wrckit {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write results
// into slot i, so the output order never depends on completion order. The
// first exception thrown by any task is rethrown after all threads join.
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const std::size_t count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(body);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wrckit
