#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace textfx {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Work items are
/// claimed from a shared counter, so completion order is arbitrary; callers
/// write into pre-sized, index-addressed outputs to keep results ordered.
/// The first exception thrown by any task is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (n == 0) return;
  workers = std::clamp<std::size_t>(workers, 1, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
  }
  if (first_error) std::rethrow_exception(first_error);
}

/// Ordered map over [0, n).
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

inline std::size_t default_parallelism() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace textfx
