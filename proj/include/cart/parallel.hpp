#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cart {

/// Worker count to use: `requested`, or the hardware concurrency when 0.
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Calls fn(i) for every i in [0, n) on up to `workers` threads (0: all cores).
/// Items are claimed from a shared counter; fn must only write state owned by
/// index i, so results do not depend on scheduling. The first exception thrown
/// by any item is rethrown after all threads join.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
  const unsigned threads = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Index-ordered results of fn(i), i in [0, n).
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, unsigned workers, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace cart
