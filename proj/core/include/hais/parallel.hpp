#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace hais {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Maps a --threads style request to an actual worker count.
/// requested <= 0 selects the hardware concurrency.
inline int resolve_thread_count(int requested) {
  return requested <= 0 ? hardware_threads() : requested;
}

/// Runs fn(begin, end) over [0, n) split into at most `threads` contiguous
/// chunks. Chunk boundaries depend only on (n, threads), and each chunk may
/// only write to its own output slots, so results are identical for any
/// thread count.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& fn) {
  if (n <= 0) {
    return;
  }
  threads = resolve_thread_count(threads);
  if (threads > n) {
    threads = static_cast<int>(n);
  }
  if (threads <= 1) {
    fn(std::int64_t{0}, n);
    return;
  }
  const std::int64_t chunk = (n + threads - 1) / threads;
  std::exception_ptr error;
  std::atomic_flag error_set = ATOMIC_FLAG_INIT;
  auto guarded = [&fn, &error, &error_set](std::int64_t begin, std::int64_t end) {
    try {
      fn(begin, end);
    } catch (...) {
      if (!error_set.test_and_set()) {
        error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads) - 1);
  for (int t = 1; t < threads; ++t) {
    const std::int64_t begin = t * chunk;
    if (begin >= n) {
      break;
    }
    const std::int64_t end = std::min(n, begin + chunk);
    workers.emplace_back(guarded, begin, end);
  }
  guarded(std::int64_t{0}, std::min(n, chunk));
  for (auto& w : workers) {
    w.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace hais
