#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ibrw {

/// Number of workers for a requested count; 0 means all hardware threads.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
///
/// Work is handed out in chunks from a shared counter. Callers write results
/// into slots owned by index i, so the outcome never depends on scheduling.
template <class Fn>
void parallel_for(std::uint64_t count, int threads, Fn&& fn, std::uint64_t chunk = 64) {
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(1, count)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(chunk);
        if (begin >= count) return;
        const std::uint64_t end = std::min(count, begin + chunk);
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ibrw
