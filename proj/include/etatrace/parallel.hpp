#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace etatrace {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Maps fn over items on up to `threads` workers. Results land in input
/// order, so downstream output is deterministic regardless of thread count.
/// The first exception thrown by any worker is rethrown after the join.
template <class T, class R, class Fn>
std::vector<R> parallel_map(const std::vector<T>& items, const Fn& fn, int threads) {
  threads = resolve_threads(threads);
  std::vector<R> results(items.size());
  if (items.empty()) return results;
  if (threads <= 1 || items.size() == 1) {
    for (size_t k = 0; k < items.size(); ++k) results[k] = fn(items[k]);
    return results;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      size_t k = next.fetch_add(1);
      if (k >= items.size()) return;
      try {
        results[k] = fn(items[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(threads, static_cast<int>(items.size()));
  pool.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace etatrace
