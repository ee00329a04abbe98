#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace jetsurro {

/// Process-wide worker cap (0 = hardware concurrency). Set once by the CLI
/// from --threads / JETSURRO_THREADS; results never depend on it because
/// every parallel unit owns its output slot and its own RNG stream.
inline std::atomic<unsigned>& max_threads() {
  static std::atomic<unsigned> cap{0};
  return cap;
}

inline unsigned effective_threads(std::size_t n_items) {
  unsigned cap = max_threads().load();
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(cap, n_items));
}

/// Runs fn(i) for i in [0, n). Work is pulled from a shared counter; the first
/// exception is rethrown on the calling thread.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const unsigned workers = effective_threads(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace jetsurro
