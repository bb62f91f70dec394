#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace langevin {

// Runs fn(begin, end, chunk_index) over a fixed partition of [0, total).
// The partition depends only on (total, threads), so reductions done in
// chunk-index order are deterministic for a given thread count, and
// per-item work keyed on the item index is deterministic for any count.
inline void parallel_chunks(int total, int threads,
                            const std::function<void(int, int, int)>& fn) {
  threads = std::max(1, std::min(threads, total));
  if (threads == 1) {
    fn(0, total, 0);
    return;
  }
  std::vector<std::thread> pool;
  const int base = total / threads, rem = total % threads;
  int begin = 0;
  for (int c = 0; c < threads; ++c) {
    const int len = base + (c < rem ? 1 : 0);
    pool.emplace_back(fn, begin, begin + len, c);
    begin += len;
  }
  for (auto& th : pool) th.join();
}

inline int default_thread_count() {
  if (const char* env = std::getenv("LANGEVIN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace langevin
