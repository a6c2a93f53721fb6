#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tfz {

inline unsigned& worker_count() {
  static unsigned n = std::thread::hardware_concurrency();
  return n;
}

// Static block partition; deterministic regardless of thread count because
// every index writes disjoint output.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = worker_count() == 0 ? 1 : worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tfz
