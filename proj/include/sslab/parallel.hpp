#pragma once

// Worker pool sized by the SSL_THREADS environment variable (default 1).
// Chunks write to disjoint output slots; any reduction happens after the
// join in a fixed order, so results are identical for every worker count.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sslab {

inline int worker_count() {
  const char* env = std::getenv("SSL_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// Calls fn(begin, end) on contiguous index ranges covering [0, n).
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  const std::size_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sslab
