#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace jko {

// Runs fn(begin, end) over a fixed partition of [0, n) into contiguous chunks.
// Chunk boundaries depend only on n and the thread count, and workers write
// disjoint ranges, so results do not depend on scheduling.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& th : pool) th.join();
}

}  // namespace jko
