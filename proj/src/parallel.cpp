#include "themegrain/detail/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace themegrain::detail {

int thread_budget() {
  if (const char* env = std::getenv("THEMEGRAIN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // Malformed values fall through to auto-detection.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_chunks(std::int64_t begin, std::int64_t end,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
  const std::int64_t n = end - begin;
  if (n <= 0) return;
  const int threads = std::min<std::int64_t>(thread_budget(), n);
  if (threads <= 1) {
    fn(begin, end);
    return;
  }
  // Fixed contiguous chunks: each worker owns a range, so callers can write
  // disjoint outputs or produce per-chunk partials that are reduced in index
  // order afterwards. That in-order reduction is what keeps results
  // bit-identical regardless of the thread count.
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = begin + t * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace themegrain::detail
