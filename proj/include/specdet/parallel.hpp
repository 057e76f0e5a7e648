#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace specdet {

inline int default_thread_count() {
  if (const char* env = std::getenv("SPECDET_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

// Splits [0, total) into one contiguous block per worker. Workers fill
// private results; the caller merges them in block order, so the outcome is
// independent of scheduling (bit-stable for a fixed worker count).
template <typename Result, typename BlockFn>
std::vector<Result> parallel_blocks(std::size_t total, int threads, BlockFn&& fn) {
  if (threads < 1) threads = 1;
  int nblocks = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  std::vector<Result> results(nblocks);
  if (nblocks == 1) {
    fn(std::size_t{0}, total, results[0]);
    return results;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (total + nblocks - 1) / nblocks;
  for (int b = 0; b < nblocks; ++b) {
    std::size_t lo = b * chunk;
    std::size_t hi = std::min(total, lo + chunk);
    pool.emplace_back([&, lo, hi, b] { fn(lo, hi, results[b]); });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace specdet
