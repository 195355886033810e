// Static-partition worker pool.  Each index is computed independently and
// written to its own slot, so results are bit-identical for any worker count.
// PTSKDV_WORKERS selects the pool size: unset means 1, 0 means one worker per
// hardware thread.
#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ptskdv::num {

inline int worker_count() {
  static int cached = [] {
    const char* env = std::getenv("PTSKDV_WORKERS");
    if (!env || !*env) return 1;
    int v = std::atoi(env);
    if (v == 0) {
      unsigned hc = std::thread::hardware_concurrency();
      v = hc ? static_cast<int>(hc) : 1;
    }
    if (v < 1) return 1;
    return v > 64 ? 64 : v;
  }();
  return cached;
}

template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& f) {
  std::size_t count = end > begin ? end - begin : 0;
  int w = worker_count();
  if (w <= 1 || count < 2) {
    for (std::size_t i = begin; i < end; ++i) f(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(w), count);
  std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t q = 0; q < workers; ++q) {
    std::size_t lo = begin + q * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ptskdv::num
