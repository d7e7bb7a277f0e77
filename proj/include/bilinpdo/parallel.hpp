#ifndef BILINPDO_PARALLEL_HPP
#define BILINPDO_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bilinpdo {

/// Worker count: BILINPDO_THREADS caps it, otherwise hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("BILINPDO_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, n). Each index owns its output slot, so the
/// result is identical for any worker count; callers reduce afterwards in
/// index order.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, int workers = -1) {
  if (workers < 1) workers = thread_budget();
  workers = static_cast<int>(std::min<std::size_t>(workers, n));
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bilinpdo

#endif
