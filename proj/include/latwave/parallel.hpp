#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace latwave {

// Global worker count. 0 = use hardware concurrency. Set once from the CLI;
// library code reads it through thread_count().
inline int& thread_count_ref() {
  static int n = 0;
  return n;
}

inline void set_thread_count(int n) { thread_count_ref() = n; }

inline int thread_count() {
  int n = thread_count_ref();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0,n) into contiguous slabs, one per worker, and runs
// fn(slab_index, begin, end) on each. Slab boundaries depend only on n and
// the worker count, so per-slab partial results combined in slab order give
// reproducible totals at a fixed thread count.
template <class Fn>
void parallel_slabs(std::int64_t n, Fn&& fn) {
  int workers = thread_count();
  if (n <= 0) return;
  workers = static_cast<int>(std::min<std::int64_t>(workers, n));
  if (workers <= 1) {
    fn(0, std::int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t b = w * chunk;
    std::int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
  }
  for (auto& th : pool) th.join();
}

// Deterministic parallel reduction: sums fn(i) over [0,n) with per-slab
// accumulators combined in slab order.
template <class T, class Fn>
T parallel_reduce(std::int64_t n, T zero, Fn&& fn) {
  int workers = std::max(1, thread_count());
  std::vector<T> partial(static_cast<size_t>(workers), zero);
  parallel_slabs(n, [&](int slab, std::int64_t b, std::int64_t e) {
    T acc = zero;
    for (std::int64_t i = b; i < e; ++i) acc += fn(i);
    partial[static_cast<size_t>(slab)] = acc;
  });
  T total = zero;
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace latwave
