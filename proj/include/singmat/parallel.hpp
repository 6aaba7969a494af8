#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "singmat/base.hpp"

namespace singmat {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

// Runs fn(slab) for every slab index in [0, n_slabs), distributing slabs
// dynamically over `threads` workers.  Callers keep determinism by writing
// per-slab results into preallocated arrays and merging them in slab order.
template <class Fn>
inline void parallel_slabs(Int n_slabs, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n_slabs <= 1) {
    for (Int s = 0; s < n_slabs; ++s) fn(s);
    return;
  }
  std::atomic<Int> next{0};
  auto worker = [&] {
    while (true) {
      Int s = next.fetch_add(1, std::memory_order_relaxed);
      if (s >= n_slabs) return;
      fn(s);
    }
  };
  std::vector<std::thread> pool;
  int used = int(std::min<Int>(threads, n_slabs));
  pool.reserve(size_t(used) - 1);
  for (int i = 1; i < used; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace singmat
