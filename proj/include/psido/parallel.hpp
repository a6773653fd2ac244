#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace psido {

// Worker cap: PSIDO_THREADS if set (>=1), else hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("PSIDO_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Deterministic parallel loop: body(i) writes only to slot i of preallocated
// output, so the schedule cannot change results.
template <typename Body>
void parallel_for(long n, Body&& body) {
  int workers = std::min<long>(thread_budget(), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace psido
