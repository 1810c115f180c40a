#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace conecal {

// Worker cap from CONECAL_THREADS (0 or unset = auto).
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("CONECAL_THREADS");
  if (env == nullptr) return hw;
  const long v = std::strtol(env, nullptr, 10);
  if (v <= 0) return hw;
  return static_cast<unsigned>(v);
}

// Static chunking over [0, n). Each index is computed exactly once by one
// worker, so results are identical for every thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t lo = n * t / workers;
    const std::size_t hi = n * (t + 1) / workers;
    pool.emplace_back([lo, hi, &body]() {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace conecal
