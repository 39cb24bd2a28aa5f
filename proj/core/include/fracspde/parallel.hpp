#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fracspde::par {

// Default worker count: FRACSPDE_WORKERS if set, else hardware concurrency.
inline int default_workers() {
  if (const char* env = std::getenv("FRACSPDE_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static index sharding: item i runs on worker i % workers. Results must be
// written to per-index slots by the body; the schedule (and therefore any
// output) is independent of timing.
inline void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Pairwise (tree) sum: the result does not depend on how work was scheduled,
// only on the slot order.
inline double tree_sum(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::vector<double> cur = v;
  while (cur.size() > 1) {
    std::vector<double> next((cur.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < cur.size(); i += 2) next[i / 2] = cur[i] + cur[i + 1];
    if (cur.size() % 2 == 1) next.back() = cur.back();
    cur = std::move(next);
  }
  return cur[0];
}

} // namespace fracspde::par
