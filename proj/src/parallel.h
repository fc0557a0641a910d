#ifndef BTRANK_SRC_PARALLEL_H_
#define BTRANK_SRC_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace btrank::internal {

// Calls fn(k) for k in [0, n) on up to `jobs` threads. `fn` must not
// throw; callers capture exceptions per index.
template <typename Fn>
void ParallelFor(int n, int jobs, Fn&& fn) {
  const int workers = std::clamp(jobs, 1, std::max(1, n));
  if (workers == 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int k = next++; k < n; k = next++) fn(k);
    });
  }
  for (auto& thread : threads) thread.join();
}

}  // namespace btrank::internal

#endif  // BTRANK_SRC_PARALLEL_H_
