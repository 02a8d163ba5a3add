/// Deterministic partitioned sampling: worker w of W owns the contiguous
/// index block [w*n/W, (w+1)*n/W). Per-worker states are merged by the caller
/// in worker order, so results depend only on (seed, workers).
#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace wl1 {

template <class State, class Body>
std::vector<State> runPartitioned(std::uint64_t n, int workers, const State& init, Body&& body) {
  if (workers < 1) workers = 1;
  if (static_cast<std::uint64_t>(workers) > n && n > 0) workers = static_cast<int>(n);
  std::vector<State> states(static_cast<std::size_t>(workers), init);
  if (workers == 1) {
    for (std::uint64_t i = 0; i < n; ++i) body(states[0], i);
    return states;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = n * static_cast<std::uint64_t>(w) / workers;
    const std::uint64_t hi = n * static_cast<std::uint64_t>(w + 1) / workers;
    threads.emplace_back([&, w, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) body(states[w], i);
    });
  }
  for (auto& t : threads) t.join();
  return states;
}

}  // namespace wl1
