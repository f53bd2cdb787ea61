#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace mmw {

/// Splits [0, n) into contiguous chunks, one accumulator per worker, then
/// merges in chunk order. `body(i, acc)` must depend only on i and acc so the
/// result is independent of the worker count.
template <typename Acc, typename Body, typename Merge>
Acc parallel_reduce(std::uint64_t n, const Acc& init, Body body, Merge merge, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
  std::vector<Acc> partial(workers, init);
  auto run = [&](unsigned w) {
    const std::uint64_t lo = n * w / workers;
    const std::uint64_t hi = n * (w + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) body(i, partial[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  Acc total = init;
  for (auto& p : partial) merge(total, p);
  return total;
}

}  // namespace mmw
