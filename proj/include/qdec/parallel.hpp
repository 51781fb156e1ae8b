// Copyright 2026 The qdec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qdec {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic indexed reduction: indices are grouped into fixed-size blocks,
// each block is accumulated sequentially in index order, and the per-block
// partials are folded in block order at the end. The block layout does not
// depend on the thread count, so results are bit-identical for any `threads`.
//
// T must support `acc += value`-style accumulation through `fold`;
// `accumulate(i, local)` adds index i's contribution into the block partial.
template <typename T, typename Accumulate, typename Fold>
T blocked_reduce(std::size_t count, std::size_t block_size, int threads,
                 const T &zero, Accumulate &&accumulate, Fold &&fold) {
  if (count == 0) return zero;
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (count + block_size - 1) / block_size;
  std::vector<T> partials(n_blocks, zero);

  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(count, lo + block_size);
    for (std::size_t i = lo; i < hi; ++i) accumulate(i, partials[b]);
  };

  const int n_threads = resolve_threads(threads);
  if (n_threads <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= n_blocks) return;
        run_block(b);
      }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(n_threads, n_blocks);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto &th : pool) th.join();
  }

  T total = zero;
  for (std::size_t b = 0; b < n_blocks; ++b) fold(total, partials[b]);
  return total;
}

// Convenience for matrix/scalar sums.
template <typename T, typename Accumulate>
T blocked_sum(std::size_t count, std::size_t block_size, int threads,
              const T &zero, Accumulate &&accumulate) {
  return blocked_reduce(
      count, block_size, threads, zero, std::forward<Accumulate>(accumulate),
      [](T &acc, const T &part) { acc += part; });
}

} // namespace qdec
