// Copyright 2026 The changedet Authors
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

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace changedet {

/// 0 or negative requests resolve to the hardware thread count.
inline int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(begin_i, end_i) over contiguous chunks of [begin, end). Chunking
/// depends only on the thread count, and chunks never overlap, so callers
/// writing disjoint outputs stay deterministic.
inline void parallel_chunks(int begin, int end, int threads,
                            const std::function<void(int, int)>& fn) {
  const int n = end - begin;
  if (n <= 0) {
    return;
  }
  const int workers = std::min(resolve_threads(threads), n);
  if (workers <= 1) {
    fn(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int chunk_begin = begin + static_cast<int>(static_cast<long long>(n) * w / workers);
    const int chunk_end = begin + static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&fn, chunk_begin, chunk_end] { fn(chunk_begin, chunk_end); });
  }
  for (std::thread& t : pool) {
    t.join();
  }
}

}  // namespace changedet
