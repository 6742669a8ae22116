// Copyright 2026 The FairLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal fork-join helper. Work items write into per-index slots, and callers
// reduce the slots sequentially afterwards, so results never depend on the
// number of workers or on scheduling.

#ifndef FAIRLENS_PARALLEL_HPP_
#define FAIRLENS_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fairlens {

// Worker cap from FAIRLENS_THREADS. Unset, empty, unparsable or 0 means
// hardware concurrency.
inline std::size_t WorkerCount() {
  std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("FAIRLENS_THREADS");
  if (env == nullptr || *env == '\0') return hardware;
  char* end = nullptr;
  const unsigned long requested = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || requested == 0) return hardware;
  return static_cast<std::size_t>(requested);
}

// Calls fn(i) for every i in [0, n). The first exception thrown by any worker
// is rethrown on the calling thread after all workers have joined; when
// several items fail, the one with the smallest index wins.
template <typename Fn>
void ParallelFor(std::size_t n, Fn&& fn, std::size_t workers = WorkerCount()) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fairlens

#endif  // FAIRLENS_PARALLEL_HPP_
