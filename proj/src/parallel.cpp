/*
 * Copyright 2026 The embdim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "embdim/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace embdim {
namespace {

std::size_t DefaultWorkers() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t>& Workers() noexcept {
  static std::atomic<std::size_t> workers{DefaultWorkers()};
  return workers;
}

// Nested loops run inline on the calling worker.
thread_local bool in_worker = false;

}  // namespace

void SetWorkerCount(std::size_t workers) noexcept {
  Workers().store(std::max<std::size_t>(workers, 1));
}

std::size_t WorkerCount() noexcept { return Workers().load(); }

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t threads = in_worker ? 1 : std::min(WorkerCount(), n);

  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto run_one = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        in_worker = true;
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace embdim
