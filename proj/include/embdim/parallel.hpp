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

#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace embdim {

// Process-wide worker count used by every parallel loop. Defaults to the
// machine's hardware concurrency. Values < 1 are clamped to 1.
void SetWorkerCount(std::size_t workers) noexcept;
std::size_t WorkerCount() noexcept;

// Calls body(i) for every i in [0, n), spread over WorkerCount() threads.
// Each index is handled exactly once; callers write results into slot i, so
// output never depends on scheduling. If any call throws, the exception from
// the smallest failing index is rethrown after all workers stop. A call made
// from inside a worker runs serially.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace embdim
