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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "embdim/kernels.hpp"

namespace embdim::kernels {
namespace {

bool CpuHasAvx2() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* TableFor(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      return &ScalarKernels();
    case Backend::kAvx2:
      return CpuHasAvx2() ? Avx2Kernels() : nullptr;
    case Backend::kNeon:
      return NeonKernels();
  }
  return nullptr;
}

Backend DetectBackend() noexcept {
  if (const char* forced = std::getenv("EMBDIM_SIMD")) {
    const std::string_view name(forced);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
      if (name == BackendName(b) && TableFor(b) != nullptr) return b;
    }
  }
  if (TableFor(Backend::kAvx2) != nullptr) return Backend::kAvx2;
  if (TableFor(Backend::kNeon) != nullptr) return Backend::kNeon;
  return Backend::kScalar;
}

struct State {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;

  State() {
    const Backend b = DetectBackend();
    backend.store(b);
    table.store(TableFor(b));
  }
};

State& GetState() noexcept {
  static State state;
  return state;
}

inline const KernelTable& Active() noexcept {
  return *GetState().table.load(std::memory_order_relaxed);
}

}  // namespace

std::string_view BackendName(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

bool BackendAvailable(Backend backend) noexcept { return TableFor(backend) != nullptr; }

Backend ActiveBackend() noexcept { return GetState().backend.load(); }

bool SetBackend(Backend backend) noexcept {
  const KernelTable* table = TableFor(backend);
  if (table == nullptr) return false;
  GetState().backend.store(backend);
  GetState().table.store(table);
  return true;
}

double Dot(const double* a, const double* b, std::size_t n) noexcept {
  return Active().dot(a, b, n);
}

double SquaredDistance(const double* a, const double* b, std::size_t n) noexcept {
  return Active().squared_distance(a, b, n);
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  Active().axpy(alpha, x, y, n);
}

}  // namespace embdim::kernels
