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
#include <string_view>

// Vector kernels behind every inner loop of the toolkit (cosine scoring,
// pairwise distances, gradient updates, covariance accumulation).
//
// Each kernel has a scalar reference implementation and SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64). The variant is chosen once at first use from the
// CPU's capabilities; the EMBDIM_SIMD environment variable (scalar|avx2|neon)
// forces a specific one. SIMD variants reassociate sums, so they agree with the
// scalar reference to rounding error, not bit-for-bit. Within one process the
// selection never changes, which keeps repeated evaluations bit-identical.

namespace embdim::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view BackendName(Backend backend) noexcept;

// True when the backend is compiled in and the CPU supports it.
bool BackendAvailable(Backend backend) noexcept;

Backend ActiveBackend() noexcept;

// Switches the active backend. Returns false (and changes nothing) when the
// backend is unavailable. Not thread-safe with respect to running kernels.
bool SetBackend(Backend backend) noexcept;

// sum_i a[i] * b[i]
double Dot(const double* a, const double* b, std::size_t n) noexcept;

// sum_i (a[i] - b[i])^2
double SquaredDistance(const double* a, const double* b, std::size_t n) noexcept;

// y[i] += alpha * x[i]
void Axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;

// Function table implemented by each backend.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  double (*squared_distance)(const double*, const double*, std::size_t) noexcept;
  void (*axpy)(double, const double*, double*, std::size_t) noexcept;
};

const KernelTable& ScalarKernels() noexcept;
// Returns nullptr when the variant is not compiled for this target.
const KernelTable* Avx2Kernels() noexcept;
const KernelTable* NeonKernels() noexcept;

}  // namespace embdim::kernels
