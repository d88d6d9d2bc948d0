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

#include <ostream>
#include <string>
#include <vector>

#include "embdim/error.hpp"

namespace embdim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // bad usage, missing or unreadable file
inline constexpr int kExitData = 3;        // malformed input, data or dimension mismatch
inline constexpr int kExitDegenerate = 4;  // degenerate input
inline constexpr int kExitInternal = 1;

int ExitCodeFor(ErrorKind kind) noexcept;

// Runs one command line (without the program name). Reports go to --out or,
// without it, to `out`; the one-line summary goes to `out` when a file was
// written and to `err` otherwise. Diagnostics go to `err`.
int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embdim::cli
