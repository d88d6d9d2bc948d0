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

#include <stdexcept>
#include <string>

namespace embdim {

// Error categories. The CLI maps them to exit codes (see cli.hpp).
enum class ErrorKind {
  kUsage,       // bad arguments, missing files
  kIo,          // unreadable / unwritable path
  kFormat,      // malformed file contents
  kTruncated,   // payload shorter than the header promises
  kData,        // non-finite values, bad TSV fields
  kAlignment,   // ids / labels do not line up with rows
  kDimension,   // dimension or shape mismatch between inputs
  kDegenerate,  // zero rows, zero variance, empty evaluation sets
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

const char* ErrorKindName(ErrorKind kind) noexcept;

}  // namespace embdim
