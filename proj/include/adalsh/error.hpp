// Copyright 2026 The adalsh Authors
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

#include <stdexcept>
#include <string>

namespace adalsh {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kValidation = 2,
  kInfeasible = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& what) {
  throw Error(ErrorKind::kValidation, what);
}

[[noreturn]] inline void throw_infeasible(const std::string& what) {
  throw Error(ErrorKind::kInfeasible, what);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorKind::kIo, what);
}

}  // namespace adalsh
