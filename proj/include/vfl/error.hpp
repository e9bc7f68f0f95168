// Copyright 2026 The vfl Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vfl {

enum class ErrorCode {
  kDivisionByZero,
  kOffCurveInput,
  kEmptyInput,
  kEmptyBatch,
  kRangeExceeded,
  kOverflow,
  kUnsatisfiableInputs,
  kArityMismatch,
  kLengthMismatch,
  kKeyMismatch,
  kSourceExhausted,
  kMalformedRow,
  kTooFewClasses,
  kMalformedData,
  kConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Witness synthesis hit a constraint that does not hold.
class UnsatisfiableInputs : public Error {
 public:
  UnsatisfiableInputs(std::size_t constraint_index, const std::string& circuit)
      : Error(ErrorCode::kUnsatisfiableInputs,
              circuit + " constraint #" + std::to_string(constraint_index)),
        constraint_index_(constraint_index) {}

  std::size_t constraint_index() const noexcept { return constraint_index_; }

 private:
  std::size_t constraint_index_;
};

/// Malformed CSV input; `line` is 1-based.
class MalformedRow : public Error {
 public:
  MalformedRow(std::size_t line, const std::string& detail)
      : Error(ErrorCode::kMalformedRow, "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vfl
