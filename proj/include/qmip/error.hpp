// Copyright 2026 The qmip Authors
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

namespace qmip {

// Error classes map onto CLI exit codes: parse = 2, validation = 3,
// runtime = 4.
enum class ErrorKind {
  kParse,
  kValidation,
  kRuntime,
};

enum class ErrorCode {
  kParse,
  kInvalidSpec,
  kInvalidInput,
  kMissingTransition,
  kSpaceExceeded,
  kNotFairCoin,
  kNotReversible,
  kNotRestrictive,
  kAlphabetMismatch,
  kNoEraser,
  kNotOrthonormal,
  kNotClassical,
  kFamilyTooLarge,
  kUnbounded,
};

const char* error_code_name(ErrorCode code);
ErrorKind error_kind(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return error_kind(code_); }

 private:
  ErrorCode code_;
};

}  // namespace qmip
