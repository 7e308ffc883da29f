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

#include "qmip/error.hpp"

namespace qmip {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kMissingTransition: return "MissingTransition";
    case ErrorCode::kSpaceExceeded: return "SpaceExceeded";
    case ErrorCode::kNotFairCoin: return "NotFairCoin";
    case ErrorCode::kNotReversible: return "NotReversible";
    case ErrorCode::kNotRestrictive: return "NotRestrictive";
    case ErrorCode::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::kNoEraser: return "NoEraser";
    case ErrorCode::kNotOrthonormal: return "NotOrthonormal";
    case ErrorCode::kNotClassical: return "NotClassical";
    case ErrorCode::kFamilyTooLarge: return "FamilyTooLarge";
    case ErrorCode::kUnbounded: return "Unbounded";
  }
  return "Error";
}

ErrorKind error_kind(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return ErrorKind::kParse;
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kNotFairCoin:
    case ErrorCode::kNotReversible:
    case ErrorCode::kNotRestrictive:
    case ErrorCode::kAlphabetMismatch:
    case ErrorCode::kNoEraser:
    case ErrorCode::kNotOrthonormal:
      return ErrorKind::kValidation;
    default:
      return ErrorKind::kRuntime;
  }
}

}  // namespace qmip
