// Copyright 2026 The ppnp Authors.
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

#include "ppnp/error.h"

namespace ppnp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kInsufficientPoints:
      return "insufficient-points";
    case ErrorCode::kBehindCamera:
      return "behind-camera";
    case ErrorCode::kRankDeficient:
      return "rank-deficient";
    case ErrorCode::kSingularSystem:
      return "singular-system";
    case ErrorCode::kDegenerateConfiguration:
      return "degenerate-configuration";
    case ErrorCode::kCheirality:
      return "cheirality";
    case ErrorCode::kNumericalFailure:
      return "numerical-failure";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kLengthMismatch:
      return "length-mismatch";
    case ErrorCode::kParse:
      return "parse";
  }
  return "unknown";
}

void Fail(ErrorCode code, const std::string& message) {
  throw PoseError(code, message);
}

}  // namespace ppnp
