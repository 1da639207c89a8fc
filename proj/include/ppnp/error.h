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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppnp {

enum class ErrorCode {
  kInvalidArgument,
  kInsufficientPoints,
  kBehindCamera,
  kRankDeficient,
  kSingularSystem,
  kDegenerateConfiguration,
  kCheirality,
  kNumericalFailure,
  kDomain,
  kConfiguration,
  kLengthMismatch,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code lets
// callers (the CLI in particular) map failures onto stable exit statuses.
class PoseError : public std::runtime_error {
 public:
  PoseError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace ppnp
