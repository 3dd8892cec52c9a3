// Copyright 2026 The lrfanout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace lrfanout {

enum class ErrorCode {
  kInvalidGeometry,
  kIndex,
  kCapacity,
  kUnsupportedStrategy,
  kInvalidPulse,
  kInvalidRoot,
  kTrivialFanout,
  kParameter,
  kShape,
  kOutOfDomain,
  kParse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGeometry: return "invalid-geometry";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kUnsupportedStrategy: return "unsupported-strategy";
    case ErrorCode::kInvalidPulse: return "invalid-pulse";
    case ErrorCode::kInvalidRoot: return "invalid-root";
    case ErrorCode::kTrivialFanout: return "trivial-fanout";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kOutOfDomain: return "out-of-domain";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lrfanout
