// Copyright 2026 The PGAC Authors
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

#ifndef PGAC_ERRORS_H_
#define PGAC_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pgac {

enum class ErrorCode {
  kNotStable,
  kNonSymmetric,
  kNotStabilizing,
  kNoConvergence,
  kRankDeficient,
  kNotPositiveDefinite,
  kDimensionMismatch,
  kCertificateViolated,
  kNotPersistentlyExciting,
  kOracleUnavailable,
  kNotStabilizingForEstimate,
  kNotStabilizingForData,
  kConstraintViolated,
  kNegativeLambda,
  kRuleMismatch,
  kInitialGainUnstable,
  kConfigInvalid,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the controller failure policy, the CLI exit codes) can dispatch on
// it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pgac

#endif  // PGAC_ERRORS_H_
