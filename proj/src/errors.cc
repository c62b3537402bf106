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

#include "pgac/errors.h"

namespace pgac {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotStable: return "NotStable";
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kNotStabilizing: return "NotStabilizing";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotPositiveDefinite: return "NotPD";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kCertificateViolated: return "CertificateViolated";
    case ErrorCode::kNotPersistentlyExciting: return "NotPersistentlyExciting";
    case ErrorCode::kOracleUnavailable: return "OracleUnavailable";
    case ErrorCode::kNotStabilizingForEstimate:
      return "NotStabilizingForEstimate";
    case ErrorCode::kNotStabilizingForData: return "NotStabilizingForData";
    case ErrorCode::kConstraintViolated: return "ConstraintViolated";
    case ErrorCode::kNegativeLambda: return "NegativeLambda";
    case ErrorCode::kRuleMismatch: return "RuleMismatch";
    case ErrorCode::kInitialGainUnstable: return "InitialGainUnstable";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pgac
