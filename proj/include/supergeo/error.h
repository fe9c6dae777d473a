/*
* Copyright 2026 The Supergeo Authors.
*
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
* ============================================================================
*/
#ifndef SUPERGEO_ERROR_H_
#define SUPERGEO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace supergeo {

// Every failure the library reports carries one of these codes so that
// callers (and the CLI exit-code mapping) can branch without parsing text.
enum class ErrorCode {
  // geo_data
  kMissingValue,
  kNegativeValue,
  kDuplicateGeoPeriod,
  kBadHeader,
  kBadValue,
  kIo,
  // scoring
  kSubsetTooLarge,
  kSubsetTooSmall,
  kUnknownGeo,
  // design_search
  kInvalidConfig,
  kPoolTooLarge,
  kPartitionTooSmall,
  kInfeasible,
  kTimeoutNoIncumbent,
  kOddCount,
  kTooLarge,
  kAllFailed,
  // experiment / effects
  kZeroTreatedSpend,
  kZeroDenominator,
  kTooFewPairs,
  kNoConvergence,
  kZeroMeanZ,
  kZeroWeights,
  // inference
  kEmptyAcceptanceRegion,
  // instance_gen
  kInfeasibleBound,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace supergeo

#endif  // SUPERGEO_ERROR_H_
