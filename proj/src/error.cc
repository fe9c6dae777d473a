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
#include "supergeo/error.h"

namespace supergeo {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingValue: return "MissingValue";
    case ErrorCode::kNegativeValue: return "NegativeValue";
    case ErrorCode::kDuplicateGeoPeriod: return "DuplicateGeoPeriod";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kSubsetTooLarge: return "SubsetTooLarge";
    case ErrorCode::kSubsetTooSmall: return "SubsetTooSmall";
    case ErrorCode::kUnknownGeo: return "UnknownGeo";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kPoolTooLarge: return "PoolTooLarge";
    case ErrorCode::kPartitionTooSmall: return "PartitionTooSmall";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kTimeoutNoIncumbent: return "TimeoutNoIncumbent";
    case ErrorCode::kOddCount: return "OddCount";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kAllFailed: return "AllFailed";
    case ErrorCode::kZeroTreatedSpend: return "ZeroTreatedSpend";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kZeroMeanZ: return "ZeroMeanZ";
    case ErrorCode::kZeroWeights: return "ZeroWeights";
    case ErrorCode::kEmptyAcceptanceRegion: return "EmptyAcceptanceRegion";
    case ErrorCode::kInfeasibleBound: return "InfeasibleBound";
  }
  return "Unknown";
}

}  // namespace supergeo
