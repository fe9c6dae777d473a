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
#include "supergeo/inference.h"

#include <algorithm>
#include <cmath>

#include "supergeo/error.h"

namespace supergeo {
namespace {

constexpr int kGridPoints = 101;
constexpr double kGridHalfWidthSe = 5.0;

// Under heavy-up with a fixed budget every assignment moves the denominator
// to exactly B, so theta_a - theta* is the signed sum of per-pair differences
// of the effect-free responses divided by B.
struct NullDistribution {
  std::vector<double> base_diff;     // per pair, plus minus minus
  std::vector<double> plus_spend;    // per pair, S-bar of the plus side
  std::vector<double> minus_spend;
  double budget = 0.0;
};

NullDistribution BuildNull(const SupergeoDesign& design,
                           const ObservedOutcomes& observed,
                           double theta_star) {
  NullDistribution null;
  for (size_t g = 0; g < observed.num_geos(); ++g) {
    if (observed.group[g] == Group::kTreated) null.budget += observed.spend[g];
    if (observed.group[g] == Group::kControl) null.budget -= observed.spend[g];
  }
  if (!(null.budget > 0.0)) {
    throw Error(ErrorCode::kZeroDenominator, "no incremental spend observed");
  }
  for (const SupergeoPair& pair : design.pairs) {
    double diff = 0.0, plus_spend = 0.0, minus_spend = 0.0;
    for (GeoIndex g : pair.plus) {
      diff += observed.response[g] - theta_star * observed.spend[g];
      plus_spend += observed.baseline_spend[g];
    }
    for (GeoIndex g : pair.minus) {
      diff -= observed.response[g] - theta_star * observed.spend[g];
      minus_spend += observed.baseline_spend[g];
    }
    null.base_diff.push_back(diff);
    null.plus_spend.push_back(plus_spend);
    null.minus_spend.push_back(minus_spend);
  }
  return null;
}

// theta_a - theta* for one sign vector.
double NullDeviation(const NullDistribution& null, std::span<const int> signs) {
  double num = 0.0, treated_spend = 0.0;
  for (size_t k = 0; k < signs.size(); ++k) {
    num += signs[k] * null.base_diff[k];
    treated_spend += signs[k] > 0 ? null.plus_spend[k] : null.minus_spend[k];
  }
  if (!(treated_spend > 0.0)) {
    throw Error(ErrorCode::kZeroTreatedSpend,
                "treated geos have no initial spend");
  }
  const double rate = null.budget / treated_spend;
  return num / (rate * treated_spend);
}

}  // namespace

std::string CiMethodName(CiMethod method) {
  return method == CiMethod::kTApprox ? "t_approx" : "permutation_inversion";
}

ConfidenceInterval CiTApprox(std::span<const PairDiff> diffs, double level,
                             std::span<const int> trimmed) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "level must be in (0, 1)");
  }
  const int kept = static_cast<int>(diffs.size()) -
                   static_cast<int>(trimmed.size());
  if (kept < 2) {
    throw Error(ErrorCode::kTooFewPairs, "need at least 2 untrimmed pairs");
  }
  ConfidenceInterval ci;
  ci.level = level;
  ci.method = CiMethod::kTApprox;
  ci.point = UntrimmedRatio(diffs, trimmed);
  ci.std_error = StudentizedStdError(diffs, trimmed, ci.point);
  const double half =
      StudentTQuantile(kept - 1, (1.0 + level) / 2.0) * ci.std_error;
  ci.lower = ci.point - half;
  ci.upper = ci.point + half;
  return ci;
}

Assignment AssignmentFromObserved(const SupergeoDesign& design,
                                  const ObservedOutcomes& observed) {
  std::vector<int> signs;
  for (const SupergeoPair& pair : design.pairs) {
    const Group plus = observed.group.at(pair.plus.front());
    const Group minus = observed.group.at(pair.minus.front());
    if (plus == Group::kExcluded || minus == Group::kExcluded ||
        plus == minus) {
      throw Error(ErrorCode::kInvalidConfig,
                  "observed groups do not match the design's pairs");
    }
    signs.push_back(plus == Group::kTreated ? 1 : -1);
  }
  Assignment a = AssignmentFromSigns(design, std::move(signs));
  for (GeoIndex g : a.treated) {
    if (observed.group[g] != Group::kTreated) {
      throw Error(ErrorCode::kInvalidConfig, "pair side is not uniformly assigned");
    }
  }
  for (GeoIndex g : a.control) {
    if (observed.group[g] != Group::kControl) {
      throw Error(ErrorCode::kInvalidConfig, "pair side is not uniformly assigned");
    }
  }
  return a;
}

PermutationTestResult PermutationTest(const SupergeoDesign& design,
                                      const ObservedOutcomes& observed,
                                      double theta_star, int64_t num_draws,
                                      uint64_t seed) {
  if (num_draws < 1) {
    throw Error(ErrorCode::kInvalidConfig, "need at least 1 permutation draw");
  }
  const size_t k_pairs = design.pairs.size();
  if (k_pairs < 1) {
    throw Error(ErrorCode::kInvalidConfig, "design has no pairs");
  }
  PermutationTestResult result;
  result.num_draws = num_draws;
  result.theta_star = theta_star;
  result.statistic = EmpiricalEstimator(observed);

  const NullDistribution null = BuildNull(design, observed, theta_star);
  const double observed_dev = std::abs(result.statistic - theta_star);
  const double tol =
      1e-9 * std::max({1.0, std::abs(result.statistic), std::abs(theta_star)});
  auto is_extreme = [&](double dev) {
    return std::abs(dev) >= observed_dev - tol;
  };

  std::vector<int> signs(k_pairs);
  if (k_pairs < 63 && (int64_t{1} << k_pairs) <= num_draws) {
    result.exhaustive = true;
    const int64_t total = int64_t{1} << k_pairs;
    for (int64_t code = 0; code < total; ++code) {
      for (size_t k = 0; k < k_pairs; ++k) signs[k] = ((code >> k) & 1) ? 1 : -1;
      if (is_extreme(NullDeviation(null, signs))) ++result.extreme;
    }
    result.evaluated = total;
    result.p_value = static_cast<double>(result.extreme) / total;
    return result;
  }
  for (int64_t m = 0; m < num_draws; ++m) {
    const Assignment a = DrawAssignment(design, seed, m);
    if (is_extreme(NullDeviation(null, a.signs))) ++result.extreme;
  }
  result.evaluated = num_draws;
  result.p_value = static_cast<double>(1 + result.extreme) / (num_draws + 1);
  return result;
}

std::vector<double> DefaultCiGrid(double point, double std_error) {
  std::vector<double> grid(kGridPoints);
  const double step = 2.0 * kGridHalfWidthSe * std_error / (kGridPoints - 1);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = point - kGridHalfWidthSe * std_error + i * step;
  }
  grid[kGridPoints / 2] = point;
  return grid;
}

ConfidenceInterval InvertPermutationCi(const SupergeoDesign& design,
                                       const ObservedOutcomes& observed,
                                       double level, int64_t num_draws,
                                       uint64_t seed,
                                       std::optional<std::vector<double>> grid) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "level must be in (0, 1)");
  }
  ConfidenceInterval ci;
  ci.level = level;
  ci.method = CiMethod::kPermutationInversion;
  ci.point = EmpiricalEstimator(observed);
  const Assignment a = AssignmentFromObserved(design, observed);
  const auto diffs = PairDiffs(observed, design, a);
  ci.std_error = diffs.size() >= 2
                     ? StudentizedStdError(diffs, {}, UntrimmedRatio(diffs, {}))
                     : 0.0;
  if (!grid) grid = DefaultCiGrid(ci.point, ci.std_error);
  if (grid->empty()) {
    throw Error(ErrorCode::kInvalidConfig, "empty grid");
  }

  const double alpha = 1.0 - level;
  bool any = false;
  for (double theta_star : *grid) {
    const auto test = PermutationTest(design, observed, theta_star, num_draws,
                                      seed);
    if (test.p_value <= alpha) continue;
    if (!any) {
      ci.lower = ci.upper = theta_star;
      any = true;
    }
    ci.lower = std::min(ci.lower, theta_star);
    ci.upper = std::max(ci.upper, theta_star);
  }
  if (!any) {
    throw Error(ErrorCode::kEmptyAcceptanceRegion,
                "every grid point is rejected at level " + std::to_string(level));
  }
  return ci;
}

}  // namespace supergeo
