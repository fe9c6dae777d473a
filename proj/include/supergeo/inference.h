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
#ifndef SUPERGEO_INFERENCE_H_
#define SUPERGEO_INFERENCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supergeo/experiment.h"
#include "supergeo/scoring.h"

namespace supergeo {

enum class CiMethod { kTApprox, kPermutationInversion };

std::string CiMethodName(CiMethod method);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.8;
  CiMethod method = CiMethod::kTApprox;
  double point = 0.0;
  double std_error = 0.0;

  bool Contains(double theta) const { return lower <= theta && theta <= upper; }
};

// point +- t_{K'-1, (1+level)/2} * SE over the untrimmed pairs, where point
// is their ratio estimate and SE the studentized residual standard error.
ConfidenceInterval CiTApprox(std::span<const PairDiff> diffs, double level,
                             std::span<const int> trimmed = {});

struct PermutationTestResult {
  double p_value = 1.0;
  int64_t num_draws = 0;   // requested draws
  int64_t evaluated = 0;   // assignments actually compared
  int64_t extreme = 0;     // |theta_a - theta*| >= |theta_hat - theta*|
  bool exhaustive = false;
  double statistic = 0.0;  // observed theta_hat
  double theta_star = 0.0;
};

// Signs implied by the observed groups of a design's geos.
Assignment AssignmentFromObserved(const SupergeoDesign& design,
                                  const ObservedOutcomes& observed);

// Randomization test of theta_g = theta_star for all g. The hypothesized
// effect is removed from the treated responses; each re-drawn assignment gets
// a fresh heavy-up plan with the same budget and theta_star re-injected.
// When 2^K <= num_draws all assignments are enumerated and
// p = #extreme / 2^K (the observed one included); otherwise
// p = (1 + #extreme) / (num_draws + 1) over seeded draws.
PermutationTestResult PermutationTest(const SupergeoDesign& design,
                                      const ObservedOutcomes& observed,
                                      double theta_star, int64_t num_draws,
                                      uint64_t seed);

// Hull of the grid points not rejected at 1 - level. Default grid:
// theta_hat +- 5 * SE at 101 points. Throws EmptyAcceptanceRegion.
ConfidenceInterval InvertPermutationCi(const SupergeoDesign& design,
                                       const ObservedOutcomes& observed,
                                       double level, int64_t num_draws,
                                       uint64_t seed,
                                       std::optional<std::vector<double>> grid =
                                           std::nullopt);

std::vector<double> DefaultCiGrid(double point, double std_error);

}  // namespace supergeo

#endif  // SUPERGEO_INFERENCE_H_
