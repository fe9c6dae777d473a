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
#ifndef SUPERGEO_EXPERIMENT_H_
#define SUPERGEO_EXPERIMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "supergeo/geo_data.h"
#include "supergeo/scoring.h"

namespace supergeo {

// Per-pair signs: +1 treats the plus side, -1 the minus side.
struct Assignment {
  std::vector<int> signs;
  std::vector<GeoIndex> treated;  // sorted
  std::vector<GeoIndex> control;  // sorted
  uint64_t seed = 0;
  uint64_t index = 0;
};

// Fair i.i.d. signs from the counter-based generator keyed by (seed, index).
Assignment DrawAssignment(const SupergeoDesign& design, uint64_t seed,
                          uint64_t index = 0);
Assignment AssignmentFromSigns(const SupergeoDesign& design,
                               std::vector<int> signs);
// Assignment number `code` of the 2^K enumeration: bit k set <=> A_k = +1.
Assignment EnumeratedAssignment(const SupergeoDesign& design, uint64_t code);

struct ExperimentConfig {
  double budget = 1.0;
  bool heavyup = true;  // go-dark is not supported
};

// Heavy-up spend: treated geos get r * S-bar on top of S-bar, with r chosen so
// that the increments add up to the budget.
struct SpendPlan {
  double rate = 0.0;
  double budget = 0.0;
  std::vector<double> delta;           // per geo; 0 unless treated
  std::vector<double> realized_spend;  // per geo; S-bar (+ delta if treated)
};

SpendPlan PlanSpend(const Assignment& assignment,
                    std::span<const GeoAggregates> aggs,
                    const ExperimentConfig& cfg);

enum class Group : int8_t { kExcluded = 0, kTreated = 1, kControl = -1 };

// What the analyst sees after the test window. `spend` is the incremental
// spend (delta for treated geos, 0 for controls), so treated minus control
// spend equals the budget.
struct ObservedOutcomes {
  std::vector<Group> group;
  std::vector<double> response;
  std::vector<double> spend;
  std::vector<double> baseline_spend;

  size_t num_geos() const { return response.size(); }
};

// Treated response = base + theta_g * delta_g; control response = base.
// `base_response` defaults to each geo's test-window response.
ObservedOutcomes InjectEffects(std::span<const GeoAggregates> aggs,
                               const Assignment& assignment,
                               const SpendPlan& plan,
                               std::span<const double> theta_g,
                               std::span<const double> base_response = {});

// Ratio of treated-minus-control response to treated-minus-control spend.
double EmpiricalEstimator(const ObservedOutcomes& observed);

// Signed treated-minus-control differences of one supergeo pair.
struct PairDiff {
  double response = 0.0;
  double spend = 0.0;
};

std::vector<PairDiff> PairDiffs(const ObservedOutcomes& observed,
                                const SupergeoDesign& design,
                                const Assignment& assignment);

struct TrimCandidate {
  int trim_count = 0;
  double theta = 0.0;
  double std_error = 0.0;
  double half_width = 0.0;  // t_{K'-1, 0.975} * std_error
  bool converged = true;
  bool feasible = true;
  std::vector<int> trimmed;  // pair ids, sorted
};

struct TrimmedMatchResult {
  double estimate = 0.0;
  int q_star = 0;
  std::vector<int> trimmed;
  double std_error = 0.0;
  bool converged = true;
  std::vector<TrimCandidate> candidates;
};

// Fixed-point trimmed ratio estimator. For each trim count q up to
// floor(max_trim_fraction * K): alternate between trimming the q largest
// absolute residuals and refitting the ratio on the rest; then keep the q
// with the narrowest 95% t half-width. Throws TooFewPairs for K < 3.
TrimmedMatchResult TrimmedMatch(std::span<const PairDiff> diffs,
                                double max_trim_fraction);

TrimmedMatchResult TrimmedMatchEstimator(const ObservedOutcomes& observed,
                                         const Assignment& assignment,
                                         const SupergeoDesign& design,
                                         double max_trim_fraction);

// Ratio estimate over the pairs not in `trimmed` (sorted pair ids).
double UntrimmedRatio(std::span<const PairDiff> diffs,
                      std::span<const int> trimmed);

// Studentized residual standard error of the ratio over untrimmed pairs:
// sqrt(K'/(K'-1) * sum (e_k - e_bar)^2) / |sum dS_k| with
// e_k = dR_k - theta * dS_k. At the untrimmed ratio e_bar is 0.
double StudentizedStdError(std::span<const PairDiff> diffs,
                           std::span<const int> trimmed, double theta);

struct ErrorDecomposition {
  double err1 = 0.0;
  double err2 = 0.0;
  double err3 = 0.0;
  double total = 0.0;  // theta_hat - theta
};

// Splits theta_hat - theta into the matching error, the treatment/control
// heterogeneity imbalance and the within-treatment heterogeneity term. The
// uninfluenced response used for err1 is base_g - (theta_g - theta) * S-bar_g,
// which makes the three terms add up to the total exactly.
ErrorDecomposition DecomposeError(const ObservedOutcomes& observed,
                                  const Assignment& assignment,
                                  const SupergeoDesign& design,
                                  std::span<const double> theta_g,
                                  double theta, const SpendPlan& plan);

// x with P(T_df <= x) = p for Student's t with `df` degrees of freedom.
double StudentTQuantile(double df, double p);

}  // namespace supergeo

#endif  // SUPERGEO_EXPERIMENT_H_
