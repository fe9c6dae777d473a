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
#ifndef SUPERGEO_EVAL_HARNESS_H_
#define SUPERGEO_EVAL_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supergeo/design_search.h"
#include "supergeo/effects.h"
#include "supergeo/experiment.h"
#include "supergeo/geo_data.h"
#include "supergeo/scoring.h"

namespace supergeo {

struct AdversaryConfig {
  double eta = 0.0;  // in [0, 1)
};

enum class EstimatorKind { kEmpirical, kTrimmedMatch };

std::string EstimatorName(EstimatorKind kind);

struct EvalConfig {
  int iterations = 2000;
  double budget = 1.0;
  EffectModel effects;
  std::vector<EstimatorKind> estimators = {EstimatorKind::kEmpirical};
  double max_trim_fraction = 0.25;
  // Coverage of t-approximation intervals at this level, if set.
  std::optional<double> ci_level;
  // Enumerate all 2^K assignments instead of sampling `iterations` of them.
  bool exhaustive = false;
  std::optional<AdversaryConfig> adversary;
  uint64_t seed = 0;
  int jobs = 1;

  void Validate() const;
};

struct NamedDesign {
  std::string name;
  SupergeoDesign design;
};

struct MethodReport {
  std::string design;
  EstimatorKind estimator = EstimatorKind::kEmpirical;
  double theta = 0.0;  // target estimand over the design's geos
  double rmse = 0.0;
  double bias = 0.0;   // mean(theta_hat) - theta
  double abs_bias = 0.0;
  double variance = 0.0;  // population variance of the estimates
  std::optional<double> coverage;
  int64_t iterations = 0;  // assignments drawn or enumerated
  int64_t failures = 0;
  std::vector<int64_t> iters;       // iteration index of each estimate
  std::vector<double> estimates;
};

struct EvalReport {
  EvalConfig config;
  std::vector<MethodReport> methods;  // design-major, then estimator order
};

EvalReport RunEval(std::span<const GeoAggregates> aggs,
                   std::span<const NamedDesign> designs, const EvalConfig& cfg);

// Worst-case perturbation of the uninfluenced responses for a fixed pairing:
// the side with the larger total is scaled by (1 + eta), the other by
// (1 - eta). Geos outside the design are unchanged.
std::vector<double> ApplyAdversary(const SupergeoDesign& design,
                                   std::span<const double> z, double eta);

// (1/B^2) * sum_k (|Z+ - Z-| + eta * Z+ + eta * Z-)^2
double AdversarialWorstCaseVariance(const SupergeoDesign& design,
                                    std::span<const double> z, double eta,
                                    double budget);

// (1/B^2) * sum_k (Z+ - Z-)^2 on the stored splits.
double DesignVariance(const SupergeoDesign& design, std::span<const double> z,
                      double budget);

struct SweepRow {
  int max_size = 0;
  int num_pairs = 0;
  double pretest_loss = 0.0;
  double test_loss = 0.0;
  double rmse = 0.0;
  bool optimal = false;
  SupergeoDesign design;
};

// One design per max size in `sizes` (ascending), each search warm-started
// from the previous design so the pretest loss cannot go up. RMSE comes from
// RunEval with `eval_cfg`; iterations = 0 skips it.
std::vector<SweepRow> SizeSweep(std::span<const GeoAggregates> aggs,
                                std::vector<int> sizes,
                                const DesignConfig& design_cfg,
                                const EvalConfig& eval_cfg);

// Synthetic panel: log-normal(0, 1) geo sizes, 28 pretest and 28 test days,
// daily response size * max(0, 1 + noise * N(0,1)) and spend
// 0.1 * size * max(0, 1 + noise * N(0,1)). Ids geo000, geo001, ...
GeoPanel SynthPanel(int num_geos, uint64_t seed, double noise_level);

inline constexpr int kSynthPretestDays = 28;
inline constexpr int kSynthTestDays = 28;

}  // namespace supergeo

#endif  // SUPERGEO_EVAL_HARNESS_H_
