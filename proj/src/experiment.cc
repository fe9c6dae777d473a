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
#include "supergeo/experiment.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "supergeo/error.h"
#include "supergeo/rng.h"

namespace supergeo {
namespace {

constexpr int kMaxFixedPointIterations = 100;
constexpr double kFixedPointTolerance = 1e-9;

std::vector<char> TrimMask(size_t k, std::span<const int> trimmed) {
  std::vector<char> mask(k, 0);
  for (int i : trimmed) {
    if (i < 0 || static_cast<size_t>(i) >= k) {
      throw Error(ErrorCode::kInvalidConfig,
                  "trimmed pair id " + std::to_string(i) + " out of range");
    }
    mask[i] = 1;
  }
  return mask;
}

// Sum of dS over untrimmed pairs, with the scale used for the zero guard.
std::pair<double, double> UntrimmedSpend(std::span<const PairDiff> diffs,
                                         const std::vector<char>& mask) {
  double sum = 0.0, scale = 0.0;
  for (size_t k = 0; k < diffs.size(); ++k) {
    if (mask[k]) continue;
    sum += diffs[k].spend;
    scale += std::abs(diffs[k].spend);
  }
  return {sum, scale};
}

}  // namespace

Assignment AssignmentFromSigns(const SupergeoDesign& design,
                               std::vector<int> signs) {
  if (signs.size() != design.pairs.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "expected " + std::to_string(design.pairs.size()) + " signs");
  }
  Assignment a;
  for (size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] != 1 && signs[k] != -1) {
      throw Error(ErrorCode::kInvalidConfig, "signs must be +1 or -1");
    }
    const SupergeoPair& pair = design.pairs[k];
    const auto& t = signs[k] > 0 ? pair.plus : pair.minus;
    const auto& c = signs[k] > 0 ? pair.minus : pair.plus;
    a.treated.insert(a.treated.end(), t.begin(), t.end());
    a.control.insert(a.control.end(), c.begin(), c.end());
  }
  std::sort(a.treated.begin(), a.treated.end());
  std::sort(a.control.begin(), a.control.end());
  a.signs = std::move(signs);
  return a;
}

Assignment DrawAssignment(const SupergeoDesign& design, uint64_t seed,
                          uint64_t index) {
  const CounterRng rng(seed, index);
  std::vector<int> signs(design.pairs.size());
  for (size_t k = 0; k < signs.size(); ++k) signs[k] = rng.Sign(k);
  Assignment a = AssignmentFromSigns(design, std::move(signs));
  a.seed = seed;
  a.index = index;
  return a;
}

Assignment EnumeratedAssignment(const SupergeoDesign& design, uint64_t code) {
  std::vector<int> signs(design.pairs.size());
  for (size_t k = 0; k < signs.size(); ++k) {
    signs[k] = ((code >> k) & 1u) ? 1 : -1;
  }
  Assignment a = AssignmentFromSigns(design, std::move(signs));
  a.index = code;
  return a;
}

SpendPlan PlanSpend(const Assignment& assignment,
                    std::span<const GeoAggregates> aggs,
                    const ExperimentConfig& cfg) {
  if (!cfg.heavyup) {
    throw Error(ErrorCode::kInvalidConfig, "only heavy-up is supported");
  }
  if (!(cfg.budget > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "budget must be > 0");
  }
  double treated_spend = 0.0;
  for (GeoIndex g : assignment.treated) treated_spend += aggs[g].initial_spend;
  if (!(treated_spend > 0.0)) {
    throw Error(ErrorCode::kZeroTreatedSpend,
                "treated geos have no initial spend");
  }
  SpendPlan plan;
  plan.budget = cfg.budget;
  plan.rate = cfg.budget / treated_spend;
  plan.delta.assign(aggs.size(), 0.0);
  plan.realized_spend.resize(aggs.size());
  for (size_t g = 0; g < aggs.size(); ++g) {
    plan.realized_spend[g] = aggs[g].initial_spend;
  }
  for (GeoIndex g : assignment.treated) {
    plan.delta[g] = plan.rate * aggs[g].initial_spend;
    plan.realized_spend[g] += plan.delta[g];
  }
  return plan;
}

ObservedOutcomes InjectEffects(std::span<const GeoAggregates> aggs,
                               const Assignment& assignment,
                               const SpendPlan& plan,
                               std::span<const double> theta_g,
                               std::span<const double> base_response) {
  const size_t n = aggs.size();
  if (theta_g.size() != n || plan.delta.size() != n ||
      (!base_response.empty() && base_response.size() != n)) {
    throw Error(ErrorCode::kInvalidConfig, "per-geo inputs differ in size");
  }
  ObservedOutcomes out;
  out.group.assign(n, Group::kExcluded);
  out.response.resize(n);
  out.spend.assign(n, 0.0);
  out.baseline_spend.resize(n);
  for (size_t g = 0; g < n; ++g) {
    out.response[g] =
        base_response.empty() ? aggs[g].test_response : base_response[g];
    out.baseline_spend[g] = aggs[g].initial_spend;
  }
  for (GeoIndex g : assignment.control) out.group[g] = Group::kControl;
  for (GeoIndex g : assignment.treated) {
    out.group[g] = Group::kTreated;
    out.spend[g] = plan.delta[g];
    out.response[g] += theta_g[g] * plan.delta[g];
  }
  return out;
}

double EmpiricalEstimator(const ObservedOutcomes& observed) {
  double num = 0.0, den = 0.0, total_spend = 0.0;
  for (size_t g = 0; g < observed.num_geos(); ++g) {
    const int sign = static_cast<int>(observed.group[g]);
    if (sign == 0) continue;
    num += sign * observed.response[g];
    den += sign * observed.spend[g];
    total_spend += std::abs(observed.spend[g]) + observed.baseline_spend[g];
  }
  if (!(std::abs(den) >= 1e-12 * total_spend) || den == 0.0) {
    throw Error(ErrorCode::kZeroDenominator,
                "treated and control spends do not differ");
  }
  return num / den;
}

std::vector<PairDiff> PairDiffs(const ObservedOutcomes& observed,
                                const SupergeoDesign& design,
                                const Assignment& assignment) {
  if (assignment.signs.size() != design.pairs.size()) {
    throw Error(ErrorCode::kInvalidConfig, "assignment does not match design");
  }
  std::vector<PairDiff> diffs(design.pairs.size());
  for (size_t k = 0; k < diffs.size(); ++k) {
    const SupergeoPair& pair = design.pairs[k];
    PairDiff d;
    for (GeoIndex g : pair.plus) {
      d.response += observed.response[g];
      d.spend += observed.spend[g];
    }
    for (GeoIndex g : pair.minus) {
      d.response -= observed.response[g];
      d.spend -= observed.spend[g];
    }
    d.response *= assignment.signs[k];
    d.spend *= assignment.signs[k];
    diffs[k] = d;
  }
  return diffs;
}

double UntrimmedRatio(std::span<const PairDiff> diffs,
                      std::span<const int> trimmed) {
  const auto mask = TrimMask(diffs.size(), trimmed);
  double num = 0.0;
  for (size_t k = 0; k < diffs.size(); ++k) {
    if (!mask[k]) num += diffs[k].response;
  }
  const auto [den, scale] = UntrimmedSpend(diffs, mask);
  if (den == 0.0 || std::abs(den) < 1e-12 * scale) {
    throw Error(ErrorCode::kZeroDenominator, "untrimmed spend difference is 0");
  }
  return num / den;
}

double StudentizedStdError(std::span<const PairDiff> diffs,
                           std::span<const int> trimmed, double theta) {
  const auto mask = TrimMask(diffs.size(), trimmed);
  std::vector<double> residuals;
  for (size_t k = 0; k < diffs.size(); ++k) {
    if (!mask[k]) residuals.push_back(diffs[k].response - theta * diffs[k].spend);
  }
  const double kept = static_cast<double>(residuals.size());
  if (residuals.size() < 2) {
    throw Error(ErrorCode::kTooFewPairs, "need at least 2 untrimmed pairs");
  }
  const double mean =
      std::accumulate(residuals.begin(), residuals.end(), 0.0) / kept;
  double ss = 0.0;
  for (double e : residuals) ss += (e - mean) * (e - mean);
  const double den = UntrimmedSpend(diffs, mask).first;
  if (den == 0.0) {
    throw Error(ErrorCode::kZeroDenominator, "untrimmed spend difference is 0");
  }
  return std::sqrt(kept * ss / (kept - 1.0)) / std::abs(den);
}

double StudentTQuantile(double df, double p) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, p);
}

TrimmedMatchResult TrimmedMatch(std::span<const PairDiff> diffs,
                                double max_trim_fraction) {
  const int k_pairs = static_cast<int>(diffs.size());
  if (k_pairs < 3) {
    throw Error(ErrorCode::kTooFewPairs,
                std::to_string(k_pairs) + " pairs; need at least 3");
  }
  if (!(max_trim_fraction >= 0.0 && max_trim_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "trim fraction must be in [0, 1)");
  }
  const int q_max = std::min(
      static_cast<int>(std::floor(max_trim_fraction * k_pairs + 1e-9)),
      k_pairs - 2);
  const double theta_all = UntrimmedRatio(diffs, {});

  TrimmedMatchResult result;
  std::vector<int> order(k_pairs);
  std::vector<double> abs_residual(k_pairs);
  for (int q = 0; q <= q_max; ++q) {
    TrimCandidate cand;
    cand.trim_count = q;
    double theta = theta_all;
    if (q > 0) {
      cand.converged = false;
      for (int it = 0; it < kMaxFixedPointIterations; ++it) {
        for (int k = 0; k < k_pairs; ++k) {
          abs_residual[k] =
              std::abs(diffs[k].response - theta * diffs[k].spend);
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return abs_residual[a] > abs_residual[b];
        });
        cand.trimmed.assign(order.begin(), order.begin() + q);
        std::sort(cand.trimmed.begin(), cand.trimmed.end());
        double next;
        try {
          next = UntrimmedRatio(diffs, cand.trimmed);
        } catch (const Error&) {
          cand.feasible = false;
          break;
        }
        const bool done = std::abs(next - theta) <=
                          kFixedPointTolerance * std::max(1.0, std::abs(theta));
        theta = next;
        if (done) {
          cand.converged = true;
          break;
        }
      }
    }
    if (cand.feasible) {
      cand.theta = theta;
      cand.std_error = StudentizedStdError(diffs, cand.trimmed, theta);
      cand.half_width =
          StudentTQuantile(k_pairs - q - 1, 0.975) * cand.std_error;
    }
    result.candidates.push_back(std::move(cand));
  }

  const TrimCandidate* best = nullptr;
  for (const TrimCandidate& c : result.candidates) {
    if (!c.feasible) continue;
    if (best == nullptr || c.half_width < best->half_width) best = &c;
  }
  // q = 0 is always feasible since theta_all exists.
  result.estimate = best->theta;
  result.q_star = best->trim_count;
  result.trimmed = best->trimmed;
  result.std_error = best->std_error;
  result.converged = best->converged;
  return result;
}

TrimmedMatchResult TrimmedMatchEstimator(const ObservedOutcomes& observed,
                                         const Assignment& assignment,
                                         const SupergeoDesign& design,
                                         double max_trim_fraction) {
  const auto diffs = PairDiffs(observed, design, assignment);
  return TrimmedMatch(diffs, max_trim_fraction);
}

ErrorDecomposition DecomposeError(const ObservedOutcomes& observed,
                                  const Assignment& assignment,
                                  const SupergeoDesign& design,
                                  std::span<const double> theta_g,
                                  double theta, const SpendPlan& plan) {
  const size_t n = observed.num_geos();
  if (theta_g.size() != n) {
    throw Error(ErrorCode::kInvalidConfig, "theta_g size mismatch");
  }
  const double budget = plan.budget;
  auto uninfluenced = [&](GeoIndex g) {
    const double base = observed.response[g] - theta_g[g] * observed.spend[g];
    return base - (theta_g[g] - theta) * observed.baseline_spend[g];
  };

  ErrorDecomposition d;
  double matching = 0.0;
  for (size_t k = 0; k < design.pairs.size(); ++k) {
    double diff = 0.0;
    for (GeoIndex g : design.pairs[k].plus) diff += uninfluenced(g);
    for (GeoIndex g : design.pairs[k].minus) diff -= uninfluenced(g);
    matching += assignment.signs[k] * diff;
  }
  d.err1 = matching / budget;

  double imbalance = 0.0, within = 0.0;
  for (GeoIndex g : assignment.treated) {
    imbalance += (theta_g[g] - theta) * observed.baseline_spend[g];
    within += (theta_g[g] - theta) * plan.delta[g];
  }
  for (GeoIndex g : assignment.control) {
    imbalance -= (theta_g[g] - theta) * observed.baseline_spend[g];
  }
  d.err2 = imbalance / budget;
  d.err3 = within / budget;
  d.total = EmpiricalEstimator(observed) - theta;
  return d;
}

}  // namespace supergeo
