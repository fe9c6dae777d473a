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
#include "supergeo/eval_harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "supergeo/error.h"
#include "supergeo/inference.h"
#include "supergeo/rng.h"

namespace supergeo {
namespace {

// Neumaier compensated sum; the result depends only on the input order.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Draw {
  double estimate = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  bool covered = false;
};

constexpr int kMaxEnumeratedPairs = 24;

// Runs fn(m) for m in [0, n) on up to `jobs` threads.
template <typename Fn>
void ParallelFor(int64_t n, int jobs, Fn fn) {
  const int workers = static_cast<int>(
      std::max<int64_t>(1, std::min<int64_t>(jobs, n)));
  if (workers == 1) {
    for (int64_t m = 0; m < n; ++m) fn(m);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int64_t m = next++; m < n; m = next++) fn(m);
    });
  }
  for (auto& t : threads) t.join();
}

MethodReport Summarize(const std::string& design, EstimatorKind kind,
                       double theta, const std::vector<Draw>& draws,
                       bool with_coverage) {
  MethodReport r;
  r.design = design;
  r.estimator = kind;
  r.theta = theta;
  r.iterations = static_cast<int64_t>(draws.size());
  CompensatedSum sum, covered;
  for (size_t m = 0; m < draws.size(); ++m) {
    if (!draws[m].ok) {
      ++r.failures;
      continue;
    }
    r.iters.push_back(static_cast<int64_t>(m));
    r.estimates.push_back(draws[m].estimate);
    sum.Add(draws[m].estimate);
    covered.Add(draws[m].covered ? 1.0 : 0.0);
  }
  const double n = static_cast<double>(r.estimates.size());
  if (n == 0) {
    r.rmse = r.bias = r.abs_bias = r.variance =
        std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double mean = sum.value() / n;
  CompensatedSum sq_err, sq_dev;
  for (double e : r.estimates) {
    sq_err.Add((e - theta) * (e - theta));
    sq_dev.Add((e - mean) * (e - mean));
  }
  r.rmse = std::sqrt(sq_err.value() / n);
  r.bias = mean - theta;
  r.abs_bias = std::abs(r.bias);
  r.variance = sq_dev.value() / n;
  if (with_coverage) r.coverage = covered.value() / n;
  return r;
}

}  // namespace

std::string EstimatorName(EstimatorKind kind) {
  return kind == EstimatorKind::kEmpirical ? "empirical" : "trimmed_match";
}

void EvalConfig::Validate() const {
  if (iterations < 1 && !exhaustive) {
    throw Error(ErrorCode::kInvalidConfig, "iterations must be >= 1");
  }
  if (!(budget > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "budget must be > 0");
  }
  if (estimators.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no estimators requested");
  }
  if (!(max_trim_fraction >= 0.0 && max_trim_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "trim fraction must be in [0, 1)");
  }
  if (ci_level && !(*ci_level > 0.0 && *ci_level < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "CI level must be in (0, 1)");
  }
  if (adversary && !(adversary->eta >= 0.0 && adversary->eta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "eta must be in [0, 1)");
  }
  if (jobs < 1) {
    throw Error(ErrorCode::kInvalidConfig, "jobs must be >= 1");
  }
}

EvalReport RunEval(std::span<const GeoAggregates> aggs,
                   std::span<const NamedDesign> designs,
                   const EvalConfig& cfg) {
  cfg.Validate();
  EvalReport report;
  report.config = cfg;
  const std::vector<double> theta_g = MakeEffects(cfg.effects, aggs);
  const std::vector<double> z_test = TestResponses(aggs);
  const ExperimentConfig exp_cfg{cfg.budget, true};

  for (const NamedDesign& named : designs) {
    const SupergeoDesign& design = named.design;
    if (design.pairs.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "design '" + named.name + "' has no pairs");
    }
    std::vector<double> weights(aggs.size(), 0.0);
    for (GeoIndex g : design.covered) weights[g] = aggs[g].initial_spend;
    const double theta = TargetTheta(theta_g, weights).theta;

    std::vector<double> base;
    if (cfg.adversary) base = ApplyAdversary(design, z_test, cfg.adversary->eta);

    int64_t n_iter = cfg.iterations;
    if (cfg.exhaustive) {
      if (design.num_pairs() > kMaxEnumeratedPairs) {
        throw Error(ErrorCode::kTooLarge,
                    "too many pairs to enumerate all assignments");
      }
      n_iter = int64_t{1} << design.num_pairs();
    }

    const size_t n_est = cfg.estimators.size();
    std::vector<std::vector<Draw>> draws(n_est, std::vector<Draw>(n_iter));
    ParallelFor(n_iter, cfg.jobs, [&](int64_t m) {
      ObservedOutcomes obs;
      std::vector<PairDiff> diffs;
      Assignment a;
      try {
        a = cfg.exhaustive ? EnumeratedAssignment(design, m)
                           : DrawAssignment(design, cfg.seed, m);
        const SpendPlan plan = PlanSpend(a, aggs, exp_cfg);
        obs = InjectEffects(aggs, a, plan, theta_g, base);
        diffs = PairDiffs(obs, design, a);
      } catch (const Error&) {
        return;
      }
      for (size_t e = 0; e < n_est; ++e) {
        Draw& d = draws[e][m];
        try {
          std::vector<int> trimmed;
          if (cfg.estimators[e] == EstimatorKind::kEmpirical) {
            d.estimate = EmpiricalEstimator(obs);
          } else {
            TrimmedMatchResult t = TrimmedMatch(diffs, cfg.max_trim_fraction);
            d.estimate = t.estimate;
            trimmed = std::move(t.trimmed);
          }
          if (cfg.ci_level) {
            d.covered = CiTApprox(diffs, *cfg.ci_level, trimmed).Contains(theta);
          }
          d.ok = true;
        } catch (const Error&) {
          d.ok = false;
        }
      }
    });
    for (size_t e = 0; e < n_est; ++e) {
      report.methods.push_back(Summarize(named.name, cfg.estimators[e], theta,
                                         draws[e], cfg.ci_level.has_value()));
    }
  }
  return report;
}

std::vector<double> ApplyAdversary(const SupergeoDesign& design,
                                   std::span<const double> z, double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "eta must be in [0, 1)");
  }
  std::vector<double> out(z.begin(), z.end());
  for (const SupergeoPair& pair : design.pairs) {
    double plus = 0.0, minus = 0.0;
    for (GeoIndex g : pair.plus) plus += z[g];
    for (GeoIndex g : pair.minus) minus += z[g];
    const bool plus_larger = plus >= minus;
    for (GeoIndex g : pair.plus) out[g] *= plus_larger ? 1.0 + eta : 1.0 - eta;
    for (GeoIndex g : pair.minus) out[g] *= plus_larger ? 1.0 - eta : 1.0 + eta;
  }
  return out;
}

double AdversarialWorstCaseVariance(const SupergeoDesign& design,
                                    std::span<const double> z, double eta,
                                    double budget) {
  double total = 0.0;
  for (const SupergeoPair& pair : design.pairs) {
    double plus = 0.0, minus = 0.0;
    for (GeoIndex g : pair.plus) plus += z[g];
    for (GeoIndex g : pair.minus) minus += z[g];
    const double term = std::abs(plus - minus) + eta * plus + eta * minus;
    total += term * term;
  }
  return total / (budget * budget);
}

double DesignVariance(const SupergeoDesign& design, std::span<const double> z,
                      double budget) {
  return DesignLoss(design, z) / (budget * budget);
}

std::vector<SweepRow> SizeSweep(std::span<const GeoAggregates> aggs,
                                std::vector<int> sizes,
                                const DesignConfig& design_cfg,
                                const EvalConfig& eval_cfg) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const std::vector<double> z_pre = PretestResponses(aggs);
  const std::vector<double> z_test = TestResponses(aggs);
  const int n = static_cast<int>(aggs.size());

  std::vector<SweepRow> rows;
  std::optional<SupergeoDesign> previous;
  for (int u : sizes) {
    if (u < 2 || u > 8) {
      throw Error(ErrorCode::kInvalidConfig, "sweep sizes must be in [2, 8]");
    }
    DesignConfig cfg = design_cfg;
    cfg.max_size = u;
    cfg.Validate();
    const CandidatePool pool = BuildPool(z_pre, cfg);
    SolveOptions options;
    if (previous && IsValidDesign(*previous, n, cfg, cfg.require_full_cover)) {
      options.incumbent = previous;
    }
    SweepRow row;
    row.max_size = u;
    row.design = SolvePartition(pool, z_pre, cfg, options);
    row.num_pairs = row.design.num_pairs();
    row.pretest_loss = row.design.loss;
    row.test_loss = DesignLoss(row.design, z_test);
    row.optimal = row.design.optimal;
    if (eval_cfg.iterations > 0 || eval_cfg.exhaustive) {
      const NamedDesign named{"u" + std::to_string(u), row.design};
      row.rmse = RunEval(aggs, {&named, 1}, eval_cfg).methods.front().rmse;
    }
    previous = row.design;
    rows.push_back(std::move(row));
  }
  return rows;
}

GeoPanel SynthPanel(int num_geos, uint64_t seed, double noise_level) {
  if (num_geos < 4) {
    throw Error(ErrorCode::kInvalidConfig, "need at least 4 geos");
  }
  if (!(noise_level >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "noise level must be >= 0");
  }
  constexpr int kDays = kSynthPretestDays + kSynthTestDays;
  const CounterRng sizes(seed, 1);
  const CounterRng response_noise(seed, 2);
  const CounterRng spend_noise(seed, 3);

  int width = 3;
  for (int v = num_geos - 1; v >= 1000; v /= 10) ++width;
  std::vector<std::string> geos(num_geos);
  std::vector<std::vector<double>> response(num_geos), spend(num_geos);
  for (int g = 0; g < num_geos; ++g) {
    std::string digits = std::to_string(g);
    digits.insert(0, width - std::min<int>(width, digits.size()), '0');
    geos[g] = "geo" + digits;
    const double size = std::exp(sizes.Normal(g));
    response[g].resize(kDays);
    spend[g].resize(kDays);
    for (int t = 0; t < kDays; ++t) {
      const uint64_t i = static_cast<uint64_t>(g) * kDays + t;
      // Noise-free panels repeat the same day so both windows agree exactly.
      const double rn = noise_level > 0.0 ? response_noise.Normal(i) : 0.0;
      const double sn = noise_level > 0.0 ? spend_noise.Normal(i) : 0.0;
      response[g][t] = size * std::max(0.0, 1.0 + noise_level * rn);
      spend[g][t] = 0.1 * size * std::max(0.0, 1.0 + noise_level * sn);
    }
  }
  std::vector<int> periods(kDays);
  for (int t = 0; t < kDays; ++t) periods[t] = t;
  LoadOptions options;
  options.pretest_len = kSynthPretestDays;
  return GeoPanel::Create(std::move(geos), std::move(periods),
                          std::move(response), std::move(spend), options);
}

}  // namespace supergeo
