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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "supergeo/design_search.h"
#include "supergeo/effects.h"
#include "supergeo/error.h"
#include "test_util.h"

namespace supergeo {
namespace {

using testing::MakeAggs;
using testing::MakeDesign;
using testing::RelErr;

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kIo;
}

struct Fixture {
  std::vector<GeoAggregates> aggs;
  SupergeoDesign design;
};

// 12 geos with random pretest/test responses and spends, designed by the
// exhaustive solver with pairs up to size 4.
Fixture RandomFixture(uint64_t seed, int n = 12) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> size(1.0, 50.0), noise(0.9, 1.1);
  std::vector<double> pre(n), test(n), spend(n);
  for (int g = 0; g < n; ++g) {
    const double s = size(gen);
    pre[g] = s * noise(gen);
    test[g] = s * noise(gen);
    spend[g] = 0.1 * s * noise(gen);
  }
  Fixture f;
  f.aggs = MakeAggs(pre, test, spend);
  DesignConfig cfg;
  cfg.max_size = 4;
  f.design = SolvePartition(EnumerateCandidates(pre, cfg), pre, cfg);
  return f;
}

TEST(AssignmentTest, ReproducibleAndComplete) {
  const Fixture f = RandomFixture(1);
  const Assignment a = DrawAssignment(f.design, 99, 5);
  const Assignment b = DrawAssignment(f.design, 99, 5);
  EXPECT_EQ(a.signs, b.signs);
  EXPECT_EQ(a.treated, b.treated);
  EXPECT_EQ(a.treated.size() + a.control.size(), f.design.covered.size());
  std::vector<GeoIndex> all = a.treated;
  all.insert(all.end(), a.control.begin(), a.control.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, f.design.covered);
  for (size_t k = 0; k < a.signs.size(); ++k) {
    const auto& treated_side =
        a.signs[k] > 0 ? f.design.pairs[k].plus : f.design.pairs[k].minus;
    for (GeoIndex g : treated_side) {
      EXPECT_TRUE(std::binary_search(a.treated.begin(), a.treated.end(), g));
    }
  }
}

TEST(AssignmentTest, SignsAreFair) {
  const Fixture f = RandomFixture(2);
  const int draws = 2000;
  std::vector<int> plus(f.design.num_pairs(), 0);
  for (int m = 0; m < draws; ++m) {
    const Assignment a = DrawAssignment(f.design, 7, m);
    for (size_t k = 0; k < plus.size(); ++k) plus[k] += a.signs[k] > 0;
  }
  for (int p : plus) {
    EXPECT_GE(p / static_cast<double>(draws), 0.45);
    EXPECT_LE(p / static_cast<double>(draws), 0.55);
  }
}

TEST(AssignmentTest, EnumerationCode) {
  const std::vector<double> z = {1, 2, 3, 4};
  const SupergeoDesign d = MakeDesign({{{1}, {0}}, {{3}, {2}}}, z);
  EXPECT_EQ(EnumeratedAssignment(d, 0b01).signs, (std::vector<int>{1, -1}));
  EXPECT_EQ(EnumeratedAssignment(d, 0b10).signs, (std::vector<int>{-1, 1}));
  EXPECT_EQ(CodeOf([&] { AssignmentFromSigns(d, {1}); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { AssignmentFromSigns(d, {1, 0}); }),
            ErrorCode::kInvalidConfig);
}

TEST(PlanSpendTest, RateAndIncrements) {
  const auto aggs = MakeAggs({1, 1, 1, 1}, {1, 1, 1, 1}, {50, 50, 30, 70});
  const std::vector<double> z = {1, 1, 1, 1};
  const SupergeoDesign d = MakeDesign({{{0, 1}, {2, 3}}}, z);
  const Assignment a = AssignmentFromSigns(d, {1});
  const SpendPlan plan = PlanSpend(a, aggs, {10.0, true});
  EXPECT_DOUBLE_EQ(plan.rate, 0.1);
  EXPECT_DOUBLE_EQ(plan.delta[0], 5.0);
  EXPECT_EQ(plan.delta[2], 0.0);
  EXPECT_EQ(plan.realized_spend[3], 70.0);
  EXPECT_DOUBLE_EQ(plan.realized_spend[1], 55.0);
}

TEST(PlanSpendTest, Errors) {
  const auto aggs = MakeAggs({1, 1}, {1, 1}, {0, 5});
  const std::vector<double> z = {1, 1};
  const SupergeoDesign d = MakeDesign({{{0}, {1}}}, z);
  const Assignment a = AssignmentFromSigns(d, {1});
  EXPECT_EQ(CodeOf([&] { PlanSpend(a, aggs, {1.0, true}); }),
            ErrorCode::kZeroTreatedSpend);
  const Assignment b = AssignmentFromSigns(d, {-1});
  EXPECT_EQ(CodeOf([&] { PlanSpend(b, aggs, {1.0, false}); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { PlanSpend(b, aggs, {0.0, true}); }),
            ErrorCode::kInvalidConfig);
}

TEST(PlanSpendTest, IncrementsAddUpToBudget) {
  const Fixture f = RandomFixture(3);
  for (int m = 0; m < 200; ++m) {
    const Assignment a = DrawAssignment(f.design, 3, m);
    const double budget = 1.0 + m * 0.37;
    const SpendPlan plan = PlanSpend(a, f.aggs, {budget, true});
    double total = 0.0;
    for (double d : plan.delta) total += d;
    EXPECT_LE(RelErr(total, budget), 1e-12);
    for (GeoIndex g : a.control) EXPECT_EQ(plan.delta[g], 0.0);
  }
}

TEST(InjectEffectsTest, TreatedGainControlUnchanged) {
  const auto aggs = MakeAggs({1, 1}, {100, 80}, {50, 50});
  const std::vector<double> z = {1, 1};
  const SupergeoDesign d = MakeDesign({{{0}, {1}}}, z);
  const Assignment a = AssignmentFromSigns(d, {1});
  const SpendPlan plan = PlanSpend(a, aggs, {5.0, true});
  const std::vector<double> theta = {2.0, 2.0};
  const ObservedOutcomes obs = InjectEffects(aggs, a, plan, theta);
  EXPECT_DOUBLE_EQ(obs.response[0], 110.0);
  EXPECT_EQ(obs.response[1], 80.0);
  EXPECT_EQ(obs.group[0], Group::kTreated);
  EXPECT_EQ(obs.group[1], Group::kControl);
  EXPECT_EQ(obs.spend[1], 0.0);
}

TEST(EmpiricalEstimatorTest, Arithmetic) {
  ObservedOutcomes obs;
  obs.group = {Group::kTreated, Group::kTreated, Group::kControl};
  obs.response = {60, 50, 100};
  obs.spend = {40, 20, 50};
  obs.baseline_spend = {0, 0, 0};
  EXPECT_DOUBLE_EQ(EmpiricalEstimator(obs), 1.0);
}

TEST(EmpiricalEstimatorTest, ZeroDenominator) {
  ObservedOutcomes obs;
  obs.group = {Group::kTreated, Group::kControl};
  obs.response = {1, 2};
  obs.spend = {0, 0};
  obs.baseline_spend = {3, 3};
  EXPECT_EQ(CodeOf([&] { EmpiricalEstimator(obs); }),
            ErrorCode::kZeroDenominator);
}

TEST(EmpiricalEstimatorTest, PerfectMatchesRecoverTheta) {
  // Test responses agree within each pair.
  const auto aggs = MakeAggs({3, 3, 8, 5, 3}, {3, 3, 8, 5, 3}, {1, 2, 4, 1, 3});
  const std::vector<double> z = {3, 3, 8, 5, 3};
  const SupergeoDesign d = MakeDesign({{{0}, {1}}, {{2}, {3, 4}}}, z);
  const std::vector<double> theta(5, 2.5);
  for (uint64_t code = 0; code < 4; ++code) {
    const Assignment a = EnumeratedAssignment(d, code);
    const SpendPlan plan = PlanSpend(a, aggs, {7.0, true});
    const ObservedOutcomes obs = InjectEffects(aggs, a, plan, theta);
    EXPECT_NEAR(EmpiricalEstimator(obs), 2.5, 1e-14);
  }
}

TEST(EmpiricalEstimatorTest, SinglePairNoise) {
  const auto aggs = MakeAggs({5, 2}, {5, 2}, {1, 1});
  const std::vector<double> z = {5, 2};
  const SupergeoDesign d = MakeDesign({{{0}, {1}}}, z);
  const std::vector<double> theta = {1.0, 1.0};
  const double budget = 4.0, diff = 3.0;
  for (int sign : {1, -1}) {
    const Assignment a = AssignmentFromSigns(d, {sign});
    const ObservedOutcomes obs =
        InjectEffects(aggs, a, PlanSpend(a, aggs, {budget, true}), theta);
    EXPECT_DOUBLE_EQ(EmpiricalEstimator(obs), 1.0 + sign * diff / budget);
  }
}

TEST(EmpiricalEstimatorTest, ZeroEffectNumeratorIsSignedTestDifference) {
  const Fixture f = RandomFixture(4);
  const std::vector<double> theta(f.aggs.size(), 0.0);
  const double budget = 3.0;
  for (int m = 0; m < 20; ++m) {
    const Assignment a = DrawAssignment(f.design, 4, m);
    const ObservedOutcomes obs =
        InjectEffects(f.aggs, a, PlanSpend(a, f.aggs, {budget, true}), theta);
    double expected = 0.0;
    for (size_t k = 0; k < a.signs.size(); ++k) {
      double d = 0.0;
      for (GeoIndex g : f.design.pairs[k].plus) d += f.aggs[g].test_response;
      for (GeoIndex g : f.design.pairs[k].minus) d -= f.aggs[g].test_response;
      expected += a.signs[k] * d;
    }
    EXPECT_NEAR(EmpiricalEstimator(obs) * budget, expected, 1e-9);
  }
}

// Exact moments over every assignment.
TEST(EmpiricalEstimatorTest, ExhaustiveUnbiasedAndVarianceIdentity) {
  const Fixture f = RandomFixture(5);
  const std::vector<double> theta(f.aggs.size(), 1.7);
  const double budget = 10.0;
  const int k = f.design.num_pairs();
  const uint64_t total = uint64_t{1} << k;
  double sum = 0.0, sq = 0.0;
  for (uint64_t code = 0; code < total; ++code) {
    const Assignment a = EnumeratedAssignment(f.design, code);
    const ObservedOutcomes obs =
        InjectEffects(f.aggs, a, PlanSpend(a, f.aggs, {budget, true}), theta);
    const double est = EmpiricalEstimator(obs);
    sum += est;
    sq += (est - 1.7) * (est - 1.7);
  }
  const std::vector<double> z_test = TestResponses(f.aggs);
  double formula = 0.0;
  for (const auto& pair : f.design.pairs) {
    const double d = PairDifference(pair, z_test);
    formula += d * d;
  }
  formula /= budget * budget;
  EXPECT_NEAR(sum / total, 1.7, 1e-12);
  EXPECT_LE(RelErr(sq / total, formula), 1e-10);
}

TEST(TrimmedMatchTest, NoTrimmingEqualsEmpirical) {
  const Fixture f = RandomFixture(6);
  const std::vector<double> theta(f.aggs.size(), 1.0);
  const Assignment a = DrawAssignment(f.design, 6, 0);
  const ObservedOutcomes obs =
      InjectEffects(f.aggs, a, PlanSpend(a, f.aggs, {5.0, true}), theta);
  const TrimmedMatchResult r = TrimmedMatchEstimator(obs, a, f.design, 0.0);
  EXPECT_EQ(r.q_star, 0);
  EXPECT_TRUE(r.trimmed.empty());
  EXPECT_NEAR(r.estimate, EmpiricalEstimator(obs), 1e-12);
}

TEST(TrimmedMatchTest, OutlierIsTrimmed) {
  std::vector<PairDiff> diffs;
  const double spends[] = {1.0, 1.2, 0.8, 1.1, 0.9};
  const double noise[] = {0.01, -0.02, 0.015, -0.01, 0.005};
  for (int k = 0; k < 5; ++k) diffs.push_back({2.0 * spends[k] + noise[k], spends[k]});
  diffs.push_back({2.0 * 1.0 + 50.0, 1.0});
  const TrimmedMatchResult r = TrimmedMatch(diffs, 0.5);
  for (const TrimCandidate& c : r.candidates) {
    if (c.trim_count >= 1) {
      EXPECT_TRUE(std::find(c.trimmed.begin(), c.trimmed.end(), 5) !=
                  c.trimmed.end())
          << "q = " << c.trim_count;
    }
  }
  EXPECT_GE(r.q_star, 1);
  EXPECT_NEAR(r.estimate, 2.0, 0.05);
}

TEST(TrimmedMatchTest, IdenticalPairs) {
  const std::vector<PairDiff> diffs(6, PairDiff{3.0, 2.0});
  const TrimmedMatchResult r = TrimmedMatch(diffs, 0.5);
  EXPECT_EQ(r.q_star, 0);
  EXPECT_EQ(r.std_error, 0.0);
  for (const TrimCandidate& c : r.candidates) EXPECT_EQ(c.theta, 1.5);
}

TEST(TrimmedMatchTest, TooFewPairs) {
  const std::vector<PairDiff> diffs(2, PairDiff{1.0, 1.0});
  EXPECT_EQ(CodeOf([&] { TrimmedMatch(diffs, 0.25); }), ErrorCode::kTooFewPairs);
}

TEST(TrimmedMatchTest, FixedPointIsSelfConsistent) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> spend(0.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PairDiff> diffs;
    for (int k = 0; k < 15; ++k) {
      const double s = spend(gen) * (k % 2 ? 1 : -1);
      diffs.push_back({1.5 * s + noise(gen), s});
    }
    const TrimmedMatchResult r = TrimmedMatch(diffs, 0.25);
    EXPECT_LE(r.q_star, 3);
    for (const TrimCandidate& c : r.candidates) {
      if (!c.converged || !c.feasible) continue;
      EXPECT_NEAR(UntrimmedRatio(diffs, c.trimmed), c.theta,
                  1e-9 * std::max(1.0, std::abs(c.theta)));
    }
    // The chosen q has the narrowest interval.
    for (const TrimCandidate& c : r.candidates) {
      if (c.feasible) {
        EXPECT_GE(c.half_width, r.candidates[r.q_star].half_width);
      }
    }
  }
}

TEST(StudentizedStdErrorTest, MatchesDirectFormula) {
  const std::vector<PairDiff> diffs = {{1, 1}, {3, 1}, {2, 2}, {-1, -1}};
  const double theta = UntrimmedRatio(diffs, {});
  EXPECT_DOUBLE_EQ(theta, 5.0 / 3.0);
  double ss = 0.0;
  for (const auto& d : diffs) {
    const double e = d.response - theta * d.spend;
    ss += e * e;
  }
  EXPECT_NEAR(StudentizedStdError(diffs, {}, theta),
              std::sqrt(4.0 / 3.0 * ss) / 3.0, 1e-14);
}

TEST(StudentTQuantileTest, KnownValues) {
  EXPECT_NEAR(StudentTQuantile(1, 0.975), 12.7062047361747, 1e-9);
  EXPECT_NEAR(StudentTQuantile(10, 0.9), 1.37218364111034, 1e-9);
  EXPECT_NEAR(StudentTQuantile(1e6, 0.975), 1.95996635, 1e-5);
}

TEST(ErrorDecompositionTest, HomogeneousHasOnlyMatchingError) {
  const Fixture f = RandomFixture(8);
  const std::vector<double> theta(f.aggs.size(), 1.0);
  const Assignment a = DrawAssignment(f.design, 8, 0);
  const SpendPlan plan = PlanSpend(a, f.aggs, {4.0, true});
  const ObservedOutcomes obs = InjectEffects(f.aggs, a, plan, theta);
  const ErrorDecomposition e = DecomposeError(obs, a, f.design, theta, 1.0, plan);
  EXPECT_EQ(e.err2, 0.0);
  EXPECT_EQ(e.err3, 0.0);
  EXPECT_NEAR(e.err1, e.total, 1e-12);
}

TEST(ErrorDecompositionTest, PerfectMatchesHaveNoMatchingError) {
  const auto aggs = MakeAggs({3, 3, 8, 8}, {3, 3, 8, 8}, {1, 2, 4, 1});
  const std::vector<double> z = {3, 3, 8, 8};
  const SupergeoDesign d = MakeDesign({{{0}, {1}}, {{2}, {3}}}, z);
  const std::vector<double> theta_g(4, 2.0);
  const Assignment a = AssignmentFromSigns(d, {1, -1});
  const SpendPlan plan = PlanSpend(a, aggs, {3.0, true});
  const ObservedOutcomes obs = InjectEffects(aggs, a, plan, theta_g);
  EXPECT_NEAR(DecomposeError(obs, a, d, theta_g, 2.0, plan).err1, 0.0, 1e-14);
}

TEST(ErrorDecompositionTest, TermsAddUpUnderHeterogeneity) {
  const Fixture f = RandomFixture(9);
  EffectModel model;
  model.kind = EffectKind::kProportional;
  const auto theta_g = MakeEffects(model, f.aggs);
  const double theta = TargetTheta(theta_g, InitialSpends(f.aggs)).theta;
  for (int m = 0; m < 200; ++m) {
    const Assignment a = DrawAssignment(f.design, 9, m);
    const SpendPlan plan = PlanSpend(a, f.aggs, {6.0, true});
    const ObservedOutcomes obs = InjectEffects(f.aggs, a, plan, theta_g);
    const ErrorDecomposition e =
        DecomposeError(obs, a, f.design, theta_g, theta, plan);
    EXPECT_LE(RelErr(e.err1 + e.err2 + e.err3, e.total), 1e-10);
    EXPECT_NE(e.err2, 0.0);
  }
}

TEST(ErrorDecompositionTest, ImbalanceTermHasZeroMean) {
  const Fixture f = RandomFixture(10);
  EffectModel model;
  model.kind = EffectKind::kProportional;
  const auto theta_g = MakeEffects(model, f.aggs);
  const double theta = TargetTheta(theta_g, InitialSpends(f.aggs)).theta;
  const uint64_t total = uint64_t{1} << f.design.num_pairs();
  double sum = 0.0, scale = 0.0;
  for (uint64_t code = 0; code < total; ++code) {
    const Assignment a = EnumeratedAssignment(f.design, code);
    const SpendPlan plan = PlanSpend(a, f.aggs, {6.0, true});
    const ObservedOutcomes obs = InjectEffects(f.aggs, a, plan, theta_g);
    const double err2 = DecomposeError(obs, a, f.design, theta_g, theta, plan).err2;
    sum += err2;
    scale += std::abs(err2);
  }
  // err2 is antisymmetric under flipping all signs, so the sum cancels up to
  // rounding.
  EXPECT_LE(std::abs(sum), 1e-12 * scale);
}

}  // namespace
}  // namespace supergeo
