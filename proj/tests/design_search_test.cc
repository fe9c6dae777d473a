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
#include "supergeo/design_search.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "supergeo/error.h"

namespace supergeo {
namespace {

DesignConfig Config(int min_size, int max_size) {
  DesignConfig cfg;
  cfg.min_size = min_size;
  cfg.max_size = max_size;
  return cfg;
}

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

std::vector<double> RandomZ(std::mt19937_64& gen, int n, int hi = 1000) {
  std::uniform_int_distribution<int> value(1, hi);
  std::vector<double> z(n);
  for (double& x : z) x = value(gen);
  return z;
}

// Minimum over all perfect matchings by recursion on the first free geo.
double BruteForceMatching(const std::vector<double>& z) {
  std::vector<char> used(z.size(), 0);
  std::function<double()> rec = [&]() -> double {
    int first = -1;
    for (size_t i = 0; i < z.size(); ++i) {
      if (!used[i]) {
        first = static_cast<int>(i);
        break;
      }
    }
    if (first < 0) return 0.0;
    used[first] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = first + 1; j < z.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      const double d = z[first] - z[j];
      best = std::min(best, d * d + rec());
      used[j] = 0;
    }
    used[first] = 0;
    return best;
  };
  return rec();
}

TEST(CandidatePoolTest, ExhaustiveCounts) {
  const std::vector<double> z5 = {1, 2, 3, 4, 5};
  EXPECT_EQ(EnumerateCandidates(z5, Config(2, 2)).size(), 10u);
  const std::vector<double> z6 = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(EnumerateCandidates(z6, Config(2, 4)).size(), 50u);
}

TEST(CandidatePoolTest, PoolCapRejectsLargeEnumerations) {
  const std::vector<double> z(210, 1.0);
  EXPECT_EQ(CodeOf([&] { EnumerateCandidates(z, Config(2, 4)); }),
            ErrorCode::kPoolTooLarge);
}

TEST(CandidatePoolTest, MembershipIndexIsConsistent) {
  std::mt19937_64 gen(1);
  const auto z = RandomZ(gen, 7);
  const CandidatePool pool = EnumerateCandidates(z, Config(2, 3));
  for (GeoIndex g = 0; g < 7; ++g) {
    // C(6,1) pairs + C(6,2) triples contain g.
    EXPECT_EQ(pool.containing(g).size(), 6u + 15u);
    for (uint32_t c : pool.containing(g)) {
      const auto m = pool.members(c);
      EXPECT_TRUE(std::find(m.begin(), m.end(), g) != m.end());
    }
  }
  const std::vector<GeoIndex> probe = {1, 4, 6};
  const auto c = pool.Find(probe);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(pool.score(*c), Score(probe, z).score);
}

TEST(CandidatePoolTest, SinglePartitionEqualsExhaustive) {
  std::mt19937_64 gen(2);
  const auto z = RandomZ(gen, 9);
  DesignConfig cfg = Config(2, 4);
  cfg.strategy = Strategy::kPartitionHeuristic;
  cfg.heuristic.num_partitions = 1;
  const CandidatePool a = PartitionHeuristicCandidates(z, cfg, 17);
  const CandidatePool b = EnumerateCandidates(z, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (size_t c = 0; c < a.size(); ++c) {
    EXPECT_TRUE(std::ranges::equal(a.members(c), b.members(c)));
    EXPECT_EQ(a.score(c), b.score(c));
  }
}

TEST(CandidatePoolTest, PartitionHeuristicBoundAndDeterminism) {
  std::mt19937_64 gen(3);
  const auto z = RandomZ(gen, 40);
  DesignConfig cfg = Config(2, 4);
  cfg.heuristic.num_partitions = 4;
  const CandidatePool a = PartitionHeuristicCandidates(z, cfg, 5);
  const CandidatePool b = PartitionHeuristicCandidates(z, cfg, 5);
  EXPECT_LE(a.size(), 1500u);
  EXPECT_EQ(a.size(), 1500u);  // 4 equal groups of 10
  ASSERT_EQ(a.size(), b.size());
  for (size_t c = 0; c < a.size(); ++c) {
    EXPECT_TRUE(std::ranges::equal(a.members(c), b.members(c)));
  }
  cfg.heuristic.num_partitions = 30;
  EXPECT_EQ(CodeOf([&] { PartitionHeuristicCandidates(z, cfg, 5); }),
            ErrorCode::kPartitionTooSmall);
}

TEST(CandidatePoolTest, PerGeoHeuristic) {
  std::mt19937_64 gen(4);
  const auto z10 = RandomZ(gen, 10);
  DesignConfig cfg = Config(2, 3);
  cfg.heuristic.beta = 0;
  EXPECT_EQ(PerGeoHeuristicCandidates(z10, cfg).size(), 45u);

  cfg.heuristic.beta = 2;
  cfg.heuristic.alpha = 0.1;
  const CandidatePool pool = PerGeoHeuristicCandidates(z10, cfg);
  EXPECT_GE(pool.size(), 45u + 4u);
  EXPECT_LE(pool.size(), 45u + 8u);

  const auto z8 = RandomZ(gen, 8);
  DesignConfig full = Config(2, 4);
  full.heuristic.beta = 8;
  full.heuristic.alpha = 1.0;
  EXPECT_EQ(PerGeoHeuristicCandidates(z8, full).size(),
            EnumerateCandidates(z8, full).size());
}

TEST(CandidatePoolTest, PerGeoKeepsBestSubsetsOfLargestGeos) {
  const std::vector<double> z = {1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  DesignConfig cfg = Config(2, 3);
  cfg.heuristic.beta = 1;
  cfg.heuristic.alpha = 0.1;
  const CandidatePool pool = PerGeoHeuristicCandidates(z, cfg);
  ASSERT_EQ(pool.size(), 45u + 4u);
  // The retained triples contain geo 9 and are its 4 best: {7,8,9} and
  // {6,8,9} beat every other triple with 100 in it.
  double worst_kept = 0.0;
  for (size_t c = 45; c < pool.size(); ++c) {
    const auto m = pool.members(c);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m.back(), 9);
    worst_kept = std::max(worst_kept, pool.score(c));
  }
  const std::vector<GeoIndex> worse = {0, 1, 9};
  EXPECT_LT(worst_kept, Score(worse, z).score);
}

TEST(SolvePartitionTest, ZeroLossExample) {
  const std::vector<double> z = {1, 2, 3, 10, 11, 21};
  const DesignConfig cfg = Config(2, 4);
  const SupergeoDesign d = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  EXPECT_EQ(d.loss, 0.0);
  EXPECT_TRUE(d.optimal);
  EXPECT_EQ(BruteForcePartition(z, cfg).loss, 0.0);
  EXPECT_TRUE(IsValidDesign(d, 6, cfg, true));
}

TEST(SolvePartitionTest, OddCountWithPairsOnlyIsInfeasible) {
  const std::vector<double> z = {1, 2, 3};
  const DesignConfig cfg = Config(2, 2);
  EXPECT_EQ(CodeOf([&] { SolvePartition(EnumerateCandidates(z, cfg), z, cfg); }),
            ErrorCode::kInfeasible);
}

TEST(SolvePartitionTest, IdenticalValues) {
  const std::vector<double> z = {1, 1, 1, 1};
  const DesignConfig cfg = Config(2, 2);
  const SupergeoDesign d = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  EXPECT_EQ(d.loss, 0.0);
  EXPECT_EQ(d.num_pairs(), 2);
  EXPECT_TRUE(d.optimal);
}

TEST(SolvePartitionTest, MatchesBruteForce) {
  std::mt19937_64 gen(7);
  const int sizes[] = {6, 8, 10};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = sizes[trial % 3];
    const int u = 2 + trial % 3;
    const auto z = RandomZ(gen, n);
    const DesignConfig cfg = Config(2, u);
    const SupergeoDesign d =
        SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
    ASSERT_TRUE(d.optimal);
    EXPECT_EQ(d.loss, BruteForcePartition(z, cfg).loss) << "trial " << trial;
    EXPECT_TRUE(IsValidDesign(d, n, cfg, true));
  }
}

TEST(SolvePartitionTest, MinPairsIsEnforced) {
  const std::vector<double> z = {1, 2, 3, 6};
  DesignConfig cfg = Config(2, 4);
  EXPECT_EQ(SolvePartition(EnumerateCandidates(z, cfg), z, cfg).num_pairs(), 1);
  cfg.min_pairs = 2;
  const SupergeoDesign d = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  EXPECT_EQ(d.num_pairs(), 2);
  // {1,2} and {3,6}: 1 + 9.
  EXPECT_EQ(d.loss, 10.0);
  EXPECT_EQ(d.loss, BruteForcePartition(z, cfg).loss);
}

TEST(SolvePartitionTest, DominatesBaselineAndNestsInMaxSize) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = RandomZ(gen, 12);
    const double base = MatchedPairsBaseline(z).loss;
    double previous = std::numeric_limits<double>::infinity();
    for (int u = 2; u <= 4; ++u) {
      const DesignConfig cfg = Config(2, u);
      SolveStats stats;
      const SupergeoDesign d =
          SolvePartition(EnumerateCandidates(z, cfg), z, cfg, {}, &stats);
      EXPECT_TRUE(stats.seeded_from_baseline);
      EXPECT_LE(d.loss, base);
      EXPECT_LE(d.loss, previous);
      previous = d.loss;
    }
  }
}

TEST(SolvePartitionTest, NodeLimitReturnsIncumbent) {
  std::mt19937_64 gen(9);
  const auto z = RandomZ(gen, 12);
  DesignConfig cfg = Config(2, 4);
  cfg.node_limit = 1;
  const SupergeoDesign d = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  EXPECT_FALSE(d.optimal);
  EXPECT_EQ(d.loss, MatchedPairsBaseline(z).loss);
}

TEST(SolvePartitionTest, NodeLimitWithoutIncumbentIsTimeout) {
  std::mt19937_64 gen(10);
  const auto z = RandomZ(gen, 9);
  DesignConfig cfg = Config(3, 3);
  cfg.node_limit = 1;
  EXPECT_EQ(CodeOf([&] { SolvePartition(EnumerateCandidates(z, cfg), z, cfg); }),
            ErrorCode::kTimeoutNoIncumbent);
}

TEST(SolvePartitionTest, WarmStartIncumbentIsKept) {
  std::mt19937_64 gen(11);
  const auto z = RandomZ(gen, 10);
  DesignConfig cfg = Config(2, 4);
  const SupergeoDesign best = BruteForcePartition(z, cfg);
  cfg.node_limit = 1;
  SolveOptions options;
  options.incumbent = best;
  const SupergeoDesign d =
      SolvePartition(EnumerateCandidates(z, cfg), z, cfg, options);
  EXPECT_EQ(d.loss, best.loss);
}

TEST(SolvePartitionTest, PartialCover) {
  // Without full cover the outlier can be left out.
  const std::vector<double> z = {1, 1, 2, 2, 1000};
  DesignConfig cfg = Config(2, 2);
  cfg.require_full_cover = false;
  const SupergeoDesign d = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  EXPECT_EQ(d.loss, 0.0);
  EXPECT_EQ(d.covered, (std::vector<GeoIndex>{0, 1, 2, 3}));
  EXPECT_TRUE(IsValidDesign(d, 5, cfg, false));
  EXPECT_FALSE(IsValidDesign(d, 5, cfg, true));
}

TEST(SolvePartitionTest, Deterministic) {
  std::mt19937_64 gen(12);
  const auto z = RandomZ(gen, 12, 20);  // many ties
  const DesignConfig cfg = Config(2, 4);
  const SupergeoDesign a = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  const SupergeoDesign b = SolvePartition(EnumerateCandidates(z, cfg), z, cfg);
  ASSERT_EQ(a.num_pairs(), b.num_pairs());
  for (int k = 0; k < a.num_pairs(); ++k) {
    EXPECT_EQ(a.pairs[k].plus, b.pairs[k].plus);
    EXPECT_EQ(a.pairs[k].minus, b.pairs[k].minus);
  }
}

TEST(MatchedPairsTest, Examples) {
  const std::vector<double> a = {1, 2, 10, 11};
  EXPECT_EQ(MatchedPairsBaseline(a).loss, 2.0);
  const std::vector<double> b = {5, 5, 5, 5};
  EXPECT_EQ(MatchedPairsBaseline(b).loss, 0.0);
  const std::vector<double> c = {1, 2, 3, 4};
  EXPECT_EQ(MatchedPairsBaseline(c).loss, 2.0);
  const std::vector<double> odd = {1, 2, 3};
  EXPECT_EQ(CodeOf([&] { MatchedPairsBaseline(odd); }), ErrorCode::kOddCount);
}

TEST(MatchedPairsTest, PairsSortedNeighbours) {
  const std::vector<double> z = {10, 1, 11, 2};
  const SupergeoDesign d = MatchedPairsBaseline(z);
  ASSERT_EQ(d.num_pairs(), 2);
  EXPECT_EQ(d.pairs[0].Members(), (std::vector<GeoIndex>{0, 2}));
  EXPECT_EQ(d.pairs[1].Members(), (std::vector<GeoIndex>{1, 3}));
}

TEST(MatchedPairsTest, OptimalAmongAllMatchings) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + 2 * (trial % 5);
    const auto z = RandomZ(gen, n, 50);
    EXPECT_EQ(MatchedPairsBaseline(z).loss, BruteForceMatching(z));
  }
}

TEST(BruteForceTest, Examples) {
  const std::vector<double> a = {1, 2, 4};
  EXPECT_EQ(BruteForcePartition(a, Config(3, 3)).loss, 1.0);
  const std::vector<double> b = {1, 2, 3, 6};
  const SupergeoDesign d = BruteForcePartition(b, Config(2, 4));
  EXPECT_EQ(d.loss, 0.0);
  ASSERT_EQ(d.num_pairs(), 1);
  EXPECT_EQ(d.pairs[0].plus, (std::vector<GeoIndex>{0, 1, 2}));
  EXPECT_EQ(d.pairs[0].minus, std::vector<GeoIndex>{3});
  const std::vector<double> big(13, 1.0);
  EXPECT_EQ(CodeOf([&] { BruteForcePartition(big, Config(2, 2)); }),
            ErrorCode::kTooLarge);
}

TEST(MultiStartTest, SingleConfigMatchesSolve) {
  std::mt19937_64 gen(14);
  const auto z = RandomZ(gen, 10);
  const DesignConfig cfg = Config(2, 3);
  const auto r = MultiStartSearch(z, {cfg});
  EXPECT_EQ(r.design.loss,
            SolvePartition(EnumerateCandidates(z, cfg), z, cfg).loss);
  EXPECT_EQ(r.best_index, 0u);
}

TEST(MultiStartTest, PicksMinimumAndExhaustiveWins) {
  std::mt19937_64 gen(15);
  const auto z = RandomZ(gen, 12);
  DesignConfig p1 = Config(2, 4);
  p1.strategy = Strategy::kPartitionHeuristic;
  p1.heuristic.num_partitions = 2;
  p1.seed = 1;
  DesignConfig p2 = p1;
  p2.seed = 2;
  const double l1 = SolvePartition(BuildPool(z, p1), z, p1).loss;
  const double l2 = SolvePartition(BuildPool(z, p2), z, p2).loss;
  EXPECT_EQ(MultiStartSearch(z, {p1, p2}, 2).design.loss, std::min(l1, l2));

  const DesignConfig ex = Config(2, 4);
  const auto r = MultiStartSearch(z, {p1, ex}, 2);
  EXPECT_LE(SolvePartition(BuildPool(z, ex), z, ex).loss, l1);
  EXPECT_EQ(r.design.loss, SolvePartition(BuildPool(z, ex), z, ex).loss);
}

TEST(MultiStartTest, AllFailed) {
  const std::vector<double> z = {1, 2, 3};
  EXPECT_EQ(CodeOf([&] { MultiStartSearch(z, {Config(2, 2)}); }),
            ErrorCode::kAllFailed);
}

TEST(DesignConfigTest, Validation) {
  EXPECT_EQ(CodeOf([] { Config(1, 2).Validate(); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { Config(3, 2).Validate(); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { ParseStrategy("bogus"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(ParseStrategy("pergeo"), Strategy::kPerGeoHeuristic);
}

}  // namespace
}  // namespace supergeo
