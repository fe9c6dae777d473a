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
#include "supergeo/instance_gen.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "supergeo/design_search.h"
#include "supergeo/error.h"

namespace supergeo {
namespace {

DesignConfig TriplesConfig() {
  DesignConfig cfg;
  cfg.min_size = 3;
  cfg.max_size = 3;
  return cfg;
}

TEST(ReduceN3dmTest, SingleTripleValues) {
  N3dmInstance inst;
  inst.w = {1};
  inst.x = {2};
  inst.y = {3};
  inst.bound = 6;
  const ReducedInstance r = ReduceN3dm(inst);
  EXPECT_EQ(r.big_m, 13);
  EXPECT_EQ(r.ids, (std::vector<std::string>{"w00", "x00", "y00"}));
  EXPECT_EQ(r.z, (std::vector<double>{14, 41, 55}));
  EXPECT_EQ(BruteForcePartition(r.z, TriplesConfig()).loss, 0.0);
}

TEST(ReduceN3dmTest, ValuesArePositiveIntegers) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const N3dmInstance inst = PerturbToNoInstance(PlantN3dm(4, 30, seed));
    const ReducedInstance r = ReduceN3dm(inst);
    int64_t total = 1 + inst.bound;
    for (int i = 0; i < inst.m(); ++i) total += inst.w[i] + inst.x[i] + inst.y[i];
    EXPECT_EQ(r.big_m, total);
    ASSERT_EQ(r.z.size(), 12u);
    for (double v : r.z) {
      EXPECT_GT(v, 0.0);
      EXPECT_EQ(v, std::floor(v));
    }
  }
}

TEST(ReduceN3dmTest, PanelCarriesValues) {
  const ReducedInstance r = ReduceN3dm(PlantN3dm(2, 9, 3));
  const GeoPanel panel = ReducedPanel(r);
  EXPECT_EQ(panel.geos(), r.ids);
  EXPECT_EQ(panel.num_periods(), 1);
  const auto aggs = Aggregates(panel);
  for (size_t g = 0; g < aggs.size(); ++g) {
    EXPECT_EQ(aggs[g].pretest_response, r.z[g]);
    EXPECT_EQ(aggs[g].pretest_spend, 0.0);
  }
}

TEST(PlantN3dmTest, SmallestBound) {
  const N3dmInstance inst = PlantN3dm(1, 3, 0);
  EXPECT_EQ(inst.w, std::vector<int64_t>{1});
  EXPECT_EQ(inst.x, std::vector<int64_t>{1});
  EXPECT_EQ(inst.y, std::vector<int64_t>{1});
}

TEST(PlantN3dmTest, PlantedTriplesSumToBound) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const N3dmInstance inst = PlantN3dm(5, 40, seed);
    inst.Validate();
    ASSERT_EQ(inst.planted.size(), 5u);
    std::vector<int> seen_w(5), seen_x(5), seen_y(5);
    for (const auto& t : inst.planted) {
      EXPECT_EQ(inst.w[t[0]] + inst.x[t[1]] + inst.y[t[2]], 40);
      ++seen_w[t[0]];
      ++seen_x[t[1]];
      ++seen_y[t[2]];
    }
    EXPECT_EQ(seen_w, std::vector<int>(5, 1));
    EXPECT_EQ(seen_x, std::vector<int>(5, 1));
    EXPECT_EQ(seen_y, std::vector<int>(5, 1));
  }
}

TEST(PlantN3dmTest, Deterministic) {
  const N3dmInstance a = PlantN3dm(3, 20, 7);
  const N3dmInstance b = PlantN3dm(3, 20, 7);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.planted, b.planted);
}

TEST(PlantN3dmTest, RejectsTinyBound) {
  try {
    PlantN3dm(2, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleBound);
  }
  EXPECT_THROW(PlantN3dm(0, 10, 0), Error);
}

TEST(ReductionSoundnessTest, YesInstancesReachZeroLoss) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 1 + static_cast<int>(seed % 4);
    const ReducedInstance r = ReduceN3dm(PlantN3dm(m, 25, seed));
    EXPECT_EQ(BruteForcePartition(r.z, TriplesConfig()).loss, 0.0) << seed;
  }
}

TEST(ReductionSoundnessTest, PerturbedInstancesHavePositiveLoss) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 1 + static_cast<int>(seed % 3);
    const N3dmInstance no = PerturbToNoInstance(PlantN3dm(m, 25, seed));
    EXPECT_NE(std::accumulate(no.y.begin(), no.y.end(), int64_t{0}) +
                  std::accumulate(no.x.begin(), no.x.end(), int64_t{0}) +
                  std::accumulate(no.w.begin(), no.w.end(), int64_t{0}),
              m * no.bound);
    const ReducedInstance r = ReduceN3dm(no);
    EXPECT_GT(BruteForcePartition(r.z, TriplesConfig()).loss, 0.0) << seed;
  }
}

}  // namespace
}  // namespace supergeo
