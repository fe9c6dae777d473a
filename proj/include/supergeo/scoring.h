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
#ifndef SUPERGEO_SCORING_H_
#define SUPERGEO_SCORING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "supergeo/geo_data.h"

namespace supergeo {

// Largest subset `Score` will enumerate (2^15 sign vectors).
inline constexpr int kMaxScoredSubset = 16;

// One supergeo pair. By convention Z(plus) >= Z(minus); `score` is the
// squared difference for this stored split.
struct SupergeoPair {
  std::vector<GeoIndex> plus;
  std::vector<GeoIndex> minus;
  double score = 0.0;

  int size() const { return static_cast<int>(plus.size() + minus.size()); }
  // plus and minus merged, sorted.
  std::vector<GeoIndex> Members() const;
};

struct SupergeoDesign {
  std::vector<SupergeoPair> pairs;
  double loss = 0.0;
  std::vector<GeoIndex> covered;  // sorted
  bool optimal = false;

  int num_pairs() const { return static_cast<int>(pairs.size()); }
};

// Balanced split of a small set of values. `plus_mask` bit i marks values[i]
// as belonging to the plus side.
struct ValueSplit {
  double score = 0.0;
  uint32_t plus_mask = 0;
};

// Minimum of (sum(plus) - sum(minus))^2 over all splits into two non-empty
// sides. Among optimal splits the returned one has sum(plus) >= sum(minus)
// and, within those, the lexicographically smallest plus side (by position).
ValueSplit ScoreValues(std::span<const double> values);

// Same as ScoreValues for geo indices into `z`; throws SubsetTooSmall,
// SubsetTooLarge or UnknownGeo.
SupergeoPair Score(std::span<const GeoIndex> subset, std::span<const double> z);

// Sum of squared side differences of the stored splits (not re-optimized).
double DesignLoss(const SupergeoDesign& design, std::span<const double> z);

double PairDifference(const SupergeoPair& pair, std::span<const double> z);

// Recomputes `covered` and `loss` (against `z`) from `pairs`; pairs are put in
// canonical order (by smallest member).
void Finalize(SupergeoDesign& design, std::span<const double> z);

// Orders sorted index sets lexicographically.
bool LexLess(std::span<const GeoIndex> a, std::span<const GeoIndex> b);

}  // namespace supergeo

#endif  // SUPERGEO_SCORING_H_
