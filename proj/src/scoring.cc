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
#include "supergeo/scoring.h"

#include <algorithm>
#include <bit>
#include <string>

#include "supergeo/error.h"

namespace supergeo {
namespace {

// True when the sorted set encoded by `a` precedes the one encoded by `b`.
bool MaskLexLess(uint32_t a, uint32_t b) {
  const uint32_t diff = a ^ b;
  if (diff == 0) return false;
  const uint32_t low = diff & (~diff + 1);
  const uint32_t above = ~((low << 1) - 1);
  // The set holding the first differing element is smaller unless the other
  // set stops there (and is then a prefix).
  if (a & low) return (b & above) != 0;
  return (a & above) == 0;
}

}  // namespace

std::vector<GeoIndex> SupergeoPair::Members() const {
  std::vector<GeoIndex> all;
  all.reserve(plus.size() + minus.size());
  std::merge(plus.begin(), plus.end(), minus.begin(), minus.end(),
             std::back_inserter(all));
  return all;
}

bool LexLess(std::span<const GeoIndex> a, std::span<const GeoIndex> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

ValueSplit ScoreValues(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) {
    throw Error(ErrorCode::kSubsetTooSmall, "need at least 2 values");
  }
  if (n > kMaxScoredSubset) {
    throw Error(ErrorCode::kSubsetTooLarge,
                std::to_string(n) + " > " + std::to_string(kMaxScoredSubset));
  }
  const uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);

  // Element 0 stays on side A; Gray code walks the other n-1 memberships.
  // Start with everything on side A; that split has an empty side B and is
  // skipped.
  double diff = 0.0;
  for (double v : values) diff += v;
  uint32_t mask = full;

  double best_abs = -1.0;
  uint32_t best_plus = 0;
  const uint32_t steps = 1u << (n - 1);
  for (uint32_t i = 1; i < steps; ++i) {
    const int bit = std::countr_zero(i) + 1;
    mask ^= 1u << bit;
    diff += (mask & (1u << bit)) ? 2.0 * values[bit] : -2.0 * values[bit];
    const double abs_diff = diff < 0.0 ? -diff : diff;
    if (best_abs >= 0.0 && abs_diff > best_abs) continue;
    const uint32_t plus = diff >= 0.0 ? mask : (full & ~mask);
    if (best_abs < 0.0 || abs_diff < best_abs ||
        MaskLexLess(plus, best_plus)) {
      best_abs = abs_diff;
      best_plus = plus;
    }
  }

  // Recompute from the chosen split so the stored score does not carry
  // Gray-code rounding.
  double plus_sum = 0.0, minus_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    ((best_plus >> i) & 1u ? plus_sum : minus_sum) += values[i];
  }
  const double d = plus_sum - minus_sum;
  return {d * d, best_plus};
}

SupergeoPair Score(std::span<const GeoIndex> subset,
                   std::span<const double> z) {
  if (subset.size() < 2) {
    throw Error(ErrorCode::kSubsetTooSmall, "subset needs at least 2 geos");
  }
  if (subset.size() > static_cast<size_t>(kMaxScoredSubset)) {
    throw Error(ErrorCode::kSubsetTooLarge,
                "subset of " + std::to_string(subset.size()) + " geos");
  }
  std::vector<GeoIndex> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidConfig, "subset repeats a geo");
  }
  std::vector<double> values;
  values.reserve(sorted.size());
  for (GeoIndex g : sorted) {
    if (g < 0 || static_cast<size_t>(g) >= z.size()) {
      throw Error(ErrorCode::kUnknownGeo, "geo index " + std::to_string(g));
    }
    values.push_back(z[g]);
  }
  const ValueSplit split = ScoreValues(values);
  SupergeoPair pair;
  pair.score = split.score;
  for (size_t i = 0; i < sorted.size(); ++i) {
    ((split.plus_mask >> i) & 1u ? pair.plus : pair.minus)
        .push_back(sorted[i]);
  }
  return pair;
}

double PairDifference(const SupergeoPair& pair, std::span<const double> z) {
  double d = 0.0;
  for (GeoIndex g : pair.plus) {
    if (g < 0 || static_cast<size_t>(g) >= z.size()) {
      throw Error(ErrorCode::kUnknownGeo, "geo index " + std::to_string(g));
    }
    d += z[g];
  }
  for (GeoIndex g : pair.minus) {
    if (g < 0 || static_cast<size_t>(g) >= z.size()) {
      throw Error(ErrorCode::kUnknownGeo, "geo index " + std::to_string(g));
    }
    d -= z[g];
  }
  return d;
}

double DesignLoss(const SupergeoDesign& design, std::span<const double> z) {
  double loss = 0.0;
  for (const SupergeoPair& pair : design.pairs) {
    const double d = PairDifference(pair, z);
    loss += d * d;
  }
  return loss;
}

void Finalize(SupergeoDesign& design, std::span<const double> z) {
  for (SupergeoPair& pair : design.pairs) {
    std::sort(pair.plus.begin(), pair.plus.end());
    std::sort(pair.minus.begin(), pair.minus.end());
    const double d = PairDifference(pair, z);
    pair.score = d * d;
  }
  std::sort(design.pairs.begin(), design.pairs.end(),
            [](const SupergeoPair& a, const SupergeoPair& b) {
              return a.Members().front() < b.Members().front();
            });
  design.covered.clear();
  for (const SupergeoPair& pair : design.pairs) {
    design.covered.insert(design.covered.end(), pair.plus.begin(),
                          pair.plus.end());
    design.covered.insert(design.covered.end(), pair.minus.begin(),
                          pair.minus.end());
  }
  std::sort(design.covered.begin(), design.covered.end());
  design.loss = DesignLoss(design, z);
}

}  // namespace supergeo
