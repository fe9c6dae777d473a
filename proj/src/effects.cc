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
#include "supergeo/effects.h"

#include <algorithm>
#include <functional>

#include "supergeo/error.h"
#include "supergeo/rng.h"

namespace supergeo {

std::string EffectKindName(EffectKind kind) {
  switch (kind) {
    case EffectKind::kHomogeneous: return "homogeneous";
    case EffectKind::kProportional: return "proportional";
    case EffectKind::kUniformNoise: return "uniform";
  }
  return "homogeneous";
}

EffectKind ParseEffectKind(const std::string& name) {
  if (name == "homogeneous") return EffectKind::kHomogeneous;
  if (name == "proportional") return EffectKind::kProportional;
  if (name == "uniform" || name == "uniform_noise") {
    return EffectKind::kUniformNoise;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown effect model '" + name + "'");
}

std::vector<double> MakeEffects(const EffectModel& model,
                                std::span<const GeoAggregates> aggs) {
  const size_t n = aggs.size();
  std::vector<double> theta(n, model.theta0);
  switch (model.kind) {
    case EffectKind::kHomogeneous:
      break;
    case EffectKind::kProportional: {
      double total = 0.0;
      for (const auto& a : aggs) total += a.pretest_response;
      const double mean = n > 0 ? total / static_cast<double>(n) : 0.0;
      if (!(mean > 0.0)) {
        throw Error(ErrorCode::kZeroMeanZ, "mean pretest response is not > 0");
      }
      for (size_t g = 0; g < n; ++g) {
        theta[g] += model.c * aggs[g].pretest_response / mean;
      }
      break;
    }
    case EffectKind::kUniformNoise: {
      if (model.noise_halfwidth < 0.0) {
        throw Error(ErrorCode::kInvalidConfig, "noise half-width must be >= 0");
      }
      const CounterRng rng(model.seed, /*stream=*/0x756E6966ULL);
      for (size_t g = 0; g < n; ++g) {
        theta[g] += model.noise_halfwidth * (2.0 * rng.Uniform(g) - 1.0);
      }
      break;
    }
  }
  return theta;
}

Estimand TargetTheta(std::span<const double> theta_g,
                     std::span<const double> weights) {
  if (theta_g.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidConfig, "theta and weights differ in size");
  }
  double num = 0.0, den = 0.0;
  for (size_t g = 0; g < theta_g.size(); ++g) {
    num += theta_g[g] * weights[g];
    den += weights[g];
  }
  if (!(den > 0.0)) {
    throw Error(ErrorCode::kZeroWeights, "weights sum to zero");
  }
  // A constant effect is its own weighted mean; skip the rounding.
  if (std::adjacent_find(theta_g.begin(), theta_g.end(),
                         std::not_equal_to<>()) == theta_g.end()) {
    return {theta_g.front(), std::vector<double>(weights.begin(), weights.end())};
  }
  return {num / den, std::vector<double>(weights.begin(), weights.end())};
}

}  // namespace supergeo
