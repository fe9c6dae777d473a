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
#ifndef SUPERGEO_EFFECTS_H_
#define SUPERGEO_EFFECTS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "supergeo/geo_data.h"

namespace supergeo {

enum class EffectKind { kHomogeneous, kProportional, kUniformNoise };

std::string EffectKindName(EffectKind kind);
EffectKind ParseEffectKind(const std::string& name);

// Ground-truth per-geo iROAS.
//   homogeneous:   theta_g = theta0
//   proportional:  theta_g = theta0 + c * Z_g / mean(Z)
//   uniform_noise: theta_g = theta0 + U[-h, h], drawn once per geo
struct EffectModel {
  EffectKind kind = EffectKind::kHomogeneous;
  double theta0 = 1.0;
  double c = 0.2;
  double noise_halfwidth = 0.25;
  uint64_t seed = 0;
};

// Z is the pretest response of each geo.
std::vector<double> MakeEffects(const EffectModel& model,
                                std::span<const GeoAggregates> aggs);

struct Estimand {
  double theta = 0.0;
  std::vector<double> weights;
};

// Spend-weighted average of theta_g; throws ZeroWeights.
Estimand TargetTheta(std::span<const double> theta_g,
                     std::span<const double> weights);

}  // namespace supergeo

#endif  // SUPERGEO_EFFECTS_H_
