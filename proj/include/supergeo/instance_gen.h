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
#ifndef SUPERGEO_INSTANCE_GEN_H_
#define SUPERGEO_INSTANCE_GEN_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "supergeo/geo_data.h"

namespace supergeo {

// Numerical 3-dimensional matching: can W, X, Y (m sizes each) be split into
// m triples (w, x, y) with s(w) + s(x) + s(y) = B?
struct N3dmInstance {
  std::vector<int64_t> w;
  std::vector<int64_t> x;
  std::vector<int64_t> y;
  int64_t bound = 0;
  // Known solution as (index into w, index into x, index into y); empty when
  // none is known.
  std::vector<std::array<int, 3>> planted;

  int m() const { return static_cast<int>(w.size()); }
  // Throws InvalidConfig.
  void Validate() const;
};

// m random triples summing to `bound`, each list shuffled independently.
// Throws InfeasibleBound for bound < 3.
N3dmInstance PlantN3dm(int m, int64_t bound, uint64_t seed);

// Adds 1 to the first y size. The total then differs from m * bound, so no
// exact matching exists.
N3dmInstance PerturbToNoInstance(const N3dmInstance& instance);

struct ReducedInstance {
  std::vector<std::string> ids;  // w.., x.., y.. (sorted)
  std::vector<double> z;         // aligned with ids
  int64_t big_m = 0;
};

// Supergeo values with M = 1 + B + sum of all sizes:
// Z_w = s(w) + M, Z_x = s(x) + 3M, Z_y = B - s(y) + 4M.
ReducedInstance ReduceN3dm(const N3dmInstance& instance);

// Single-period panel (response = Z, spend = 0) with no test window.
GeoPanel ReducedPanel(const ReducedInstance& reduced);

}  // namespace supergeo

#endif  // SUPERGEO_INSTANCE_GEN_H_
