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

#include <numeric>
#include <utility>

#include "supergeo/error.h"
#include "supergeo/rng.h"

namespace supergeo {
namespace {

// Fisher-Yates driven by the counter generator.
std::vector<int> Permutation(int n, const CounterRng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.Below(i, i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::string PaddedId(char prefix, int i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return prefix + digits;
}

}  // namespace

void N3dmInstance::Validate() const {
  if (w.empty() || w.size() != x.size() || w.size() != y.size()) {
    throw Error(ErrorCode::kInvalidConfig, "W, X, Y must have m >= 1 sizes each");
  }
  for (const auto* list : {&w, &x, &y}) {
    for (int64_t s : *list) {
      if (s < 1) throw Error(ErrorCode::kInvalidConfig, "sizes must be >= 1");
    }
  }
  if (bound < 1) throw Error(ErrorCode::kInvalidConfig, "bound must be >= 1");
}

N3dmInstance PlantN3dm(int m, int64_t bound, uint64_t seed) {
  if (bound < 3) {
    throw Error(ErrorCode::kInfeasibleBound,
                "bound " + std::to_string(bound) + " < 3");
  }
  if (m < 1) throw Error(ErrorCode::kInvalidConfig, "m must be >= 1");
  const CounterRng rng(seed, 0x6E33646DULL);
  std::vector<std::array<int64_t, 3>> triples(m);
  for (int i = 0; i < m; ++i) {
    const int64_t a = 1 + static_cast<int64_t>(rng.Below(2 * i, bound - 2));
    const int64_t b = 1 + static_cast<int64_t>(rng.Below(2 * i + 1, bound - 1 - a));
    triples[i] = {a, b, bound - a - b};
  }
  // perm[d][i] = position of triple i in list d.
  std::array<std::vector<int>, 3> perm;
  for (int d = 0; d < 3; ++d) perm[d] = Permutation(m, rng.Fork(d + 1));

  N3dmInstance inst;
  inst.bound = bound;
  inst.w.resize(m);
  inst.x.resize(m);
  inst.y.resize(m);
  for (int i = 0; i < m; ++i) {
    inst.w[perm[0][i]] = triples[i][0];
    inst.x[perm[1][i]] = triples[i][1];
    inst.y[perm[2][i]] = triples[i][2];
    inst.planted.push_back({perm[0][i], perm[1][i], perm[2][i]});
  }
  return inst;
}

N3dmInstance PerturbToNoInstance(const N3dmInstance& instance) {
  instance.Validate();
  N3dmInstance out = instance;
  out.y[0] += 1;
  out.planted.clear();
  return out;
}

ReducedInstance ReduceN3dm(const N3dmInstance& instance) {
  instance.Validate();
  const int m = instance.m();
  int64_t total = 0;
  for (const auto* list : {&instance.w, &instance.x, &instance.y}) {
    for (int64_t s : *list) total += s;
  }
  ReducedInstance out;
  out.big_m = 1 + instance.bound + total;
  const int64_t big_m = out.big_m;

  int width = 2;
  for (int v = m - 1; v >= 100; v /= 10) ++width;
  for (int i = 0; i < m; ++i) {
    out.ids.push_back(PaddedId('w', i, width));
    out.z.push_back(static_cast<double>(instance.w[i] + big_m));
  }
  for (int i = 0; i < m; ++i) {
    out.ids.push_back(PaddedId('x', i, width));
    out.z.push_back(static_cast<double>(instance.x[i] + 3 * big_m));
  }
  for (int i = 0; i < m; ++i) {
    out.ids.push_back(PaddedId('y', i, width));
    out.z.push_back(
        static_cast<double>(instance.bound - instance.y[i] + 4 * big_m));
  }
  return out;
}

GeoPanel ReducedPanel(const ReducedInstance& reduced) {
  const size_t n = reduced.z.size();
  std::vector<std::vector<double>> response(n), spend(n);
  for (size_t g = 0; g < n; ++g) {
    response[g] = {reduced.z[g]};
    spend[g] = {0.0};
  }
  LoadOptions options;
  options.pretest_len = 1;
  options.allow_empty_test = true;
  return GeoPanel::Create(reduced.ids, {0}, std::move(response),
                          std::move(spend), options);
}

}  // namespace supergeo
