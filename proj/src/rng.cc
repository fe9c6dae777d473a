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
#include "supergeo/rng.h"

#include <cmath>
#include <numbers>

namespace supergeo {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(uint64_t seed, uint64_t stream)
    : key_(SplitMix64(SplitMix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

uint64_t CounterRng::Bits(uint64_t index) const {
  return SplitMix64(key_ ^ SplitMix64(index + 0x632BE59BD9B4E019ULL));
}

double CounterRng::Uniform(uint64_t index) const {
  return static_cast<double>(Bits(index) >> 11) * 0x1.0p-53;
}

uint64_t CounterRng::Below(uint64_t index, uint64_t bound) const {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(Bits(index)) * bound) >> 64);
}

double CounterRng::Normal(uint64_t index) const {
  // 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - Uniform(2 * index);
  const double u2 = Uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int CounterRng::Sign(uint64_t index) const {
  return (Bits(index) >> 63) ? 1 : -1;
}

CounterRng CounterRng::Fork(uint64_t stream) const {
  CounterRng child(0);
  child.key_ = SplitMix64(key_ ^ SplitMix64(stream ^ 0xA0761D6478BD642FULL));
  return child;
}

}  // namespace supergeo
