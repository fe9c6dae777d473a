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
#ifndef SUPERGEO_RNG_H_
#define SUPERGEO_RNG_H_

#include <cstdint>

namespace supergeo {

// Counter-based random numbers: every value is a pure function of
// (seed, stream, index), so draw m of an evaluation is reproducible no matter
// which worker computes it or in which order. Built on the SplitMix64
// finalizer; portable across standard libraries, unlike <random>
// distributions.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0);

  // Raw 64 random bits for the given counter.
  uint64_t Bits(uint64_t index) const;
  // Uniform on [0, 1).
  double Uniform(uint64_t index) const;
  // Uniform integer on [0, bound); bound > 0.
  uint64_t Below(uint64_t index, uint64_t bound) const;
  // Standard normal via Box-Muller on two derived counters.
  double Normal(uint64_t index) const;
  // Fair coin: +1 or -1.
  int Sign(uint64_t index) const;

  // Child generator keyed by an extra stream id.
  CounterRng Fork(uint64_t stream) const;

 private:
  uint64_t key_;
};

uint64_t SplitMix64(uint64_t x);

}  // namespace supergeo

#endif  // SUPERGEO_RNG_H_
