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
#ifndef SUPERGEO_DESIGN_SEARCH_H_
#define SUPERGEO_DESIGN_SEARCH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supergeo/geo_data.h"
#include "supergeo/scoring.h"

namespace supergeo {

enum class Strategy { kExhaustive, kPartitionHeuristic, kPerGeoHeuristic };

std::string StrategyName(Strategy s);
Strategy ParseStrategy(const std::string& name);

struct HeuristicConfig {
  int num_partitions = 1;  // partition heuristic
  int beta = 0;            // per-geo heuristic: number of largest geos
  double alpha = 1.0;      // per-geo heuristic: retained fraction in (0, 1]
};

struct DesignConfig {
  int min_size = 2;
  int max_size = 4;
  int min_pairs = 1;
  double time_limit_seconds = 3.0 * 3600.0;
  // Deterministic search budget in branch-and-bound nodes; 0 = unlimited.
  int64_t node_limit = 0;
  uint64_t seed = 0;
  Strategy strategy = Strategy::kExhaustive;
  HeuristicConfig heuristic;
  bool require_full_cover = true;
  int64_t pool_cap = 50'000'000;

  // Throws InvalidConfig.
  void Validate() const;
};

// Candidate supergeo pairs with their optimal splits, stored flat, plus the
// per-geo membership index (which candidates contain geo g).
class CandidatePool {
 public:
  explicit CandidatePool(int num_geos) : num_geos_(num_geos) {}

  // `members` sorted ascending.
  void Add(std::span<const GeoIndex> members, const ValueSplit& split);
  // Sorts candidates canonically (size, then lexicographic), drops duplicates
  // and builds the membership index. Must be called before queries.
  void Finish();

  int num_geos() const { return num_geos_; }
  size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }

  std::span<const GeoIndex> members(size_t c) const {
    return {members_.data() + offsets_[c], members_.data() + offsets_[c + 1]};
  }
  double score(size_t c) const { return scores_[c]; }
  uint32_t plus_mask(size_t c) const { return plus_masks_[c]; }
  std::span<const uint32_t> containing(GeoIndex g) const {
    return {index_.data() + index_offsets_[g],
            index_.data() + index_offsets_[g + 1]};
  }

  SupergeoPair Pair(size_t c) const;
  // Index of the candidate with exactly these (sorted) members.
  std::optional<size_t> Find(std::span<const GeoIndex> members) const;

 private:
  int num_geos_;
  std::vector<uint64_t> offsets_{0};
  std::vector<GeoIndex> members_;
  std::vector<double> scores_;
  std::vector<uint32_t> plus_masks_;
  std::vector<uint64_t> index_offsets_;
  std::vector<uint32_t> index_;
};

// All subsets with min_size <= |G| <= max_size. Throws PoolTooLarge when the
// count exceeds cfg.pool_cap.
CandidatePool EnumerateCandidates(std::span<const double> z,
                                  const DesignConfig& cfg);

// Subsets whose geos all fall in the same random partition.
CandidatePool PartitionHeuristicCandidates(std::span<const double> z,
                                           const DesignConfig& cfg,
                                           uint64_t seed);

// Every admissible pair, plus for each of the beta largest geos the best
// alpha fraction (pooled over sizes 3..max_size) of subsets containing it.
CandidatePool PerGeoHeuristicCandidates(std::span<const double> z,
                                        const DesignConfig& cfg);

// Dispatches on cfg.strategy (seed = cfg.seed).
CandidatePool BuildPool(std::span<const double> z, const DesignConfig& cfg);

struct SolveOptions {
  // Feasible design to start from (e.g. the optimum for a smaller max_size).
  std::optional<SupergeoDesign> incumbent;
};

struct SolveStats {
  int64_t nodes = 0;
  bool completed = false;
  bool seeded_from_baseline = false;
};

// Minimum-loss exact cover over `pool` by depth-first branch and bound.
SupergeoDesign SolvePartition(const CandidatePool& pool,
                              std::span<const double> z,
                              const DesignConfig& cfg,
                              const SolveOptions& options = {},
                              SolveStats* stats = nullptr);

// Sort by Z (ties by index) and pair neighbours.
SupergeoDesign MatchedPairsBaseline(std::span<const double> z);

// Exhaustive recursion over every partition into admissible blocks (N <= 12).
SupergeoDesign BruteForcePartition(std::span<const double> z,
                                   const DesignConfig& cfg);

struct MultiStartResult {
  SupergeoDesign design;
  size_t best_index = 0;
  std::vector<std::string> failures;  // one entry per failed start
};

// Independent searches, possibly concurrent; the minimum-loss design wins,
// ties going to fewer pairs larger than 2 and then lexicographic order.
MultiStartResult MultiStartSearch(std::span<const double> z,
                                  const std::vector<DesignConfig>& configs,
                                  int max_concurrency = 1);

// True if `a` is preferred over `b` under the multi-start ordering.
bool DesignPreferred(const SupergeoDesign& a, const SupergeoDesign& b);

// Structural check: disjoint pairs, non-empty sides, sizes in range and, if
// `full_cover`, every geo covered once.
bool IsValidDesign(const SupergeoDesign& design, int num_geos,
                   const DesignConfig& cfg, bool full_cover);

}  // namespace supergeo

#endif  // SUPERGEO_DESIGN_SEARCH_H_
