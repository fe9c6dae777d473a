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
#include "supergeo/design_search.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "supergeo/error.h"
#include "supergeo/rng.h"

namespace supergeo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

// Calls f(span) for every k-combination of `items`, in lexicographic order.
template <typename F>
void ForEachCombination(std::span<const GeoIndex> items, int k, F&& f) {
  const int n = static_cast<int>(items.size());
  if (k <= 0 || k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<GeoIndex> combo(k);
  while (true) {
    for (int i = 0; i < k; ++i) combo[i] = items[idx[i]];
    f(std::span<const GeoIndex>(combo));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

ValueSplit ScoreMembers(std::span<const GeoIndex> members,
                        std::span<const double> z) {
  double values[kMaxScoredSubset];
  for (size_t i = 0; i < members.size(); ++i) values[i] = z[members[i]];
  return ScoreValues({values, members.size()});
}

void AddAllSubsets(CandidatePool& pool, std::span<const GeoIndex> geos,
                   std::span<const double> z, int min_size, int max_size) {
  for (int k = min_size; k <= max_size; ++k) {
    ForEachCombination(geos, k, [&](std::span<const GeoIndex> combo) {
      pool.Add(combo, ScoreMembers(combo, z));
    });
  }
}

void CheckCap(double count, const DesignConfig& cfg) {
  if (count > static_cast<double>(cfg.pool_cap)) {
    throw Error(ErrorCode::kPoolTooLarge,
                std::to_string(static_cast<long double>(count)) +
                    " candidates exceed cap " + std::to_string(cfg.pool_cap));
  }
}

std::vector<GeoIndex> AllGeos(size_t n) {
  std::vector<GeoIndex> geos(n);
  std::iota(geos.begin(), geos.end(), 0);
  return geos;
}

int CountLargePairs(const SupergeoDesign& d) {
  int count = 0;
  for (const auto& p : d.pairs) count += p.size() > 2 ? 1 : 0;
  return count;
}

class BranchAndBound {
 public:
  BranchAndBound(const CandidatePool& pool, std::span<const double> z,
                 const DesignConfig& cfg)
      : pool_(pool),
        z_(z),
        cfg_(cfg),
        n_(pool.num_geos()),
        start_(std::chrono::steady_clock::now()),
        covered_(n_, 0),
        uncovered_(n_),
        blocked_(pool.size(), 0),
        feasible_(n_, 0),
        rate_(pool.size()),
        by_score_(n_),
        by_rate_(n_) {
    for (size_t c = 0; c < pool.size(); ++c) {
      rate_[c] = pool.score(c) / static_cast<double>(pool.members(c).size());
    }
    for (GeoIndex g = 0; g < n_; ++g) {
      const auto list = pool.containing(g);
      feasible_[g] = static_cast<int>(list.size());
      by_score_[g].assign(list.begin(), list.end());
      by_rate_[g].assign(list.begin(), list.end());
      // Stable sorts keep canonical candidate order among equal keys.
      std::stable_sort(by_score_[g].begin(), by_score_[g].end(),
                       [&](uint32_t a, uint32_t b) {
                         return pool.score(a) < pool.score(b);
                       });
      std::stable_sort(by_rate_[g].begin(), by_rate_[g].end(),
                       [&](uint32_t a, uint32_t b) {
                         return rate_[a] < rate_[b];
                       });
    }
  }

  void SetIncumbent(double loss) { best_loss_ = loss; }

  void Run() {
    Search(0.0);
    completed_ = !stop_;
  }

  bool completed() const { return completed_; }
  bool improved() const { return improved_; }
  double best_loss() const { return best_loss_; }
  const std::vector<uint32_t>& best() const { return best_; }
  int64_t nodes() const { return nodes_; }

 private:
  bool OutOfBudget() {
    ++nodes_;
    if (cfg_.node_limit > 0 && nodes_ > cfg_.node_limit) return true;
    if ((nodes_ & 255) == 0) {
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > cfg_.time_limit_seconds) return true;
    }
    return false;
  }

  void Cover(GeoIndex g) {
    covered_[g] = 1;
    --uncovered_;
    for (uint32_t c : pool_.containing(g)) {
      if (blocked_[c]++ == 0) {
        for (GeoIndex h : pool_.members(c)) --feasible_[h];
      }
    }
  }

  void Uncover(GeoIndex g) {
    for (uint32_t c : pool_.containing(g)) {
      if (--blocked_[c] == 0) {
        for (GeoIndex h : pool_.members(c)) ++feasible_[h];
      }
    }
    ++uncovered_;
    covered_[g] = 0;
  }

  void Search(double partial) {
    if (stop_) return;
    if (OutOfBudget()) {
      stop_ = true;
      return;
    }
    if (uncovered_ == 0) {
      if (static_cast<int>(stack_.size()) >= cfg_.min_pairs &&
          partial < best_loss_) {
        best_loss_ = partial;
        best_ = stack_;
        improved_ = true;
      }
      return;
    }

    // Branch on the most constrained uncovered geo (larger Z first on ties);
    // accumulate the per-geo cheapest-rate bound on the way.
    GeoIndex branch = -1;
    double bound = 0.0;
    for (GeoIndex g = 0; g < n_; ++g) {
      if (covered_[g]) continue;
      if (branch < 0 || feasible_[g] < feasible_[branch] ||
          (feasible_[g] == feasible_[branch] && z_[g] > z_[branch])) {
        branch = g;
      }
      if (cfg_.require_full_cover) {
        if (feasible_[g] == 0) return;
        for (uint32_t c : by_rate_[g]) {
          if (blocked_[c] == 0) {
            bound += rate_[c];
            break;
          }
        }
      }
    }
    if (partial + bound * (1.0 - 1e-9) >= best_loss_) return;

    for (uint32_t c : by_score_[branch]) {
      if (blocked_[c] != 0) continue;
      const double cost = partial + pool_.score(c);
      if (cost >= best_loss_) break;
      const auto members = pool_.members(c);
      for (GeoIndex h : members) Cover(h);
      stack_.push_back(c);
      Search(cost);
      stack_.pop_back();
      for (auto it = members.rbegin(); it != members.rend(); ++it) {
        Uncover(*it);
      }
      if (stop_) return;
    }
    if (!cfg_.require_full_cover) {
      // Leave `branch` out of the design.
      Cover(branch);
      Search(partial);
      Uncover(branch);
    }
  }

  const CandidatePool& pool_;
  std::span<const double> z_;
  const DesignConfig& cfg_;
  const int n_;
  const std::chrono::steady_clock::time_point start_;

  std::vector<char> covered_;
  int uncovered_;
  std::vector<int> blocked_;
  std::vector<int> feasible_;
  std::vector<double> rate_;
  std::vector<std::vector<uint32_t>> by_score_;
  std::vector<std::vector<uint32_t>> by_rate_;

  std::vector<uint32_t> stack_;
  std::vector<uint32_t> best_;
  double best_loss_ = kInf;
  bool improved_ = false;
  bool stop_ = false;
  bool completed_ = false;
  int64_t nodes_ = 0;
};

void BruteForceRecurse(std::span<const double> z, const DesignConfig& cfg,
                       std::vector<char>& used, std::vector<SupergeoPair>& cur,
                       double partial, double& best_loss,
                       std::vector<SupergeoPair>& best) {
  const int n = static_cast<int>(z.size());
  GeoIndex first = -1;
  std::vector<GeoIndex> rest;
  for (GeoIndex g = 0; g < n; ++g) {
    if (used[g]) continue;
    if (first < 0) {
      first = g;
    } else {
      rest.push_back(g);
    }
  }
  if (first < 0) {
    if (static_cast<int>(cur.size()) >= cfg.min_pairs && partial < best_loss) {
      best_loss = partial;
      best = cur;
    }
    return;
  }
  used[first] = 1;
  for (int k = cfg.min_size; k <= cfg.max_size; ++k) {
    ForEachCombination(rest, k - 1, [&](std::span<const GeoIndex> others) {
      std::vector<GeoIndex> block{first};
      block.insert(block.end(), others.begin(), others.end());
      SupergeoPair pair = Score(block, z);
      for (GeoIndex g : others) used[g] = 1;
      const double score = pair.score;
      cur.push_back(std::move(pair));
      BruteForceRecurse(z, cfg, used, cur, partial + score, best_loss, best);
      cur.pop_back();
      for (GeoIndex g : others) used[g] = 0;
    });
  }
  used[first] = 0;
}

}  // namespace

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kExhaustive: return "exhaustive";
    case Strategy::kPartitionHeuristic: return "partition";
    case Strategy::kPerGeoHeuristic: return "pergeo";
  }
  return "exhaustive";
}

Strategy ParseStrategy(const std::string& name) {
  if (name == "exhaustive") return Strategy::kExhaustive;
  if (name == "partition" || name == "partition_heuristic") {
    return Strategy::kPartitionHeuristic;
  }
  if (name == "pergeo" || name == "pergeo_heuristic") {
    return Strategy::kPerGeoHeuristic;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown strategy '" + name + "'");
}

void DesignConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidConfig, msg);
  };
  if (min_size < 2) fail("min_size must be >= 2");
  if (max_size < min_size) fail("max_size must be >= min_size");
  if (max_size > kMaxScoredSubset) {
    fail("max_size must be <= " + std::to_string(kMaxScoredSubset));
  }
  if (min_pairs < 1) fail("min_pairs must be >= 1");
  if (!(time_limit_seconds > 0.0)) fail("time_limit must be > 0");
  if (node_limit < 0) fail("node_limit must be >= 0");
  if (heuristic.num_partitions < 1) fail("num_partitions must be >= 1");
  if (heuristic.beta < 0) fail("beta must be >= 0");
  if (!(heuristic.alpha > 0.0 && heuristic.alpha <= 1.0)) {
    fail("alpha must be in (0, 1]");
  }
  if (pool_cap < 1) fail("pool_cap must be >= 1");
}

void CandidatePool::Add(std::span<const GeoIndex> members,
                        const ValueSplit& split) {
  members_.insert(members_.end(), members.begin(), members.end());
  offsets_.push_back(members_.size());
  scores_.push_back(split.score);
  plus_masks_.push_back(split.plus_mask);
}

void CandidatePool::Finish() {
  const size_t count = scores_.size();
  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](size_t a, size_t b) {
    const auto ma = members(a), mb = members(b);
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    return LexLess(ma, mb);
  };
  std::sort(order.begin(), order.end(), less);

  std::vector<uint64_t> offsets{0};
  std::vector<GeoIndex> flat;
  std::vector<double> scores;
  std::vector<uint32_t> masks;
  flat.reserve(members_.size());
  scores.reserve(count);
  masks.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const size_t c = order[i];
    if (i > 0 && !less(order[i - 1], c)) continue;  // duplicate
    const auto m = members(c);
    flat.insert(flat.end(), m.begin(), m.end());
    offsets.push_back(flat.size());
    scores.push_back(scores_[c]);
    masks.push_back(plus_masks_[c]);
  }
  offsets_ = std::move(offsets);
  members_ = std::move(flat);
  scores_ = std::move(scores);
  plus_masks_ = std::move(masks);

  index_offsets_.assign(num_geos_ + 1, 0);
  for (GeoIndex g : members_) ++index_offsets_[g + 1];
  std::partial_sum(index_offsets_.begin(), index_offsets_.end(),
                   index_offsets_.begin());
  index_.assign(members_.size(), 0);
  std::vector<uint64_t> fill(index_offsets_.begin(), index_offsets_.end() - 1);
  for (size_t c = 0; c < scores_.size(); ++c) {
    for (GeoIndex g : members(c)) index_[fill[g]++] = static_cast<uint32_t>(c);
  }
}

SupergeoPair CandidatePool::Pair(size_t c) const {
  SupergeoPair pair;
  const auto m = members(c);
  const uint32_t mask = plus_masks_[c];
  for (size_t i = 0; i < m.size(); ++i) {
    ((mask >> i) & 1u ? pair.plus : pair.minus).push_back(m[i]);
  }
  pair.score = scores_[c];
  return pair;
}

std::optional<size_t> CandidatePool::Find(
    std::span<const GeoIndex> members) const {
  if (members.empty() || members.front() < 0 ||
      members.front() >= num_geos_) {
    return std::nullopt;
  }
  for (uint32_t c : containing(members.front())) {
    const auto m = this->members(c);
    if (std::equal(m.begin(), m.end(), members.begin(), members.end())) {
      return c;
    }
  }
  return std::nullopt;
}

CandidatePool EnumerateCandidates(std::span<const double> z,
                                  const DesignConfig& cfg) {
  cfg.Validate();
  const int n = static_cast<int>(z.size());
  if (n < cfg.min_size) {
    throw Error(ErrorCode::kInvalidConfig,
                "need at least min_size = " + std::to_string(cfg.min_size) +
                    " geos");
  }
  double count = 0.0;
  for (int k = cfg.min_size; k <= cfg.max_size; ++k) count += Choose(n, k);
  CheckCap(count, cfg);
  CandidatePool pool(n);
  const auto geos = AllGeos(n);
  AddAllSubsets(pool, geos, z, cfg.min_size, cfg.max_size);
  pool.Finish();
  return pool;
}

CandidatePool PartitionHeuristicCandidates(std::span<const double> z,
                                           const DesignConfig& cfg,
                                           uint64_t seed) {
  cfg.Validate();
  const int n = static_cast<int>(z.size());
  const int parts = cfg.heuristic.num_partitions;
  // Fisher-Yates on a counter-based stream, then deal round-robin.
  std::vector<GeoIndex> shuffled = AllGeos(n);
  const CounterRng rng(seed, /*stream=*/0x7061727469ULL);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.Below(i, static_cast<uint64_t>(i) + 1));
    std::swap(shuffled[i], shuffled[j]);
  }
  std::vector<std::vector<GeoIndex>> groups(parts);
  for (int i = 0; i < n; ++i) groups[i % parts].push_back(shuffled[i]);

  double count = 0.0;
  for (auto& group : groups) {
    if (static_cast<int>(group.size()) < cfg.min_size) {
      throw Error(ErrorCode::kPartitionTooSmall,
                  "partition with " + std::to_string(group.size()) +
                      " geos < min_size " + std::to_string(cfg.min_size));
    }
    std::sort(group.begin(), group.end());
    for (int k = cfg.min_size; k <= cfg.max_size; ++k) {
      count += Choose(static_cast<int>(group.size()), k);
    }
  }
  CheckCap(count, cfg);
  CandidatePool pool(n);
  for (const auto& group : groups) {
    AddAllSubsets(pool, group, z, cfg.min_size, cfg.max_size);
  }
  pool.Finish();
  return pool;
}

CandidatePool PerGeoHeuristicCandidates(std::span<const double> z,
                                        const DesignConfig& cfg) {
  cfg.Validate();
  const int n = static_cast<int>(z.size());
  if (cfg.heuristic.beta > n) {
    throw Error(ErrorCode::kInvalidConfig, "beta exceeds number of geos");
  }
  CandidatePool pool(n);
  const auto geos = AllGeos(n);
  if (cfg.min_size <= 2 && cfg.max_size >= 2) {
    AddAllSubsets(pool, geos, z, 2, 2);
  }

  std::vector<GeoIndex> by_size = geos;
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](GeoIndex a, GeoIndex b) { return z[a] > z[b]; });

  const int lo = std::max(3, cfg.min_size);
  struct Scored {
    double score;
    uint32_t offset;  // into `flat`
    uint32_t size;
    ValueSplit split;
  };
  for (int b = 0; b < cfg.heuristic.beta; ++b) {
    const GeoIndex big = by_size[b];
    std::vector<GeoIndex> others;
    others.reserve(n - 1);
    for (GeoIndex g : geos) {
      if (g != big) others.push_back(g);
    }
    std::vector<Scored> scored;
    std::vector<GeoIndex> flat;
    std::vector<GeoIndex> block;
    for (int k = lo; k <= cfg.max_size; ++k) {
      ForEachCombination(others, k - 1, [&](std::span<const GeoIndex> rest) {
        block.assign(rest.begin(), rest.end());
        block.insert(std::upper_bound(block.begin(), block.end(), big), big);
        const ValueSplit split = ScoreMembers(block, z);
        scored.push_back({split.score, static_cast<uint32_t>(flat.size()),
                          static_cast<uint32_t>(block.size()), split});
        flat.insert(flat.end(), block.begin(), block.end());
      });
    }
    if (scored.empty()) continue;
    const auto keep = static_cast<size_t>(std::ceil(
        cfg.heuristic.alpha * static_cast<double>(scored.size()) - 1e-9));
    auto span_of = [&](const Scored& s) {
      return std::span<const GeoIndex>(flat.data() + s.offset, s.size);
    };
    auto better = [&](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score < b.score;
      if (a.size != b.size) return a.size < b.size;
      return LexLess(span_of(a), span_of(b));
    };
    if (keep < scored.size()) {
      std::nth_element(scored.begin(), scored.begin() + keep, scored.end(),
                       better);
      scored.resize(keep);
    }
    for (const Scored& s : scored) pool.Add(span_of(s), s.split);
  }
  pool.Finish();
  return pool;
}

CandidatePool BuildPool(std::span<const double> z, const DesignConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::kExhaustive: return EnumerateCandidates(z, cfg);
    case Strategy::kPartitionHeuristic:
      return PartitionHeuristicCandidates(z, cfg, cfg.seed);
    case Strategy::kPerGeoHeuristic: return PerGeoHeuristicCandidates(z, cfg);
  }
  return EnumerateCandidates(z, cfg);
}

SupergeoDesign SolvePartition(const CandidatePool& pool,
                              std::span<const double> z,
                              const DesignConfig& cfg,
                              const SolveOptions& options, SolveStats* stats) {
  cfg.Validate();
  const int n = pool.num_geos();
  if (static_cast<size_t>(n) != z.size()) {
    throw Error(ErrorCode::kInvalidConfig, "pool and Z disagree on geo count");
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kInfeasible, "empty candidate pool");
  }
  if (cfg.require_full_cover) {
    for (GeoIndex g = 0; g < n; ++g) {
      if (pool.containing(g).empty()) {
        throw Error(ErrorCode::kInfeasible,
                    "geo " + std::to_string(g) + " is in no candidate");
      }
    }
  }

  std::optional<SupergeoDesign> incumbent;
  bool seeded_from_baseline = false;
  if (options.incumbent) {
    SupergeoDesign d = *options.incumbent;
    Finalize(d, z);
    if (!IsValidDesign(d, n, cfg, cfg.require_full_cover)) {
      throw Error(ErrorCode::kInvalidConfig, "initial incumbent is not valid");
    }
    incumbent = std::move(d);
  }
  if (cfg.min_size == 2 && cfg.require_full_cover && n % 2 == 0 &&
      n / 2 >= cfg.min_pairs) {
    SupergeoDesign baseline = MatchedPairsBaseline(z);
    bool in_pool = true;
    for (const SupergeoPair& pair : baseline.pairs) {
      if (!pool.Find(pair.Members())) {
        in_pool = false;
        break;
      }
    }
    if (in_pool && (!incumbent || baseline.loss < incumbent->loss)) {
      baseline.optimal = false;
      incumbent = std::move(baseline);
      seeded_from_baseline = true;
    }
  }

  BranchAndBound bnb(pool, z, cfg);
  if (incumbent) bnb.SetIncumbent(incumbent->loss);
  bnb.Run();
  if (stats) {
    stats->nodes = bnb.nodes();
    stats->completed = bnb.completed();
    stats->seeded_from_baseline = seeded_from_baseline;
  }

  SupergeoDesign design;
  if (bnb.improved()) {
    for (uint32_t c : bnb.best()) design.pairs.push_back(pool.Pair(c));
    Finalize(design, z);
  } else if (incumbent) {
    design = std::move(*incumbent);
  } else if (bnb.completed()) {
    throw Error(ErrorCode::kInfeasible, "no exact cover exists in the pool");
  } else {
    throw Error(ErrorCode::kTimeoutNoIncumbent,
                "search budget exhausted before any feasible design");
  }
  design.optimal = bnb.completed();
  return design;
}

SupergeoDesign MatchedPairsBaseline(std::span<const double> z) {
  const int n = static_cast<int>(z.size());
  if (n % 2 != 0) {
    throw Error(ErrorCode::kOddCount,
                std::to_string(n) + " geos cannot be paired");
  }
  std::vector<GeoIndex> order = AllGeos(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](GeoIndex a, GeoIndex b) { return z[a] < z[b]; });
  SupergeoDesign design;
  for (int i = 0; i + 1 < n; i += 2) {
    const GeoIndex pair[2] = {std::min(order[i], order[i + 1]),
                              std::max(order[i], order[i + 1])};
    design.pairs.push_back(Score(pair, z));
  }
  Finalize(design, z);
  design.optimal = true;
  return design;
}

SupergeoDesign BruteForcePartition(std::span<const double> z,
                                   const DesignConfig& cfg) {
  cfg.Validate();
  if (z.size() > 12) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(z.size()) + " geos > 12 for brute force");
  }
  std::vector<char> used(z.size(), 0);
  std::vector<SupergeoPair> cur, best;
  double best_loss = kInf;
  BruteForceRecurse(z, cfg, used, cur, 0.0, best_loss, best);
  if (best_loss == kInf) {
    throw Error(ErrorCode::kInfeasible, "no admissible partition");
  }
  SupergeoDesign design;
  design.pairs = std::move(best);
  Finalize(design, z);
  design.optimal = true;
  return design;
}

bool DesignPreferred(const SupergeoDesign& a, const SupergeoDesign& b) {
  if (a.loss != b.loss) return a.loss < b.loss;
  const int la = CountLargePairs(a), lb = CountLargePairs(b);
  if (la != lb) return la < lb;
  return std::lexicographical_compare(
      a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
      [](const SupergeoPair& x, const SupergeoPair& y) {
        if (x.plus != y.plus) return x.plus < y.plus;
        return x.minus < y.minus;
      });
}

MultiStartResult MultiStartSearch(std::span<const double> z,
                                  const std::vector<DesignConfig>& configs,
                                  int max_concurrency) {
  if (configs.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no search configurations");
  }
  struct Outcome {
    std::optional<SupergeoDesign> design;
    std::string failure;
  };
  auto run_one = [z](const DesignConfig& cfg) {
    Outcome out;
    try {
      const CandidatePool pool = BuildPool(z, cfg);
      out.design = SolvePartition(pool, z, cfg);
    } catch (const Error& e) {
      out.failure = e.what();
    }
    return out;
  };

  std::vector<Outcome> outcomes(configs.size());
  const size_t width = static_cast<size_t>(std::max(1, max_concurrency));
  for (size_t begin = 0; begin < configs.size(); begin += width) {
    const size_t end = std::min(configs.size(), begin + width);
    if (width == 1) {
      outcomes[begin] = run_one(configs[begin]);
      continue;
    }
    std::vector<std::future<Outcome>> futures;
    for (size_t i = begin; i < end; ++i) {
      futures.push_back(std::async(std::launch::async, run_one,
                                   std::cref(configs[i])));
    }
    for (size_t i = begin; i < end; ++i) outcomes[i] = futures[i - begin].get();
  }

  MultiStartResult result;
  bool have = false;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].design) {
      result.failures.push_back("start " + std::to_string(i) + ": " +
                                outcomes[i].failure);
      continue;
    }
    if (!have || DesignPreferred(*outcomes[i].design, result.design)) {
      result.design = *outcomes[i].design;
      result.best_index = i;
      have = true;
    }
  }
  if (!have) {
    throw Error(ErrorCode::kAllFailed,
                "all " + std::to_string(configs.size()) + " starts failed");
  }
  return result;
}

bool IsValidDesign(const SupergeoDesign& design, int num_geos,
                   const DesignConfig& cfg, bool full_cover) {
  std::vector<int> seen(num_geos, 0);
  for (const SupergeoPair& pair : design.pairs) {
    if (pair.plus.empty() || pair.minus.empty()) return false;
    if (pair.size() < cfg.min_size || pair.size() > cfg.max_size) return false;
    for (const auto* side : {&pair.plus, &pair.minus}) {
      for (GeoIndex g : *side) {
        if (g < 0 || g >= num_geos || seen[g]++ > 0) return false;
      }
    }
  }
  if (design.num_pairs() < cfg.min_pairs) return false;
  if (full_cover) {
    for (int s : seen) {
      if (s != 1) return false;
    }
  }
  return true;
}

}  // namespace supergeo
