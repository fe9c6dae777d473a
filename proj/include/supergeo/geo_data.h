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
#ifndef SUPERGEO_GEO_DATA_H_
#define SUPERGEO_GEO_DATA_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace supergeo {

// Geos are addressed by their position in the panel, which is sorted by id.
// Lexicographic order on indices therefore equals lexicographic order on ids.
using GeoIndex = int;

// Min-max ranges used to map each variable into [0, 1]. Kept so reports can
// be expressed in original units again.
struct ScaleInfo {
  bool scaled = false;
  double response_min = 0.0;
  double response_max = 0.0;
  double spend_min = 0.0;
  double spend_max = 0.0;

  double UnscaleResponse(double v) const;
  double UnscaleSpend(double v) const;
};

struct LoadOptions {
  // Pretest periods; 0 picks the first half (or the only period).
  int pretest_len = 0;
  bool scale = false;
  // Design-only panels (e.g. a single synthetic period) have no test window.
  bool allow_empty_test = false;
};

// Spend and response time series per geo with a pretest/test split.
// Immutable once built; every constructor path validates.
class GeoPanel {
 public:
  // `spend` and `response` are row-major [geo][period]. Geos need not be
  // sorted; they are reordered by id.
  static GeoPanel Create(std::vector<std::string> geos,
                         std::vector<int> periods,
                         std::vector<std::vector<double>> response,
                         std::vector<std::vector<double>> spend,
                         const LoadOptions& options);

  int num_geos() const { return static_cast<int>(geos_.size()); }
  int num_periods() const { return static_cast<int>(periods_.size()); }
  int pretest_len() const { return pretest_len_; }
  const std::vector<std::string>& geos() const { return geos_; }
  const std::vector<int>& periods() const { return periods_; }
  const ScaleInfo& scale_info() const { return scale_info_; }

  double response(GeoIndex g, int t) const {
    return response_[static_cast<size_t>(g) * periods_.size() + t];
  }
  double spend(GeoIndex g, int t) const {
    return spend_[static_cast<size_t>(g) * periods_.size() + t];
  }

  // Index of a geo id, or -1.
  GeoIndex Find(const std::string& id) const;

  // Per-variable min-max scaling over all geo-periods.
  GeoPanel Scaled() const;

 private:
  GeoPanel() = default;

  std::vector<std::string> geos_;
  std::vector<int> periods_;
  int pretest_len_ = 0;
  std::vector<double> response_;
  std::vector<double> spend_;
  ScaleInfo scale_info_;
};

struct GeoAggregates {
  double pretest_response = 0.0;  // matching variable (Z proxy)
  double test_response = 0.0;
  double pretest_spend = 0.0;
  double test_spend = 0.0;
  double initial_spend = 0.0;  // S-bar; equals test_spend in simulations
};

// CSV with header `geo,period,response,spend`.
GeoPanel ParsePanelCsv(std::istream& in, const LoadOptions& options);
GeoPanel LoadPanel(const std::filesystem::path& path,
                   const LoadOptions& options);
void WritePanelCsv(const GeoPanel& panel, std::ostream& out);
void WritePanel(const GeoPanel& panel, const std::filesystem::path& path);

std::vector<GeoAggregates> Aggregates(const GeoPanel& panel);

std::vector<double> PretestResponses(std::span<const GeoAggregates> aggs);
std::vector<double> TestResponses(std::span<const GeoAggregates> aggs);
std::vector<double> InitialSpends(std::span<const GeoAggregates> aggs);

}  // namespace supergeo

#endif  // SUPERGEO_GEO_DATA_H_
