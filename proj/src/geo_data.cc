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
#include "supergeo/geo_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "supergeo/error.h"

namespace supergeo {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T ParseNumber(std::string_view field, int line_no) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kBadValue, "line " + std::to_string(line_no) +
                                          ": cannot parse '" +
                                          std::string(field) + "'");
  }
  return value;
}

void MinMax(std::span<const double> v, double& lo, double& hi) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  lo = *mn;
  hi = *mx;
}

void ScaleInPlace(std::vector<double>& v, double lo, double hi) {
  const double range = hi - lo;
  for (double& x : v) x = range > 0.0 ? (x - lo) / range : 0.0;
}

}  // namespace

double ScaleInfo::UnscaleResponse(double v) const {
  return scaled ? response_min + v * (response_max - response_min) : v;
}

double ScaleInfo::UnscaleSpend(double v) const {
  return scaled ? spend_min + v * (spend_max - spend_min) : v;
}

GeoPanel GeoPanel::Create(std::vector<std::string> geos,
                          std::vector<int> periods,
                          std::vector<std::vector<double>> response,
                          std::vector<std::vector<double>> spend,
                          const LoadOptions& options) {
  const size_t n = geos.size();
  const size_t t = periods.size();
  if (n == 0 || t == 0) {
    throw Error(ErrorCode::kMissingValue, "panel has no geos or no periods");
  }
  if (response.size() != n || spend.size() != n) {
    throw Error(ErrorCode::kMissingValue, "row count does not match geos");
  }
  const int max_pretest = options.allow_empty_test ? static_cast<int>(t)
                                                   : static_cast<int>(t) - 1;
  int pretest_len = options.pretest_len;
  if (pretest_len == 0) {
    pretest_len = t >= 2 ? static_cast<int>(t / 2) : 1;
  }
  if (pretest_len < 1 || pretest_len > max_pretest) {
    throw Error(ErrorCode::kInvalidConfig,
                "pretest_len " + std::to_string(pretest_len) +
                    " outside [1, " + std::to_string(max_pretest) + "]");
  }
  if (!std::is_sorted(periods.begin(), periods.end()) ||
      std::adjacent_find(periods.begin(), periods.end()) != periods.end()) {
    throw Error(ErrorCode::kDuplicateGeoPeriod,
                "periods must be strictly increasing");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return geos[a] < geos[b]; });

  GeoPanel panel;
  panel.periods_ = std::move(periods);
  panel.pretest_len_ = pretest_len;
  panel.geos_.reserve(n);
  panel.response_.reserve(n * t);
  panel.spend_.reserve(n * t);
  for (size_t i = 0; i < n; ++i) {
    const size_t src = order[i];
    if (geos[src].empty()) {
      throw Error(ErrorCode::kBadValue, "empty geo id");
    }
    if (i > 0 && geos[src] == panel.geos_.back()) {
      throw Error(ErrorCode::kDuplicateGeoPeriod, "duplicate geo " + geos[src]);
    }
    if (response[src].size() != t || spend[src].size() != t) {
      throw Error(ErrorCode::kMissingValue,
                  "geo " + geos[src] + " does not have every period");
    }
    for (size_t p = 0; p < t; ++p) {
      const double r = response[src][p];
      const double s = spend[src][p];
      if (!std::isfinite(r) || !std::isfinite(s)) {
        throw Error(ErrorCode::kBadValue, "non-finite value for " + geos[src]);
      }
      if (r < 0.0 || s < 0.0) {
        throw Error(ErrorCode::kNegativeValue,
                    "negative value for geo " + geos[src]);
      }
      panel.response_.push_back(r);
      panel.spend_.push_back(s);
    }
    panel.geos_.push_back(std::move(geos[src]));
  }
  return options.scale ? panel.Scaled() : panel;
}

GeoIndex GeoPanel::Find(const std::string& id) const {
  const auto it = std::lower_bound(geos_.begin(), geos_.end(), id);
  if (it == geos_.end() || *it != id) return -1;
  return static_cast<GeoIndex>(it - geos_.begin());
}

GeoPanel GeoPanel::Scaled() const {
  GeoPanel out = *this;
  if (scale_info_.scaled) return out;
  ScaleInfo& info = out.scale_info_;
  info.scaled = true;
  MinMax(response_, info.response_min, info.response_max);
  MinMax(spend_, info.spend_min, info.spend_max);
  ScaleInPlace(out.response_, info.response_min, info.response_max);
  ScaleInPlace(out.spend_, info.spend_min, info.spend_max);
  return out;
}

GeoPanel ParsePanelCsv(std::istream& in, const LoadOptions& options) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kBadHeader, "empty input");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  const auto header = SplitCommas(line);
  int col_geo = -1, col_period = -1, col_response = -1, col_spend = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "geo") col_geo = i;
    else if (header[i] == "period") col_period = i;
    else if (header[i] == "response") col_response = i;
    else if (header[i] == "spend") col_spend = i;
  }
  if (header.size() != 4 || col_geo < 0 || col_period < 0 ||
      col_response < 0 || col_spend < 0) {
    throw Error(ErrorCode::kBadHeader,
                "expected header geo,period,response,spend; got '" + line +
                    "'");
  }

  // geo -> period -> (response, spend)
  std::map<std::string, std::map<int, std::pair<double, double>>> rows;
  std::set<int> periods;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kMissingValue,
                  "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    for (const auto& f : fields) {
      if (f.empty()) {
        throw Error(ErrorCode::kMissingValue,
                    "line " + std::to_string(line_no) + ": empty field");
      }
    }
    const std::string geo(fields[col_geo]);
    const int period = ParseNumber<int>(fields[col_period], line_no);
    const double response = ParseNumber<double>(fields[col_response], line_no);
    const double spend = ParseNumber<double>(fields[col_spend], line_no);
    if (period < 0) {
      throw Error(ErrorCode::kBadValue,
                  "line " + std::to_string(line_no) + ": negative period");
    }
    if (response < 0.0 || spend < 0.0) {
      throw Error(ErrorCode::kNegativeValue,
                  "line " + std::to_string(line_no) + ": geo " + geo);
    }
    if (!rows[geo].emplace(period, std::make_pair(response, spend)).second) {
      throw Error(ErrorCode::kDuplicateGeoPeriod,
                  "geo " + geo + " period " + std::to_string(period));
    }
    periods.insert(period);
  }

  std::vector<std::string> geos;
  std::vector<std::vector<double>> response, spend;
  for (const auto& [geo, by_period] : rows) {
    if (by_period.size() != periods.size()) {
      for (int p : periods) {
        if (!by_period.count(p)) {
          throw Error(ErrorCode::kMissingValue,
                      "geo " + geo + " missing period " + std::to_string(p));
        }
      }
    }
    geos.push_back(geo);
    auto& r = response.emplace_back();
    auto& s = spend.emplace_back();
    for (const auto& [p, v] : by_period) {
      r.push_back(v.first);
      s.push_back(v.second);
    }
  }
  return GeoPanel::Create(std::move(geos),
                          std::vector<int>(periods.begin(), periods.end()),
                          std::move(response), std::move(spend), options);
}

GeoPanel LoadPanel(const std::filesystem::path& path,
                   const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return ParsePanelCsv(in, options);
}

void WritePanelCsv(const GeoPanel& panel, std::ostream& out) {
  out << "geo,period,response,spend\n";
  char buf[64];
  for (GeoIndex g = 0; g < panel.num_geos(); ++g) {
    for (int t = 0; t < panel.num_periods(); ++t) {
      out << panel.geos()[g] << ',' << panel.periods()[t] << ',';
      // %.17g round-trips every double exactly.
      std::snprintf(buf, sizeof(buf), "%.17g", panel.response(g, t));
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", panel.spend(g, t));
      out << buf << '\n';
    }
  }
}

void WritePanel(const GeoPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  WritePanelCsv(panel, out);
}

std::vector<GeoAggregates> Aggregates(const GeoPanel& panel) {
  std::vector<GeoAggregates> aggs(panel.num_geos());
  for (GeoIndex g = 0; g < panel.num_geos(); ++g) {
    GeoAggregates& a = aggs[g];
    for (int t = 0; t < panel.num_periods(); ++t) {
      if (t < panel.pretest_len()) {
        a.pretest_response += panel.response(g, t);
        a.pretest_spend += panel.spend(g, t);
      } else {
        a.test_response += panel.response(g, t);
        a.test_spend += panel.spend(g, t);
      }
    }
    a.initial_spend = a.test_spend;
  }
  return aggs;
}

std::vector<double> PretestResponses(std::span<const GeoAggregates> aggs) {
  std::vector<double> z;
  z.reserve(aggs.size());
  for (const auto& a : aggs) z.push_back(a.pretest_response);
  return z;
}

std::vector<double> TestResponses(std::span<const GeoAggregates> aggs) {
  std::vector<double> z;
  z.reserve(aggs.size());
  for (const auto& a : aggs) z.push_back(a.test_response);
  return z;
}

std::vector<double> InitialSpends(std::span<const GeoAggregates> aggs) {
  std::vector<double> s;
  s.reserve(aggs.size());
  for (const auto& a : aggs) s.push_back(a.initial_spend);
  return s;
}

}  // namespace supergeo
