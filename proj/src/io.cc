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
#include "supergeo/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "supergeo/error.h"

namespace supergeo {
namespace {

std::vector<std::string> Ids(std::span<const GeoIndex> geos,
                             const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  out.reserve(geos.size());
  for (GeoIndex g : geos) out.push_back(ids.at(g));
  return out;
}

std::vector<GeoIndex> Indices(const Json& list,
                              const std::vector<std::string>& ids) {
  std::vector<GeoIndex> out;
  for (const auto& item : list) {
    const std::string id = item.get<std::string>();
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) {
      throw Error(ErrorCode::kUnknownGeo, "geo '" + id + "' not in panel");
    }
    out.push_back(static_cast<GeoIndex>(it - ids.begin()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(0, 1);
    fields.push_back(f);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double ParseDouble(const std::string& field, int line_no) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kBadValue, "line " + std::to_string(line_no) +
                                          ": cannot parse '" + field + "'");
  }
  return v;
}

// JSON has no NaN; failed summaries become null.
Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json DesignConfigToJson(const DesignConfig& cfg) {
  Json j;
  j["strategy"] = StrategyName(cfg.strategy);
  j["min_size"] = cfg.min_size;
  j["max_size"] = cfg.max_size;
  j["min_pairs"] = cfg.min_pairs;
  j["time_limit_seconds"] = cfg.time_limit_seconds;
  j["node_limit"] = cfg.node_limit;
  j["seed"] = cfg.seed;
  j["num_partitions"] = cfg.heuristic.num_partitions;
  j["beta"] = cfg.heuristic.beta;
  j["alpha"] = cfg.heuristic.alpha;
  j["require_full_cover"] = cfg.require_full_cover;
  j["pool_cap"] = cfg.pool_cap;
  return j;
}

Json DesignToJson(const SupergeoDesign& design,
                  const std::vector<std::string>& ids,
                  const std::optional<DesignConfig>& cfg) {
  Json pairs = Json::array();
  for (const SupergeoPair& pair : design.pairs) {
    Json p;
    p["plus"] = Ids(pair.plus, ids);
    p["minus"] = Ids(pair.minus, ids);
    p["score"] = pair.score;
    pairs.push_back(std::move(p));
  }
  Json j;
  j["pairs"] = std::move(pairs);
  j["loss"] = design.loss;
  j["optimal"] = design.optimal;
  j["config"] = cfg ? DesignConfigToJson(*cfg) : Json(nullptr);
  j["seed"] = cfg ? Json(cfg->seed) : Json(nullptr);
  return j;
}

SupergeoDesign DesignFromJson(const Json& doc,
                              const std::vector<std::string>& ids,
                              std::span<const double> z) {
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "design JSON needs a 'pairs' array");
  }
  SupergeoDesign design;
  try {
    for (const auto& p : doc["pairs"]) {
      SupergeoPair pair;
      pair.plus = Indices(p.at("plus"), ids);
      pair.minus = Indices(p.at("minus"), ids);
      if (pair.plus.empty() || pair.minus.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "pair with an empty side");
      }
      design.pairs.push_back(std::move(pair));
    }
    design.optimal = doc.value("optimal", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("design JSON: ") + e.what());
  }
  Finalize(design, z);
  std::vector<GeoIndex> all;
  for (const auto& pair : design.pairs) {
    const auto m = pair.Members();
    all.insert(all.end(), m.begin(), m.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(ErrorCode::kInvalidConfig, "a geo appears in two pairs");
  }
  return design;
}

Json InstanceToJson(const N3dmInstance& instance) {
  Json j;
  j["W"] = instance.w;
  j["X"] = instance.x;
  j["Y"] = instance.y;
  j["B"] = instance.bound;
  return j;
}

N3dmInstance InstanceFromJson(const Json& doc) {
  N3dmInstance inst;
  try {
    inst.w = doc.at("W").get<std::vector<int64_t>>();
    inst.x = doc.at("X").get<std::vector<int64_t>>();
    inst.y = doc.at("Y").get<std::vector<int64_t>>();
    inst.bound = doc.at("B").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("instance JSON: ") + e.what());
  }
  inst.Validate();
  return inst;
}

Json AssignmentRecord(int64_t iter, const Assignment& assignment,
                      double theta_hat, std::optional<TrimmedMatchResult> trim) {
  Json j;
  j["iter"] = iter;
  j["signs"] = assignment.signs;
  j["theta_hat"] = Number(theta_hat);
  j["theta_hat_trim"] = trim ? Number(trim->estimate) : Json(nullptr);
  j["q_star"] = trim ? Json(trim->q_star) : Json(nullptr);
  return j;
}

Json EvalConfigToJson(const EvalConfig& cfg) {
  Json j;
  j["iterations"] = cfg.iterations;
  j["exhaustive"] = cfg.exhaustive;
  j["budget"] = cfg.budget;
  j["effect"] = {{"kind", EffectKindName(cfg.effects.kind)},
                 {"theta0", cfg.effects.theta0},
                 {"c", cfg.effects.c},
                 {"noise_halfwidth", cfg.effects.noise_halfwidth},
                 {"seed", cfg.effects.seed}};
  Json est = Json::array();
  for (EstimatorKind e : cfg.estimators) est.push_back(EstimatorName(e));
  j["estimators"] = std::move(est);
  j["max_trim_fraction"] = cfg.max_trim_fraction;
  j["ci_level"] = cfg.ci_level ? Json(*cfg.ci_level) : Json(nullptr);
  j["adversary_eta"] = cfg.adversary ? Json(cfg.adversary->eta) : Json(nullptr);
  j["seed"] = cfg.seed;
  return j;
}

Json MethodReportToJson(const MethodReport& r) {
  Json j;
  j["design"] = r.design;
  j["estimator"] = EstimatorName(r.estimator);
  j["theta"] = r.theta;
  j["rmse"] = Number(r.rmse);
  j["bias"] = Number(r.bias);
  j["abs_bias"] = Number(r.abs_bias);
  j["variance"] = Number(r.variance);
  j["coverage"] = r.coverage ? Number(*r.coverage) : Json(nullptr);
  j["iterations"] = r.iterations;
  j["failures"] = r.failures;
  return j;
}

Json EvalReportToJson(const EvalReport& report) {
  Json j;
  j["config"] = EvalConfigToJson(report.config);
  Json methods = Json::array();
  for (const auto& m : report.methods) methods.push_back(MethodReportToJson(m));
  j["methods"] = std::move(methods);
  return j;
}

void WriteEstimatesCsv(const EvalReport& report, std::ostream& out) {
  out << "iter,design,estimator,estimate\n";
  for (const MethodReport& m : report.methods) {
    const std::string name = EstimatorName(m.estimator);
    for (size_t i = 0; i < m.estimates.size(); ++i) {
      out << m.iters[i] << ',' << m.design << ',' << name << ','
          << FormatDouble(m.estimates[i]) << '\n';
    }
  }
}

Json ConfidenceIntervalToJson(const ConfidenceInterval& ci) {
  Json j;
  j["method"] = CiMethodName(ci.method);
  j["level"] = ci.level;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["point"] = ci.point;
  j["std_error"] = ci.std_error;
  return j;
}

Json PermutationTestToJson(const PermutationTestResult& r) {
  Json j;
  j["method"] = "permutation";
  j["theta_star"] = r.theta_star;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["num_draws"] = r.num_draws;
  j["evaluated"] = r.evaluated;
  j["extreme"] = r.extreme;
  j["exhaustive"] = r.exhaustive;
  return j;
}

void WriteObservedCsv(const std::vector<std::string>& ids,
                      const ObservedOutcomes& o, std::ostream& out) {
  out << "geo,group,response,spend,baseline_spend\n";
  for (size_t g = 0; g < o.num_geos(); ++g) {
    const char* group = o.group[g] == Group::kTreated   ? "treated"
                        : o.group[g] == Group::kControl ? "control"
                                                        : "excluded";
    out << ids[g] << ',' << group << ',' << FormatDouble(o.response[g]) << ','
        << FormatDouble(o.spend[g]) << ',' << FormatDouble(o.baseline_spend[g])
        << '\n';
  }
}

ObservedTable ParseObservedCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kBadHeader, "empty input");
  const auto header = SplitCsvLine(line);
  const std::vector<std::string> expected = {"geo", "group", "response",
                                             "spend", "baseline_spend"};
  if (header != expected) {
    throw Error(ErrorCode::kBadHeader,
                "expected header geo,group,response,spend,baseline_spend");
  }
  struct Row {
    std::string id;
    Group group;
    double response, spend, baseline;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 5 || f[0].empty()) {
      throw Error(ErrorCode::kMissingValue,
                  "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    Row r;
    r.id = f[0];
    if (f[1] == "treated") r.group = Group::kTreated;
    else if (f[1] == "control") r.group = Group::kControl;
    else if (f[1] == "excluded") r.group = Group::kExcluded;
    else {
      throw Error(ErrorCode::kBadValue,
                  "line " + std::to_string(line_no) + ": unknown group '" +
                      f[1] + "'");
    }
    r.response = ParseDouble(f[2], line_no);
    r.spend = ParseDouble(f[3], line_no);
    r.baseline = ParseDouble(f[4], line_no);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.id < b.id; });
  ObservedTable table;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].id == rows[i - 1].id) {
      throw Error(ErrorCode::kDuplicateGeoPeriod, "geo " + rows[i].id + " twice");
    }
    table.ids.push_back(rows[i].id);
    table.outcomes.group.push_back(rows[i].group);
    table.outcomes.response.push_back(rows[i].response);
    table.outcomes.spend.push_back(rows[i].spend);
    table.outcomes.baseline_spend.push_back(rows[i].baseline);
  }
  return table;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadValue, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace supergeo
