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
#ifndef SUPERGEO_IO_H_
#define SUPERGEO_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "supergeo/design_search.h"
#include "supergeo/eval_harness.h"
#include "supergeo/experiment.h"
#include "supergeo/inference.h"
#include "supergeo/instance_gen.h"
#include "supergeo/scoring.h"

namespace supergeo {

using Json = nlohmann::ordered_json;

Json DesignConfigToJson(const DesignConfig& cfg);

// {"pairs": [{"plus": [ids], "minus": [ids], "score": x}], "loss", "optimal",
//  "config", "seed"}
Json DesignToJson(const SupergeoDesign& design,
                  const std::vector<std::string>& ids,
                  const std::optional<DesignConfig>& cfg);

// Resolves ids against `ids` (sorted) and recomputes scores and loss on `z`.
SupergeoDesign DesignFromJson(const Json& doc,
                              const std::vector<std::string>& ids,
                              std::span<const double> z);

Json InstanceToJson(const N3dmInstance& instance);
N3dmInstance InstanceFromJson(const Json& doc);

// {"iter": m, "signs": [...], "theta_hat": x, "theta_hat_trim": y,
//  "q_star": q}
Json AssignmentRecord(int64_t iter, const Assignment& assignment,
                      double theta_hat, std::optional<TrimmedMatchResult> trim);

Json EvalConfigToJson(const EvalConfig& cfg);
Json MethodReportToJson(const MethodReport& report);
// Summary only; raw estimates go to the CSV.
Json EvalReportToJson(const EvalReport& report);
// iter,design,estimator,estimate
void WriteEstimatesCsv(const EvalReport& report, std::ostream& out);

Json ConfidenceIntervalToJson(const ConfidenceInterval& ci);
Json PermutationTestToJson(const PermutationTestResult& result);

struct ObservedTable {
  std::vector<std::string> ids;  // sorted
  ObservedOutcomes outcomes;
};

// geo,group,response,spend,baseline_spend with group in
// {treated, control, excluded}.
void WriteObservedCsv(const std::vector<std::string>& ids,
                      const ObservedOutcomes& outcomes, std::ostream& out);
ObservedTable ParseObservedCsv(std::istream& in);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const Json& doc, const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace supergeo

#endif  // SUPERGEO_IO_H_
