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
#include "cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "supergeo/design_search.h"
#include "supergeo/effects.h"
#include "supergeo/error.h"
#include "supergeo/eval_harness.h"
#include "supergeo/experiment.h"
#include "supergeo/geo_data.h"
#include "supergeo/inference.h"
#include "supergeo/instance_gen.h"
#include "supergeo/io.h"

namespace supergeo::cli {
namespace {

namespace fs = std::filesystem;

struct DesignArgs {
  std::string input;
  int pretest_len = 0;
  std::string output = "design.json";
  std::string strategy = "exhaustive";
  int min_size = 2;
  int max_size = 4;
  int min_pairs = 1;
  double time_limit = 3.0 * 3600.0;
  int64_t node_limit = 0;
  uint64_t seed = 0;
  int starts = 1;
  int partitions = 1;
  int beta = 0;
  double alpha = 1.0;
  bool baseline = false;
  std::string manifest;
};

struct EvaluateArgs {
  std::string input;
  int pretest_len = 0;
  std::vector<std::string> designs;
  std::string effect = "homogeneous";
  double theta0 = 1.0;
  double c = 0.2;
  double noise_halfwidth = 0.25;
  std::optional<double> budget;
  int iterations = 2000;
  bool exhaustive = false;
  std::vector<std::string> estimators = {"empirical", "trimmed"};
  double trim_fraction = 0.25;
  double ci_level = 0.8;
  std::optional<double> adversary_eta;
  uint64_t seed = 0;
  int jobs = 1;
  std::string output = "report.json";
  std::string estimates;
  std::string observed_output;
  std::string manifest;
};

struct InferArgs {
  std::string design;
  std::string observed;
  std::string method = "t";
  double level = 0.8;
  double trim_fraction = 0.0;
  double theta_star = 0.0;
  int64_t draws = 999;
  uint64_t seed = 0;
  std::string output = "inference.json";
  std::string manifest;
};

struct GenerateArgs {
  std::string kind = "synth";
  int geos = 40;
  double noise = 0.1;
  int m = 3;
  int64_t bound = 20;
  bool perturb = false;
  uint64_t seed = 0;
  std::string output;
  std::string panel_output;
  std::string manifest;
};

// Records what a run read and wrote; written next to the primary output.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["args"] = args;
    doc_["version"] = kVersion;
  }
  void Config(Json config, uint64_t seed) {
    doc_["config"] = std::move(config);
    doc_["seed"] = seed;
  }
  void Input(const std::string& path) { inputs_[path] = Sha256File(path); }
  void Output(const std::string& path) { outputs_[path] = Sha256File(path); }
  void Write(const std::string& path) {
    doc_["inputs"] = inputs_;
    doc_["outputs"] = outputs_;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start_;
    doc_["runtime_seconds"] = elapsed.count();
    WriteJsonFile(doc_, path);
  }

 private:
  std::chrono::steady_clock::time_point start_;
  Json doc_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

std::string ManifestPath(const std::string& explicit_path,
                         const std::string& output) {
  return explicit_path.empty() ? output + ".manifest.json" : explicit_path;
}

std::string SiblingPath(const std::string& path, const std::string& suffix) {
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kOddCount:
    case ErrorCode::kAllFailed:
    case ErrorCode::kInfeasibleBound:
    case ErrorCode::kEmptyAcceptanceRegion:
      return kExitInfeasible;
    case ErrorCode::kTimeoutNoIncumbent:
      return kExitTimeout;
    case ErrorCode::kIo:
      return kExitFailure;
    case ErrorCode::kMissingValue:
    case ErrorCode::kNegativeValue:
    case ErrorCode::kDuplicateGeoPeriod:
    case ErrorCode::kBadHeader:
    case ErrorCode::kBadValue:
    case ErrorCode::kSubsetTooLarge:
    case ErrorCode::kSubsetTooSmall:
    case ErrorCode::kUnknownGeo:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kPoolTooLarge:
    case ErrorCode::kPartitionTooSmall:
    case ErrorCode::kTooLarge:
    case ErrorCode::kTooFewPairs:
    case ErrorCode::kZeroMeanZ:
    case ErrorCode::kZeroWeights:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
}

int RunDesign(const DesignArgs& a, const std::vector<std::string>& argv,
              std::ostream& out) {
  Manifest manifest("design", argv);
  DesignConfig cfg;
  cfg.strategy = ParseStrategy(a.strategy);
  cfg.min_size = a.min_size;
  cfg.max_size = a.max_size;
  cfg.min_pairs = a.min_pairs;
  cfg.time_limit_seconds = a.time_limit;
  cfg.node_limit = a.node_limit;
  cfg.seed = a.seed;
  cfg.heuristic.num_partitions = a.partitions;
  cfg.heuristic.beta = a.beta;
  cfg.heuristic.alpha = a.alpha;
  cfg.Validate();
  if (a.starts < 1) throw Error(ErrorCode::kInvalidConfig, "--starts must be >= 1");

  LoadOptions load;
  load.pretest_len = a.pretest_len;
  load.allow_empty_test = true;
  const GeoPanel panel = LoadPanel(a.input, load);
  manifest.Input(a.input);
  const auto aggs = Aggregates(panel);
  const std::vector<double> z = PretestResponses(aggs);

  SupergeoDesign design;
  if (a.starts == 1) {
    design = SolvePartition(BuildPool(z, cfg), z, cfg);
  } else {
    std::vector<DesignConfig> configs(a.starts, cfg);
    for (int i = 0; i < a.starts; ++i) configs[i].seed = cfg.seed + i;
    design = MultiStartSearch(z, configs, a.starts).design;
  }

  Json config = DesignConfigToJson(cfg);
  config["starts"] = a.starts;
  config["pretest_len"] = panel.pretest_len();
  manifest.Config(config, cfg.seed);
  Json doc = DesignToJson(design, panel.geos(), cfg);
  doc["config"] = config;
  WriteJsonFile(doc, a.output);
  manifest.Output(a.output);
  out << "loss " << FormatDouble(design.loss) << "\n";
  out << "pairs " << design.num_pairs() << "\n";
  out << "optimal " << (design.optimal ? "true" : "false") << "\n";

  if (a.baseline) {
    const SupergeoDesign base = MatchedPairsBaseline(z);
    const std::string path = SiblingPath(a.output, ".baseline.json");
    WriteJsonFile(DesignToJson(base, panel.geos(), std::nullopt), path);
    manifest.Output(path);
    out << "baseline_loss " << FormatDouble(base.loss) << "\n";
  }
  manifest.Write(ManifestPath(a.manifest, a.output));
  return kExitOk;
}

int RunEvaluate(const EvaluateArgs& a, const std::vector<std::string>& argv,
                std::ostream& out) {
  Manifest manifest("evaluate", argv);
  LoadOptions load;
  load.pretest_len = a.pretest_len;
  const GeoPanel panel = LoadPanel(a.input, load);
  manifest.Input(a.input);
  const auto aggs = Aggregates(panel);
  const std::vector<double> z = PretestResponses(aggs);
  if (a.designs.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "at least one --design is required");
  }

  std::vector<NamedDesign> designs;
  for (const std::string& path : a.designs) {
    NamedDesign named;
    named.name = fs::path(path).stem().string();
    for (const auto& d : designs) {
      if (d.name == named.name) named.name += "_" + std::to_string(designs.size());
    }
    named.design = DesignFromJson(ReadJsonFile(path), panel.geos(), z);
    manifest.Input(path);
    designs.push_back(std::move(named));
  }

  EvalConfig cfg;
  cfg.iterations = a.iterations;
  cfg.exhaustive = a.exhaustive;
  cfg.effects.kind = ParseEffectKind(a.effect);
  cfg.effects.theta0 = a.theta0;
  cfg.effects.c = a.c;
  cfg.effects.noise_halfwidth = a.noise_halfwidth;
  cfg.effects.seed = a.seed;
  if (a.budget) {
    cfg.budget = *a.budget;
  } else {
    double total = 0.0;
    for (const auto& g : aggs) total += g.initial_spend;
    cfg.budget = total;
  }
  cfg.estimators.clear();
  for (const std::string& e : a.estimators) {
    if (e == "empirical") cfg.estimators.push_back(EstimatorKind::kEmpirical);
    else if (e == "trimmed" || e == "trimmed_match") {
      cfg.estimators.push_back(EstimatorKind::kTrimmedMatch);
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown estimator '" + e + "'");
    }
  }
  cfg.max_trim_fraction = a.trim_fraction;
  if (a.ci_level > 0.0) cfg.ci_level = a.ci_level;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  cfg.Validate();

  const EvalReport report = RunEval(aggs, designs, cfg);
  Json doc = EvalReportToJson(report);
  if (a.adversary_eta) {
    EvalConfig adv_cfg = cfg;
    adv_cfg.adversary = AdversaryConfig{*a.adversary_eta};
    adv_cfg.Validate();
    const EvalReport adv = RunEval(aggs, designs, adv_cfg);
    const std::vector<double> z_test = TestResponses(aggs);
    Json block;
    block["eta"] = *a.adversary_eta;
    Json closed = Json::array();
    for (const auto& d : designs) {
      closed.push_back(
          {{"design", d.name},
           {"worst_case_variance",
            AdversarialWorstCaseVariance(d.design, z_test, *a.adversary_eta,
                                         cfg.budget)}});
    }
    block["closed_form"] = std::move(closed);
    Json methods = Json::array();
    for (const auto& m : adv.methods) methods.push_back(MethodReportToJson(m));
    block["methods"] = std::move(methods);
    doc["adversarial"] = std::move(block);
  }
  manifest.Config(doc["config"], cfg.seed);
  WriteJsonFile(doc, a.output);
  manifest.Output(a.output);

  const std::string estimates =
      a.estimates.empty() ? SiblingPath(a.output, ".estimates.csv") : a.estimates;
  std::ostringstream csv;
  WriteEstimatesCsv(report, csv);
  WriteText(estimates, csv.str());
  manifest.Output(estimates);

  if (!a.observed_output.empty()) {
    const SupergeoDesign& first = designs.front().design;
    const Assignment assignment = DrawAssignment(first, cfg.seed, 0);
    const SpendPlan plan = PlanSpend(assignment, aggs, {cfg.budget, true});
    const auto theta_g = MakeEffects(cfg.effects, aggs);
    const ObservedOutcomes obs = InjectEffects(aggs, assignment, plan, theta_g);
    std::ostringstream os;
    WriteObservedCsv(panel.geos(), obs, os);
    WriteText(a.observed_output, os.str());
    manifest.Output(a.observed_output);
  }

  auto cell = [](double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
  };
  out << std::left << std::setw(16) << "design" << std::setw(15) << "estimator"
      << std::setw(13) << "rmse" << std::setw(13) << "abs_bias"
      << "coverage\n";
  for (const MethodReport& m : report.methods) {
    out << std::setw(16) << m.design << std::setw(15)
        << EstimatorName(m.estimator) << std::setw(13) << cell(m.rmse)
        << std::setw(13) << cell(m.abs_bias)
        << (m.coverage ? cell(*m.coverage) : std::string("-"));
    if (m.failures > 0) out << "  (" << m.failures << " failed)";
    out << "\n";
  }
  manifest.Write(ManifestPath(a.manifest, a.output));
  return kExitOk;
}

int RunInfer(const InferArgs& a, const std::vector<std::string>& argv,
             std::ostream& out) {
  Manifest manifest("infer", argv);
  std::ifstream obs_in(a.observed);
  if (!obs_in) throw Error(ErrorCode::kIo, "cannot open " + a.observed);
  const ObservedTable table = ParseObservedCsv(obs_in);
  manifest.Input(a.observed);
  const SupergeoDesign design = DesignFromJson(
      ReadJsonFile(a.design), table.ids, table.outcomes.response);
  manifest.Input(a.design);

  Json doc;
  Json config = {{"method", a.method},   {"level", a.level},
                 {"trim_fraction", a.trim_fraction},
                 {"theta_star", a.theta_star}, {"draws", a.draws},
                 {"seed", a.seed}};
  if (a.method == "t") {
    const Assignment assignment = AssignmentFromObserved(design, table.outcomes);
    const auto diffs = PairDiffs(table.outcomes, design, assignment);
    std::vector<int> trimmed;
    if (a.trim_fraction > 0.0) {
      const TrimmedMatchResult tm = TrimmedMatch(diffs, a.trim_fraction);
      trimmed = tm.trimmed;
      doc["q_star"] = tm.q_star;
      doc["trimmed_pairs"] = tm.trimmed;
      doc["converged"] = tm.converged;
    }
    const ConfidenceInterval ci = CiTApprox(diffs, a.level, trimmed);
    doc["interval"] = ConfidenceIntervalToJson(ci);
    out << "theta_hat " << FormatDouble(ci.point) << "\n"
        << "ci [" << FormatDouble(ci.lower) << ", " << FormatDouble(ci.upper)
        << "]\n";
  } else if (a.method == "perm") {
    const PermutationTestResult r =
        PermutationTest(design, table.outcomes, a.theta_star, a.draws, a.seed);
    doc["test"] = PermutationTestToJson(r);
    out << "p_value " << FormatDouble(r.p_value) << "\n";
  } else if (a.method == "perm-ci") {
    const ConfidenceInterval ci =
        InvertPermutationCi(design, table.outcomes, a.level, a.draws, a.seed);
    doc["interval"] = ConfidenceIntervalToJson(ci);
    out << "ci [" << FormatDouble(ci.lower) << ", " << FormatDouble(ci.upper)
        << "]\n";
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "--method must be t, perm or perm-ci");
  }
  doc["config"] = config;
  manifest.Config(config, a.seed);
  WriteJsonFile(doc, a.output);
  manifest.Output(a.output);
  manifest.Write(ManifestPath(a.manifest, a.output));
  return kExitOk;
}

int RunGenerate(const GenerateArgs& a, const std::vector<std::string>& argv,
                std::ostream& out) {
  Manifest manifest("generate", argv);
  if (a.kind == "synth") {
    const std::string output = a.output.empty() ? "panel.csv" : a.output;
    const GeoPanel panel = SynthPanel(a.geos, a.seed, a.noise);
    WritePanel(panel, output);
    manifest.Config({{"kind", a.kind}, {"geos", a.geos}, {"noise", a.noise},
                     {"seed", a.seed}},
                    a.seed);
    manifest.Output(output);
    out << "wrote " << output << " (" << panel.num_geos() << " geos)\n";
    manifest.Write(ManifestPath(a.manifest, output));
    return kExitOk;
  }
  if (a.kind == "n3dm") {
    const std::string output = a.output.empty() ? "instance.json" : a.output;
    N3dmInstance inst = PlantN3dm(a.m, a.bound, a.seed);
    if (a.perturb) inst = PerturbToNoInstance(inst);
    const ReducedInstance reduced = ReduceN3dm(inst);
    Json doc = InstanceToJson(inst);
    WriteJsonFile(doc, output);
    const std::string panel_path = a.panel_output.empty()
                                       ? SiblingPath(output, ".panel.csv")
                                       : a.panel_output;
    WritePanel(ReducedPanel(reduced), panel_path);
    manifest.Config({{"kind", a.kind}, {"m", a.m}, {"bound", a.bound},
                     {"perturb", a.perturb}, {"seed", a.seed},
                     {"big_m", reduced.big_m}},
                    a.seed);
    manifest.Output(output);
    manifest.Output(panel_path);
    out << "wrote " << output << " and " << panel_path << " (M = "
        << reduced.big_m << ")\n";
    manifest.Write(ManifestPath(a.manifest, output));
    return kExitOk;
  }
  throw Error(ErrorCode::kInvalidConfig, "--kind must be synth or n3dm");
}

}  // namespace

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Supergeo experimental design", "supergeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  DesignArgs d;
  auto* design = app.add_subcommand("design", "Search a supergeo design");
  design->add_option("--input", d.input, "Panel CSV")->required();
  design->add_option("--pretest-len", d.pretest_len,
                     "Pretest periods (0: first half)");
  design->add_option("--output", d.output, "Design JSON")->capture_default_str();
  design->add_option("--strategy", d.strategy,
                     "exhaustive | partition | pergeo")->capture_default_str();
  design->add_option("--min-size", d.min_size, "Smallest supergeo pair")
      ->capture_default_str();
  design->add_option("--max-size", d.max_size, "Largest supergeo pair")
      ->capture_default_str();
  design->add_option("--min-pairs", d.min_pairs, "Minimum number of pairs")
      ->capture_default_str();
  design->add_option("--time-limit", d.time_limit, "Search time limit (s)")
      ->capture_default_str();
  design->add_option("--node-limit", d.node_limit,
                     "Search node limit (0: none)")->capture_default_str();
  design->add_option("--seed", d.seed, "Random seed")->capture_default_str();
  design->add_option("--starts", d.starts, "Concurrent searches")
      ->capture_default_str();
  design->add_option("--partitions", d.partitions,
                     "Partition heuristic: number of partitions")
      ->capture_default_str();
  design->add_option("--beta", d.beta, "Per-geo heuristic: largest geos")
      ->capture_default_str();
  design->add_option("--alpha", d.alpha,
                     "Per-geo heuristic: retained fraction")
      ->capture_default_str();
  design->add_flag("--baseline", d.baseline,
                   "Also write the matched-pairs design");
  design->add_option("--manifest", d.manifest, "Manifest path");

  EvaluateArgs e;
  auto* evaluate = app.add_subcommand("evaluate", "Half-synthetic evaluation");
  evaluate->add_option("--input", e.input, "Panel CSV")->required();
  evaluate->add_option("--pretest-len", e.pretest_len,
                       "Pretest periods (0: first half)");
  evaluate->add_option("--design", e.designs, "Design JSON (repeatable)")
      ->required();
  evaluate->add_option("--effect", e.effect,
                       "homogeneous | proportional | uniform")
      ->capture_default_str();
  evaluate->add_option("--theta0", e.theta0, "Base iROAS")->capture_default_str();
  evaluate->add_option("--c", e.c, "Proportional effect coefficient")
      ->capture_default_str();
  evaluate->add_option("--noise-halfwidth", e.noise_halfwidth,
                       "Uniform effect half-width")->capture_default_str();
  evaluate->add_option("--budget", e.budget,
                       "Budget (default: total test spend)");
  evaluate->add_option("--iterations", e.iterations, "Assignments to draw")
      ->capture_default_str();
  evaluate->add_flag("--exhaustive", e.exhaustive,
                     "Enumerate all 2^K assignments");
  evaluate->add_option("--estimators", e.estimators,
                       "empirical and/or trimmed")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--trim-fraction", e.trim_fraction,
                       "Trimmed match: maximum trimmed fraction")
      ->capture_default_str();
  evaluate->add_option("--ci-level", e.ci_level,
                       "t-interval level for coverage (0: off)")
      ->capture_default_str();
  evaluate->add_option("--adversary-eta", e.adversary_eta,
                       "Also run the worst-case perturbation");
  evaluate->add_option("--seed", e.seed, "Random seed")->capture_default_str();
  evaluate->add_option("--jobs", e.jobs, "Worker threads")->capture_default_str();
  evaluate->add_option("--output", e.output, "Report JSON")->capture_default_str();
  evaluate->add_option("--estimates", e.estimates,
                       "Estimates CSV (default: <output>.estimates.csv)");
  evaluate->add_option("--observed-output", e.observed_output,
                       "Write the observed outcomes of draw 0 (first design)");
  evaluate->add_option("--manifest", e.manifest, "Manifest path");

  InferArgs i;
  auto* infer = app.add_subcommand("infer", "Confidence intervals and tests");
  infer->add_option("--design", i.design, "Design JSON")->required();
  infer->add_option("--observed", i.observed, "Observed outcomes CSV")
      ->required();
  infer->add_option("--method", i.method, "t | perm | perm-ci")
      ->capture_default_str();
  infer->add_option("--level", i.level, "Confidence level")->capture_default_str();
  infer->add_option("--trim-fraction", i.trim_fraction,
                    "t method: trim with trimmed match first")
      ->capture_default_str();
  infer->add_option("--theta-star", i.theta_star, "Null iROAS")
      ->capture_default_str();
  infer->add_option("--draws", i.draws, "Permutation draws")
      ->capture_default_str();
  infer->add_option("--seed", i.seed, "Random seed")->capture_default_str();
  infer->add_option("--output", i.output, "Result JSON")->capture_default_str();
  infer->add_option("--manifest", i.manifest, "Manifest path");

  GenerateArgs g;
  auto* generate = app.add_subcommand("generate", "Synthetic inputs");
  generate->add_option("--kind", g.kind, "synth | n3dm")->capture_default_str();
  generate->add_option("--geos", g.geos, "synth: number of geos")
      ->capture_default_str();
  generate->add_option("--noise", g.noise, "synth: daily noise level")
      ->capture_default_str();
  generate->add_option("--m", g.m, "n3dm: triples")->capture_default_str();
  generate->add_option("--bound", g.bound, "n3dm: target sum")
      ->capture_default_str();
  generate->add_flag("--perturb", g.perturb,
                     "n3dm: bump one size to make a no-instance");
  generate->add_option("--seed", g.seed, "Random seed")->capture_default_str();
  generate->add_option("--output", g.output,
                       "Panel CSV (synth) or instance JSON (n3dm)");
  generate->add_option("--panel-output", g.panel_output,
                       "n3dm: reduced panel CSV");
  generate->add_option("--manifest", g.manifest, "Manifest path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << ex.what() << "\n";
    return kExitConfig;
  }

  try {
    if (design->parsed()) return RunDesign(d, args, out);
    if (evaluate->parsed()) return RunEvaluate(e, args, out);
    if (infer->parsed()) return RunInfer(i, args, out);
    if (generate->parsed()) return RunGenerate(g, args, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return ExitCodeFor(ex.code());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace supergeo::cli
