#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "affilkg/analysis.hpp"
#include "affilkg/error_models.hpp"
#include "affilkg/metrics.hpp"

namespace affilkg {

enum class F1Source { Target, Measured };
enum class IsolatedPolicy { Prune, Retain };

struct RunGroup {
  ErrorModel model = ErrorModel::RandomEdge;
  double precision = 1.0;
  double recall = 1.0;
  std::size_t replicates = 1;
  std::uint64_t base_seed = 0;  // replicate r uses seed base_seed + r
};

struct ExperimentConfig {
  std::string truth_path;
  std::string graph_id;  // defaults to the truth file stem
  std::vector<RunGroup> runs;
  std::vector<std::string> metrics;  // empty selects every metric
  std::string output_dir;
  F1Source f1_source = F1Source::Target;
  // Prune drops zero-degree nodes from truth and perturbed graphs before
  // metrics are computed; Retain measures the node sets as they are.
  IsolatedPolicy isolated = IsolatedPolicy::Prune;
  DensityConvention density = DensityConvention::Standard;
  std::size_t jobs = 1;

  // Throws InvalidArgument: no runs, replicates == 0, bad rates, unknown
  // metric names, duplicate run ids.
  void validate() const;

  // Accepts a config object or a manifest (whose "config" member is used).
  // Besides "runs", a "grid" of {"models", "rates": [[P, R], ...],
  // "replicates", "base_seed"} expands to the full cross product.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// e.g. "random_p0.85_r0.85_s3"
std::string run_id(const PerturbationSpec& spec);

struct RunResult {
  std::string run_id;
  PerturbationSpec spec;
  std::size_t replicate = 0;
  bool ok = false;
  std::string error_code;
  std::string error_message;
  std::optional<AffiliationGraph> graph;  // perturbed graph as produced by the model
  PerturbationReport report;
  MetricSuite metrics;
  double f1 = 0.0;
  std::vector<BiasRecord> records;
};

struct ExperimentResult {
  MetricSuite truth_metrics;
  std::vector<RunResult> runs;  // sorted by run id
  BiasTable table;

  std::size_t failed_runs() const;
  std::vector<BiasRecord> records() const;  // in run order
};

// Runs every replicate against an in-memory truth graph. Up to cfg.jobs runs
// execute concurrently; output does not depend on the job count.
ExperimentResult run_experiment(const AffiliationGraph& truth, const ExperimentConfig& cfg);

// Loads cfg.truth_path, runs the experiment and writes under cfg.output_dir:
//   manifest.json, truth_metrics.json, records.jsonl, bias_table.csv,
//   bias_table.json, runs/<run id>/{graph,metrics,meta}.json
ExperimentResult run_experiment_to_dir(const ExperimentConfig& cfg, const NormalizationConfig& norm);

// Bias records of one perturbed suite against the truth suite.
std::vector<BiasRecord> compare_suites(const MetricSuite& truth, const MetricSuite& extracted,
                                       const std::vector<std::string>& selection, double f1,
                                       const std::string& graph_id, const std::string& run_id);

}  // namespace affilkg
