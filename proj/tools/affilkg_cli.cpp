#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affilkg/analysis.hpp"
#include "affilkg/error.hpp"
#include "affilkg/error_models.hpp"
#include "affilkg/experiment.hpp"
#include "affilkg/generate.hpp"
#include "affilkg/io.hpp"
#include "affilkg/kernels.hpp"
#include "affilkg/log.hpp"
#include "affilkg/metrics.hpp"
#include "affilkg/projections.hpp"
#include "affilkg/tuple_eval.hpp"

namespace {

using namespace affilkg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string log_level = "info";
};

struct NormFlags {
  std::string abbrev;
  bool strict_titles = false;

  NormalizationConfig config() const {
    NormalizationConfig cfg = NormalizationConfig::defaults();
    if (!abbrev.empty()) load_abbreviations(abbrev, cfg);
    cfg.strict_titles = strict_titles;
    cfg.validate();
    return cfg;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--abbrev", abbrev, "JSON object of abbreviation -> expansion")->check(CLI::ExistingFile);
    cmd->add_flag("--strict-titles", strict_titles, "Treat a title present on one side only as a mismatch");
  }
};

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, const NormFlags& norm,
                 bool exact, bool member_only, std::size_t fp_sample, const Common& common,
                 const std::string& out) {
  EvalOptions opt;
  opt.normalization = exact ? NormalizationConfig::exact() : norm.config();
  opt.exact_only = exact;
  opt.require_member_relation = member_only;
  const auto pred = parse_tuple_file(pred_path);
  const auto truth = parse_tuple_file(truth_path);
  const EvalReport report = evaluate_tuples(pred, truth, opt);

  json j = to_json(report);
  const AffiliationGraph pred_graph = build_graph(pred, opt.normalization);
  const AffiliationGraph truth_graph = build_graph(truth, opt.normalization);
  j["node_overestimation_pct"] = overestimation_pct(truth_graph, pred_graph, CountKind::Nodes);
  j["edge_overestimation_pct"] = overestimation_pct(truth_graph, pred_graph, CountKind::Edges);
  if (fp_sample > 0) {
    json sample = json::array();
    for (const EdgeTuple& t : sample_false_positives(report, pred, fp_sample, common.seed.value_or(0))) {
      sample.push_back(to_json(t));
    }
    j["false_positive_sample"] = std::move(sample);
  }
  emit(out, dump(j));
  return kExitOk;
}

int cmd_metrics(const std::string& graph_path, const std::string& truth_path, const NormFlags& norm,
                const std::vector<std::string>& selection, const std::string& density,
                const std::string& out) {
  const NormalizationConfig cfg = norm.config();
  const AffiliationGraph g = load_graph(graph_path, cfg);
  std::optional<AffiliationGraph> truth;
  if (!truth_path.empty()) truth = load_graph(truth_path, cfg);
  SuiteOptions opt = options_for(selection);
  opt.density = density_convention_from_string(density);
  const MetricSuite suite = compute_suite(g, truth ? &*truth : nullptr, opt);
  json j = to_json(suite);
  if (!selection.empty()) {
    json filtered = json::object();
    for (const auto& name : selection) filtered[name] = j.at(name);
    j = std::move(filtered);
  }
  emit(out, dump(j));
  return kExitOk;
}

int cmd_project(const std::string& graph_path, const std::string& onto, const NormFlags& norm,
                const std::string& out) {
  const AffiliationGraph g = load_graph(graph_path, norm.config());
  emit(out, dump(to_json(project(g, partition_from_string(onto)))));
  return kExitOk;
}

int cmd_simulate(const std::string& graph_path, const std::string& model, double precision, double recall,
                 const Common& common, const NormFlags& norm, const std::string& out,
                 const std::string& metrics_out, const std::string& meta_out) {
  const AffiliationGraph g = load_graph(graph_path, norm.config());
  const PerturbationSpec spec{error_model_from_string(model), precision, recall, common.seed.value_or(0)};
  const Perturbation p = perturb(g, spec);
  emit(out, dump(to_json(p.graph)));
  if (p.report.reconciliation_deletions > 0) {
    log::warn("budget_reconciliation_deletions", {{"count", p.report.reconciliation_deletions}});
  }
  if (!metrics_out.empty()) write_text(metrics_out, dump(to_json(compute_suite(p.graph, &g))));
  json meta = to_json(p.report);
  meta["run_id"] = run_id(spec);
  if (meta_out.empty()) {
    log::info("simulate_done", meta);
  } else {
    write_text(meta_out, dump(meta));
  }
  return kExitOk;
}

int cmd_bias(const std::string& records_path, const std::string& out, const std::string& format) {
  const auto records = read_bias_records(records_path);
  const BiasTable table = aggregate(records);
  if (table.skipped_records > 0) log::warn("records_without_relative_error", {{"count", table.skipped_records}});
  bool as_json = format == "json";
  if (format.empty()) as_json = std::filesystem::path(out).extension() == ".json";
  emit(out, as_json ? dump(to_json(table)) : to_csv(table));
  return kExitOk;
}

struct ExperimentFlags {
  std::string config;
  std::string truth;
  std::string out_dir;
  std::string f1_source;
  std::string isolated;
  std::string density;
  std::vector<std::string> metrics;
};

int cmd_experiment(const ExperimentFlags& flags, const Common& common, const NormFlags& norm) {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(read_text(flags.config)));
  json overrides = cfg.to_json();
  if (!flags.truth.empty()) overrides["truth"] = flags.truth;
  if (!flags.out_dir.empty()) overrides["output_dir"] = flags.out_dir;
  if (!flags.f1_source.empty()) overrides["f1_source"] = flags.f1_source;
  if (!flags.isolated.empty()) overrides["isolated_nodes"] = flags.isolated;
  if (!flags.density.empty()) overrides["density_convention"] = flags.density;
  if (!flags.metrics.empty()) overrides["metrics"] = flags.metrics;
  if (common.jobs) overrides["jobs"] = *common.jobs;
  if (common.seed) {
    for (auto& r : overrides["runs"]) r["base_seed"] = *common.seed;
  }
  cfg = ExperimentConfig::from_json(overrides);
  if (cfg.truth_path.empty()) throw Error(ErrorCode::InvalidArgument, "experiment needs a truth graph");
  const ExperimentResult result = run_experiment_to_dir(cfg, norm.config());
  return result.failed_runs() == result.runs.size() ? kExitFailed : kExitOk;
}

int cmd_generate(const GeneratorConfig& gen, const std::string& out) {
  emit(out, dump(to_json(generate_affiliation_graph(gen))));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate extracted affiliation graphs and simulate extraction errors"};
  app.set_version_flag("--version", "affilkg 0.3.0");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Seed for every random choice");
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--log-level", common.log_level, "debug, info, warn, error or off");

  NormFlags norm;
  std::string out;
  std::function<int()> action;

  auto* evaluate = app.add_subcommand("evaluate", "Score predicted tuples against ground truth");
  std::string pred_path, truth_path;
  bool exact = false, member_only = false;
  std::size_t fp_sample = 0;
  evaluate->add_option("--pred", pred_path, "Predicted tuples (.csv/.jsonl)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", truth_path, "Ground-truth tuples (.csv/.jsonl)")->required()->check(CLI::ExistingFile);
  evaluate->add_flag("--exact", exact, "Exact matching only, no normalization rules");
  evaluate->add_flag("--member-only", member_only, "Only tuples with relation 'member' can match");
  evaluate->add_option("--fp-sample", fp_sample, "Include N randomly chosen false positives");
  evaluate->add_option("--out", out, "Output JSON (default stdout)");
  norm.attach(evaluate);
  evaluate->callback([&] {
    action = [&] { return cmd_evaluate(pred_path, truth_path, norm, exact, member_only, fp_sample, common, out); };
  });

  auto* metrics = app.add_subcommand("metrics", "Compute the downstream metric suite of a graph");
  std::string graph_path, metrics_truth, density = "standard";
  std::vector<std::string> selection;
  metrics->add_option("--graph", graph_path, "Graph JSON or tuple file")->required()->check(CLI::ExistingFile);
  metrics->add_option("--truth", metrics_truth, "Ground truth, enables RMAE of club degrees")->check(CLI::ExistingFile);
  metrics->add_option("--metrics", selection, "Only these metrics");
  metrics->add_option("--density-convention", density, "standard or ordered-pairs");
  metrics->add_option("--out", out, "Output JSON (default stdout)");
  norm.attach(metrics);
  metrics->callback([&] {
    action = [&] { return cmd_metrics(graph_path, metrics_truth, norm, selection, density, out); };
  });

  auto* proj = app.add_subcommand("project", "One-mode projection of a graph");
  std::string onto;
  proj->add_option("--graph", graph_path, "Graph JSON or tuple file")->required()->check(CLI::ExistingFile);
  proj->add_option("--onto", onto, "indiv or club")->required()->check(CLI::IsMember({"indiv", "club"}));
  proj->add_option("--out", out, "Output JSON (default stdout)");
  norm.attach(proj);
  proj->callback([&] { action = [&] { return cmd_project(graph_path, onto, norm, out); }; });

  auto* simulate = app.add_subcommand("simulate", "Perturb a graph with one error model");
  std::string model, metrics_out, meta_out;
  double precision = 1.0, recall = 1.0;
  simulate->add_option("--graph", graph_path, "Graph JSON or tuple file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--model", model, "random, pref, node-add or node-split")
      ->required()
      ->check(CLI::IsMember({"random", "pref", "node-add", "node-split"}));
  simulate->add_option("--precision", precision, "Target precision in (0, 1]")->required();
  simulate->add_option("--recall", recall, "Target recall in (0, 1]")->required();
  simulate->add_option("--out", out, "Perturbed graph JSON (default stdout)");
  simulate->add_option("--metrics-out", metrics_out, "Metric suite of the perturbed graph");
  simulate->add_option("--meta-out", meta_out, "Run metadata JSON (default: logged)");
  norm.attach(simulate);
  simulate->callback([&] {
    action = [&] {
      return cmd_simulate(graph_path, model, precision, recall, common, norm, out, metrics_out, meta_out);
    };
  });

  auto* bias = app.add_subcommand("bias", "Aggregate bias records into a table");
  std::string records_path, format;
  bias->add_option("--records", records_path, "Bias records, one JSON object per line")
      ->required()
      ->check(CLI::ExistingFile);
  bias->add_option("--out", out, "Output .csv or .json (default CSV on stdout)");
  bias->add_option("--format", format, "csv or json, overriding the extension")->check(CLI::IsMember({"csv", "json"}));
  bias->callback([&] { action = [&] { return cmd_bias(records_path, out, format); }; });

  auto* experiment = app.add_subcommand("experiment", "Run a batch of perturbations and aggregate bias");
  ExperimentFlags ex;
  experiment->add_option("--config", ex.config, "Experiment config or manifest JSON")->required()->check(CLI::ExistingFile);
  experiment->add_option("--truth", ex.truth, "Override the truth graph")->check(CLI::ExistingFile);
  experiment->add_option("--out-dir", ex.out_dir, "Override the output directory");
  experiment->add_option("--f1-source", ex.f1_source, "target or measured")->check(CLI::IsMember({"target", "measured"}));
  experiment->add_option("--isolated-nodes", ex.isolated, "prune or retain")->check(CLI::IsMember({"prune", "retain"}));
  experiment->add_option("--density-convention", ex.density, "standard or ordered-pairs")
      ->check(CLI::IsMember({"standard", "ordered-pairs"}));
  experiment->add_option("--metrics", ex.metrics, "Only these metrics");
  norm.attach(experiment);
  experiment->callback([&] { action = [&] { return cmd_experiment(ex, common, norm); }; });

  auto* generate = app.add_subcommand("generate", "Random affiliation graph with heavy-tailed club sizes");
  GeneratorConfig gen;
  generate->add_option("--indiv", gen.num_indiv, "Number of people")->check(CLI::PositiveNumber);
  generate->add_option("--clubs", gen.num_club, "Number of clubs")->check(CLI::PositiveNumber);
  generate->add_option("--zipf", gen.zipf_exponent, "Club popularity exponent");
  generate->add_option("--extra-memberships", gen.mean_extra_memberships, "Mean memberships beyond the first");
  generate->add_option("--out", out, "Output graph JSON (default stdout)");
  generate->callback([&] {
    action = [&] {
      gen.seed = common.seed.value_or(gen.seed);
      return cmd_generate(gen, out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    log::set_level(log::level_from_string(common.log_level));
    if (common.jobs) kernels::set_num_threads(static_cast<int>(*common.jobs));
    return action();
  } catch (const Error& e) {
    log::error("failed", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}});
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitFailed;
  } catch (const std::exception& e) {
    log::error("failed", {{"code", "Internal"}, {"message", e.what()}});
    return kExitFailed;
  }
}
