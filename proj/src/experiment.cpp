#include "affilkg/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "affilkg/error.hpp"
#include "affilkg/io.hpp"
#include "affilkg/log.hpp"
#include "affilkg/tuple_eval.hpp"

#ifdef AFFILKG_HAVE_OPENMP
#include <omp.h>
#endif

namespace affilkg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view f1_source_name(F1Source s) { return s == F1Source::Target ? "target" : "measured"; }
std::string_view isolated_name(IsolatedPolicy p) { return p == IsolatedPolicy::Prune ? "prune" : "retain"; }
std::string_view density_name(DensityConvention d) {
  return d == DensityConvention::Standard ? "standard" : "ordered-pairs";
}

F1Source f1_source_from_string(const std::string& s) {
  if (s == "target") return F1Source::Target;
  if (s == "measured") return F1Source::Measured;
  throw Error(ErrorCode::InvalidArgument, "f1_source must be target or measured, got '" + s + "'");
}

IsolatedPolicy isolated_from_string(const std::string& s) {
  if (s == "prune") return IsolatedPolicy::Prune;
  if (s == "retain") return IsolatedPolicy::Retain;
  throw Error(ErrorCode::InvalidArgument, "isolated_nodes must be prune or retain, got '" + s + "'");
}

struct PlannedRun {
  PerturbationSpec spec;
  std::size_t replicate;
  std::string id;
};

std::vector<PlannedRun> plan(const ExperimentConfig& cfg) {
  std::vector<PlannedRun> out;
  for (const RunGroup& g : cfg.runs) {
    for (std::size_t r = 0; r < g.replicates; ++r) {
      PerturbationSpec spec{g.model, g.precision, g.recall, g.base_seed + r};
      out.push_back({spec, r, run_id(spec)});
    }
  }
  std::sort(out.begin(), out.end(), [](const PlannedRun& a, const PlannedRun& b) { return a.id < b.id; });
  return out;
}

AffiliationGraph prepare(const AffiliationGraph& g, IsolatedPolicy policy) {
  return policy == IsolatedPolicy::Prune ? g.without_isolated() : g;
}

SuiteOptions suite_options(const ExperimentConfig& cfg) {
  SuiteOptions opt = options_for(cfg.metrics);
  opt.density = cfg.density;
  return opt;
}

void execute(RunResult& run, const AffiliationGraph& truth, const AffiliationGraph& prepared_truth,
             const MetricSuite& truth_suite, const ExperimentConfig& cfg, const std::string& graph_id) {
  try {
    Perturbation p = perturb(truth, run.spec);
    run.report = p.report;
    run.metrics = compute_suite(prepare(p.graph, cfg.isolated), &prepared_truth, suite_options(cfg));
    run.f1 = cfg.f1_source == F1Source::Target
                 ? f1_score(run.spec.precision, run.spec.recall)
                 : f1_score(p.report.achieved_precision, p.report.achieved_recall);
    run.records = compare_suites(truth_suite, run.metrics, cfg.metrics, run.f1, graph_id, run.run_id);
    run.graph = std::move(p.graph);
    run.ok = true;
  } catch (const Error& e) {
    run.error_code = std::string(to_string(e.code()));
    run.error_message = e.what();
  } catch (const std::exception& e) {
    run.error_code = "Internal";
    run.error_message = e.what();
  }
}

json run_entry(const RunResult& r) {
  json j = {{"run_id", r.run_id},
            {"model", std::string(to_string(r.spec.model))},
            {"precision", r.spec.precision},
            {"recall", r.spec.recall},
            {"seed", r.spec.seed},
            {"replicate", r.replicate},
            {"status", r.ok ? "ok" : "failed"}};
  if (r.ok) {
    j["f1"] = r.f1;
    j["bin"] = std::string(to_string(f1_bin(r.f1)));
    j["reconciliation_deletions"] = r.report.reconciliation_deletions;
    const std::string dir = "runs/" + r.run_id + "/";
    j["artifacts"] = {{"graph", dir + "graph.json"}, {"metrics", dir + "metrics.json"}, {"meta", dir + "meta.json"}};
  } else {
    j["error"] = {{"code", r.error_code}, {"message", r.error_message}};
  }
  return j;
}

}  // namespace

std::string run_id(const PerturbationSpec& spec) {
  return std::string(to_string(spec.model)) + "_p" + format_number(spec.precision) + "_r" +
         format_number(spec.recall) + "_s" + std::to_string(spec.seed);
}

void ExperimentConfig::validate() const {
  if (runs.empty()) throw Error(ErrorCode::InvalidArgument, "experiment has no runs");
  for (const RunGroup& g : runs) {
    if (g.replicates == 0) throw Error(ErrorCode::InvalidArgument, "replicate count must be at least 1");
    PerturbationSpec{g.model, g.precision, g.recall, g.base_seed}.validate();
  }
  (void)options_for(metrics);
  if (jobs == 0) throw Error(ErrorCode::InvalidArgument, "jobs must be at least 1");
  std::set<std::string> ids;
  for (const auto& r : plan(*this)) {
    if (!ids.insert(r.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate run id " + r.id);
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  const json& j = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
  ExperimentConfig cfg;
  try {
    cfg.truth_path = j.value("truth", "");
    cfg.graph_id = j.value("graph_id", "");
    cfg.output_dir = j.value("output_dir", "");
    cfg.metrics = j.value("metrics", std::vector<std::string>{});
    cfg.f1_source = f1_source_from_string(j.value("f1_source", "target"));
    cfg.isolated = isolated_from_string(j.value("isolated_nodes", "prune"));
    cfg.density = density_convention_from_string(j.value("density_convention", "standard"));
    cfg.jobs = j.value("jobs", std::size_t{1});
    if (auto it = j.find("runs"); it != j.end()) {
      for (const json& r : *it) {
        RunGroup g;
        g.model = error_model_from_string(r.at("model").get<std::string>());
        g.precision = r.at("precision").get<double>();
        g.recall = r.at("recall").get<double>();
        g.replicates = r.value("replicates", std::size_t{1});
        g.base_seed = r.value("base_seed", std::uint64_t{0});
        cfg.runs.push_back(g);
      }
    }
    if (auto it = j.find("grid"); it != j.end()) {
      const json& grid = *it;
      const auto replicates = grid.value("replicates", std::size_t{1});
      const auto base_seed = grid.value("base_seed", std::uint64_t{0});
      for (const json& m : grid.at("models")) {
        for (const json& rate : grid.at("rates")) {
          cfg.runs.push_back({error_model_from_string(m.get<std::string>()), rate.at(0).get<double>(),
                              rate.at(1).get<double>(), replicates, base_seed});
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("experiment config: ") + e.what());
  }
  return cfg;
}

json ExperimentConfig::to_json() const {
  json runs_json = json::array();
  for (const RunGroup& g : runs) {
    runs_json.push_back({{"model", std::string(affilkg::to_string(g.model))},
                         {"precision", g.precision},
                         {"recall", g.recall},
                         {"replicates", g.replicates},
                         {"base_seed", g.base_seed}});
  }
  return {{"truth", truth_path},
          {"graph_id", graph_id},
          {"output_dir", output_dir},
          {"runs", std::move(runs_json)},
          {"metrics", metrics},
          {"f1_source", std::string(f1_source_name(f1_source))},
          {"isolated_nodes", std::string(isolated_name(isolated))},
          {"density_convention", std::string(density_name(density))},
          {"jobs", jobs}};
}

std::size_t ExperimentResult::failed_runs() const {
  return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunResult& r) { return !r.ok; }));
}

std::vector<BiasRecord> ExperimentResult::records() const {
  std::vector<BiasRecord> out;
  for (const RunResult& r : runs) out.insert(out.end(), r.records.begin(), r.records.end());
  return out;
}

std::vector<BiasRecord> compare_suites(const MetricSuite& truth, const MetricSuite& extracted,
                                       const std::vector<std::string>& selection, double f1,
                                       const std::string& graph_id, const std::string& run_id) {
  const auto truth_values = flatten(truth);
  const auto values = flatten(extracted);
  std::vector<BiasRecord> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string name(values[i].name);
    if (!selection.empty() && std::find(selection.begin(), selection.end(), name) == selection.end()) continue;
    if (is_error_metric(name)) {
      if (values[i].value) out.push_back(error_record(name, *values[i].value, f1, graph_id, run_id));
      continue;
    }
    if (!truth_values[i].value || !values[i].value) continue;
    out.push_back(bias_record(name, *truth_values[i].value, *values[i].value, f1, graph_id, run_id));
  }
  return out;
}

ExperimentResult run_experiment(const AffiliationGraph& truth, const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string graph_id = cfg.graph_id.empty()
                                   ? (cfg.truth_path.empty() ? "truth" : fs::path(cfg.truth_path).stem().string())
                                   : cfg.graph_id;
  const AffiliationGraph prepared_truth = prepare(truth, cfg.isolated);

  ExperimentResult result;
  result.truth_metrics = compute_suite(prepared_truth, nullptr, suite_options(cfg));

  const auto planned = plan(cfg);
  result.runs.resize(planned.size());
  for (std::size_t i = 0; i < planned.size(); ++i) {
    result.runs[i].run_id = planned[i].id;
    result.runs[i].spec = planned[i].spec;
    result.runs[i].replicate = planned[i].replicate;
  }

  const auto n = static_cast<std::ptrdiff_t>(planned.size());
#ifdef AFFILKG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(cfg.jobs))
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    RunResult& run = result.runs[static_cast<std::size_t>(i)];
    execute(run, truth, prepared_truth, result.truth_metrics, cfg, graph_id);
    if (run.ok) {
      log::emit(log::Level::Debug, "run_done", {{"run_id", run.run_id}, {"f1", run.f1}});
    } else {
      log::error("run_failed", {{"run_id", run.run_id}, {"code", run.error_code}, {"message", run.error_message}});
    }
  }

  const auto records = result.records();
  result.table = aggregate(records);
  if (result.table.skipped_records > 0) {
    log::warn("records_without_relative_error", {{"count", result.table.skipped_records}});
  }
  return result;
}

ExperimentResult run_experiment_to_dir(const ExperimentConfig& cfg, const NormalizationConfig& norm) {
  if (cfg.output_dir.empty()) throw Error(ErrorCode::InvalidArgument, "experiment needs an output directory");
  const AffiliationGraph truth = load_graph(cfg.truth_path, norm);
  ExperimentResult result = run_experiment(truth, cfg);

  const fs::path out(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out / "runs", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + (out / "runs").string() + ": " + ec.message());

  json manifest_runs = json::array();
  std::string records_text;
  for (const RunResult& r : result.runs) {
    manifest_runs.push_back(run_entry(r));
    if (!r.ok) continue;
    const fs::path dir = out / "runs" / r.run_id;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_text((dir / "graph.json").string(), dump(to_json(*r.graph)));
    write_text((dir / "metrics.json").string(), dump(to_json(r.metrics)));
    json meta = to_json(r.report);
    meta["run_id"] = r.run_id;
    meta["f1"] = r.f1;
    meta["f1_source"] = std::string(f1_source_name(cfg.f1_source));
    write_text((dir / "meta.json").string(), dump(meta));
    for (const BiasRecord& rec : r.records) records_text += to_json(rec).dump() + "\n";
  }

  write_text((out / "truth_metrics.json").string(), dump(to_json(result.truth_metrics)));
  write_text((out / "records.jsonl").string(), records_text);
  write_text((out / "bias_table.csv").string(), to_csv(result.table));
  write_text((out / "bias_table.json").string(), dump(to_json(result.table)));

  json manifest = {{"config", cfg.to_json()},
                   {"truth",
                    {{"path", cfg.truth_path},
                     {"num_indiv", truth.num_indiv()},
                     {"num_club", truth.num_club()},
                     {"num_edges", truth.num_edges()}}},
                   {"num_runs", result.runs.size()},
                   {"failed_runs", result.failed_runs()},
                   {"runs", std::move(manifest_runs)},
                   {"outputs",
                    {"truth_metrics.json", "records.jsonl", "bias_table.csv", "bias_table.json"}}};
  write_text((out / "manifest.json").string(), dump(manifest));
  log::info("experiment_done", {{"runs", result.runs.size()},
                                {"failed", result.failed_runs()},
                                {"output_dir", cfg.output_dir}});
  return result;
}

}  // namespace affilkg
