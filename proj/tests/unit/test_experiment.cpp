#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "affilkg/error.hpp"
#include "affilkg/experiment.hpp"
#include "affilkg/generate.hpp"
#include "affilkg/io.hpp"
#include "affilkg/log.hpp"

using namespace affilkg;
namespace fs = std::filesystem;

namespace {

AffiliationGraph small_truth() {
  GeneratorConfig gen;
  gen.num_indiv = 60;
  gen.num_club = 15;
  gen.seed = 5;
  return generate_affiliation_graph(gen);
}

struct QuietLogs {
  log::Level saved = log::level();
  QuietLogs() { log::set_level(log::Level::Off); }
  ~QuietLogs() { log::set_level(saved); }
};

}  // namespace

TEST_CASE("generator output has no isolated nodes and heavy-tailed clubs") {
  auto g = generate_affiliation_graph({});
  CHECK(g.num_indiv() == 500);
  CHECK(g.num_club() == 100);
  CHECK(g.without_isolated() == g);
  std::size_t largest = 0;
  for (std::uint32_t c = 0; c < g.num_club(); ++c) largest = std::max(largest, g.degree(Partition::Club, c));
  const double mean = static_cast<double>(g.num_edges()) / g.num_club();
  CHECK(largest > 4 * mean);
  CHECK(generate_affiliation_graph({}) == g);
}

TEST_CASE("identity runs give all-zero biases") {
  QuietLogs quiet;
  ExperimentConfig cfg;
  cfg.runs = {{ErrorModel::RandomEdge, 1.0, 1.0, 1, 0}};
  auto r = run_experiment(small_truth(), cfg);
  REQUIRE(r.failed_runs() == 0);
  REQUIRE_FALSE(r.table.rows.empty());
  for (const auto& row : r.table.rows) {
    if (row.mean_rel_bias) CHECK(*row.mean_rel_bias == 0.0);
    CHECK(row.mean_rel_mae == 0.0);
  }
}

TEST_CASE("run counting, ids and job-count independence") {
  QuietLogs quiet;
  ExperimentConfig cfg;
  for (ErrorModel m : kAllModels)
    for (double rate : {0.9, 0.8, 0.7}) cfg.runs.push_back({m, rate, rate, 5, 1});
  cfg.metrics = {"bipartite_density", "num_connected_components", "rmae_all_clubs"};
  auto truth = small_truth();
  auto one = run_experiment(truth, cfg);
  CHECK(one.runs.size() == 60);
  CHECK(std::is_sorted(one.runs.begin(), one.runs.end(),
                       [](const RunResult& a, const RunResult& b) { return a.run_id < b.run_id; }));
  cfg.jobs = 3;
  auto three = run_experiment(truth, cfg);
  CHECK(to_csv(one.table) == to_csv(three.table));
  CHECK(run_id({ErrorModel::NodeAddition, 0.85, 0.85, 3}) == "node-add_p0.85_r0.85_s3");
}

TEST_CASE("measured f1 source changes only binning inputs") {
  QuietLogs quiet;
  ExperimentConfig cfg;
  cfg.runs = {{ErrorModel::RandomEdge, 0.7, 0.9, 2, 1}};
  cfg.metrics = {"bipartite_density"};
  auto truth = small_truth();
  auto target = run_experiment(truth, cfg);
  cfg.f1_source = F1Source::Measured;
  auto measured = run_experiment(truth, cfg);
  CHECK(target.runs[0].f1 == f1_score(0.7, 0.9));
  CHECK(measured.runs[0].f1 ==
        f1_score(measured.runs[0].report.achieved_precision, measured.runs[0].report.achieved_recall));
}

TEST_CASE("failed runs are recorded and the rest continue") {
  QuietLogs quiet;
  ExperimentConfig cfg;
  // A tiny recall underflows the edge budget.
  cfg.runs = {{ErrorModel::RandomEdge, 0.9, 0.9, 1, 1}, {ErrorModel::RandomEdge, 0.9, 0.001, 1, 1}};
  auto r = run_experiment(small_truth(), cfg);
  CHECK(r.failed_runs() == 1);
  auto failed = std::find_if(r.runs.begin(), r.runs.end(), [](const RunResult& x) { return !x.ok; });
  CHECK(failed->error_code == "BudgetUnderflow");
}

TEST_CASE("config validation and JSON round trip") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.runs = {{ErrorModel::RandomEdge, 0.9, 0.9, 0, 1}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.runs = {{ErrorModel::RandomEdge, 0.9, 0.9, 2, 1}, {ErrorModel::RandomEdge, 0.9, 0.9, 1, 2}};
  CHECK_THROWS_AS(cfg.validate(), Error);  // seed 2 appears twice
  cfg.runs = {{ErrorModel::RandomEdge, 0.9, 0.9, 1, 1}};
  cfg.metrics = {"not_a_metric"};
  CHECK_THROWS_AS(cfg.validate(), Error);

  auto j = nlohmann::json::parse(R"({
    "truth": "t.json", "output_dir": "out", "isolated_nodes": "retain", "f1_source": "measured",
    "grid": {"models": ["random", "node-split"], "rates": [[0.9, 0.8], [0.7, 0.7]], "replicates": 3, "base_seed": 10}
  })");
  auto parsed = ExperimentConfig::from_json(j);
  CHECK(parsed.runs.size() == 4);
  CHECK(parsed.isolated == IsolatedPolicy::Retain);
  CHECK(parsed.f1_source == F1Source::Measured);
  auto again = ExperimentConfig::from_json(parsed.to_json());
  CHECK(again.to_json() == parsed.to_json());
  nlohmann::json manifest = {{"config", parsed.to_json()}, {"runs", nlohmann::json::array()}};
  CHECK(ExperimentConfig::from_json(manifest).to_json() == parsed.to_json());
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"isolated_nodes": "drop"})")), Error);
}

TEST_CASE("experiment writes artifacts and reruns byte for byte") {
  QuietLogs quiet;
  const fs::path dir = fs::temp_directory_path() / "affilkg_experiment_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text((dir / "truth.json").string(), dump(to_json(small_truth())));
  ExperimentConfig cfg;
  cfg.truth_path = (dir / "truth.json").string();
  cfg.output_dir = (dir / "out1").string();
  cfg.runs = {{ErrorModel::NodeAddition, 0.85, 0.85, 3, 1}, {ErrorModel::PreferentialAttachment, 0.9, 0.8, 2, 7}};
  auto r = run_experiment_to_dir(cfg, NormalizationConfig::defaults());
  CHECK(r.runs.size() == 5);
  for (const char* f : {"manifest.json", "truth_metrics.json", "records.jsonl", "bias_table.csv", "bias_table.json"})
    CHECK(fs::exists(dir / "out1" / f));
  auto manifest = nlohmann::json::parse(read_text((dir / "out1" / "manifest.json").string()));
  CHECK(manifest["runs"].size() == 5);
  const std::string first_run = manifest["runs"][0]["run_id"];
  CHECK(fs::exists(dir / "out1" / "runs" / first_run / "graph.json"));

  // Re-run from the manifest into a second directory.
  auto cfg2 = ExperimentConfig::from_json(manifest);
  cfg2.output_dir = (dir / "out2").string();
  run_experiment_to_dir(cfg2, NormalizationConfig::defaults());
  for (const std::string f : {"bias_table.csv", "records.jsonl", "truth_metrics.json", "bias_table.json"})
    CHECK(read_text((dir / "out1" / f).string()) == read_text((dir / "out2" / f).string()));
  CHECK(read_text((dir / "out1" / "runs" / first_run / "graph.json").string()) ==
        read_text((dir / "out2" / "runs" / first_run / "graph.json").string()));

  // Stored per-run graphs reproduce the stored metrics.
  auto g = load_graph((dir / "out1" / "runs" / first_run / "graph.json").string(), NormalizationConfig::defaults());
  CHECK(g.num_edges() > 0);
  fs::remove_all(dir);
}

TEST_CASE("records survive the JSONL round trip into the same table") {
  QuietLogs quiet;
  ExperimentConfig cfg;
  cfg.runs = {{ErrorModel::RandomEdge, 0.8, 0.8, 4, 1}};
  auto r = run_experiment(small_truth(), cfg);
  const fs::path path = fs::temp_directory_path() / "affilkg_records_test.jsonl";
  std::string text;
  for (const auto& rec : r.records()) text += to_json(rec).dump() + "\n";
  write_text(path.string(), text);
  auto back = read_bias_records(path.string());
  CHECK(to_csv(aggregate(back)) == to_csv(r.table));
  fs::remove(path);
}
