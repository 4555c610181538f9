// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion.
// Exits 1 if any criterion fails and 77 if every selected one was skipped.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../oracles.hpp"
#include "affilkg/error.hpp"
#include "affilkg/error_models.hpp"
#include "affilkg/experiment.hpp"
#include "affilkg/generate.hpp"
#include "affilkg/io.hpp"
#include "affilkg/metrics.hpp"
#include "affilkg/projections.hpp"
#include "affilkg/tuple_eval.hpp"

using namespace affilkg;
namespace fs = std::filesystem;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

// Collects mismatches; the first few are kept for the report.
struct Failures {
  std::size_t count = 0;
  std::vector<std::string> samples;

  void add(const std::string& what) {
    ++count;
    if (samples.size() < 5) samples.push_back(what);
  }
  std::string describe() const {
    std::ostringstream os;
    os << count << " mismatches";
    for (const auto& s : samples) os << "; " << s;
    return os.str();
  }
};

bool close_rel(double got, double want, double tol = 1e-12) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("affilkg-acceptance-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------
// 1. Budget exactness

AffiliationGraph graph_with_edges(std::mt19937_64& rng, std::size_t num_edges) {
  // About 4x as many slots as edges keeps enough non-edges for the largest
  // false-positive budget, 1.5 |E| at P = 0.4.
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(4.0 * static_cast<double>(num_edges)))) + 2;
  std::uniform_int_distribution<std::size_t> a(0, side - 1), b(0, side - 1);
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  while (chosen.size() < num_edges) chosen.insert({a(rng), b(rng)});
  std::vector<std::string> indiv, club;
  for (std::size_t i = 0; i < side; ++i) {
    indiv.push_back("i" + std::to_string(i));
    club.push_back("c" + std::to_string(i));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (auto [i, j] : chosen) edges.emplace_back(indiv[i], club[j]);
  return AffiliationGraph::from_labels(indiv, club, edges);
}

Outcome budget_exactness() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> edges(10, 5000);
  std::uniform_int_distribution<long long> rate(400, 1000);
  Failures bad;
  std::size_t runs = 0, equality_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = edges(rng);
    // Rates are whole thousandths so every floor has an exact integer form.
    long long p = rate(rng);
    const long long r = rate(rng);
    if (trial % 10 == 0) p = std::vector<long long>{500, 800, 1000, 625, 400}[(trial / 10) % 5];
    const auto g = graph_with_edges(rng, m);
    const long long e_keep = r * static_cast<long long>(m) / 1000;
    const long long e_add = (1000 - p) * e_keep / p;
    const bool integral = ((1000 - p) * e_keep) % p == 0;
    for (ErrorModel model : kAllModels) {
      PerturbationSpec spec{model, static_cast<double>(p) / 1000.0, static_cast<double>(r) / 1000.0,
                            static_cast<std::uint64_t>(trial)};
      std::ostringstream tag;
      tag << to_string(model) << " |E|=" << m << " P=" << spec.precision << " R=" << spec.recall;
      ++runs;
      try {
        const auto out = perturb(g, spec);
        const auto ev = evaluate_graphs(out.graph, g);
        const auto tp = static_cast<long long>(ev.true_positives);
        const auto fp = static_cast<long long>(ev.false_positives.size());
        if (tp != e_keep) bad.add(tag.str() + ": TP " + std::to_string(tp) + " != " + std::to_string(e_keep));
        if (fp > e_add) bad.add(tag.str() + ": FP " + std::to_string(fp) + " > " + std::to_string(e_add));
        // precision >= P  <=>  1000 TP >= p (TP + FP)
        if (1000 * tp < p * (tp + fp)) bad.add(tag.str() + ": precision below target");
        if (integral) {
          if (model == ErrorModel::RandomEdge) ++equality_cases;
          if (1000 * tp != p * (tp + fp)) bad.add(tag.str() + ": precision not equal at integral budget");
        }
        if (ev.recall != static_cast<double>(e_keep) / static_cast<double>(m)) {
          bad.add(tag.str() + ": recall not floor(R|E|)/|E|");
        }
      } catch (const Error& e) {
        bad.add(tag.str() + ": " + e.what());
      }
    }
  }
  std::ostringstream os;
  os << runs << " runs, " << equality_cases << " cases with integral budget";
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

// ---------------------------------------------------------------------------
// 2. Metric oracles

struct OracleSuite {
  std::map<std::string, std::optional<double>> values;
};

std::optional<double> population_std(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

std::optional<double> oracle_rmae(const AffiliationGraph& truth, const AffiliationGraph& extracted,
                                  std::optional<std::size_t> top) {
  std::vector<std::pair<std::size_t, std::string>> clubs;  // (degree, label)
  const auto tm = oracle::unified(truth);
  const auto labels = truth.labels(Partition::Club);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const int d = tm.degree(static_cast<int>(truth.num_indiv() + c));
    if (d > 0) clubs.push_back({static_cast<std::size_t>(d), labels[c]});
  }
  if (clubs.empty()) return std::nullopt;
  std::sort(clubs.begin(), clubs.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (top && clubs.size() > *top) clubs.resize(*top);
  const auto em = oracle::unified(extracted);
  const auto elabels = extracted.labels(Partition::Club);
  double total = 0.0;
  for (const auto& [deg, label] : clubs) {
    double got = 0.0;
    for (std::size_t c = 0; c < elabels.size(); ++c) {
      if (elabels[c] == label) got = em.degree(static_cast<int>(extracted.num_indiv() + c));
    }
    total += std::abs(got - static_cast<double>(deg)) / static_cast<double>(deg);
  }
  return total / static_cast<double>(clubs.size());
}

OracleSuite oracle_suite(const AffiliationGraph& g, const AffiliationGraph& truth) {
  OracleSuite s;
  auto& v = s.values;
  const auto m = oracle::unified(g);
  const int ni = static_cast<int>(g.num_indiv());
  for (Partition part : {Partition::Indiv, Partition::Club}) {
    std::vector<double> deg;
    const int lo = part == Partition::Indiv ? 0 : ni;
    const int hi = part == Partition::Indiv ? ni : m.n;
    for (int u = lo; u < hi; ++u) deg.push_back(m.degree(u));
    std::optional<double> mean;
    if (!deg.empty()) {
      double sum = 0.0;
      for (double d : deg) sum += d;
      mean = sum / static_cast<double>(deg.size());
    }
    const std::string side = part == Partition::Indiv ? "indiv" : "club";
    v["degree_mean_" + side] = mean;
    v["degree_std_" + side] = population_std(deg);
  }
  v["rmae_all_clubs"] = oracle_rmae(truth, g, std::nullopt);
  v["rmae_top10_clubs"] = oracle_rmae(truth, g, 10);
  if (g.num_indiv() && g.num_club()) {
    v["bipartite_density"] = static_cast<double>(m.edges()) / static_cast<double>(g.num_indiv() * g.num_club());
  } else {
    v["bipartite_density"] = std::nullopt;
  }
  if (m.n > 0) {
    const auto cs = oracle::component_summary(m, oracle::node_rank(g));
    v["num_connected_components"] = static_cast<double>(cs.count);
    v["prop_largest_cc"] = cs.prop_largest;
    v["avg_size_rest_components"] = cs.avg_rest;
    if (cs.largest.size() >= 2) {
      const auto p = oracle::paths_within(m, cs.largest);
      v["diameter_largest_cc"] = p.diameter;
      v["avg_shortest_path_largest_cc"] = p.avg;
    } else {
      v["diameter_largest_cc"] = v["avg_shortest_path_largest_cc"] = std::nullopt;
    }
  }
  for (Partition onto : {Partition::Indiv, Partition::Club}) {
    const std::string name = onto == Partition::Indiv ? "comembership" : "org";
    if (g.num_nodes(onto) == 0) {
      v[name + "_density"] = v[name + "_avg_clustering"] = std::nullopt;
      continue;
    }
    const auto pm = oracle::projection(g, onto);
    v[name + "_density"] = pm.n >= 2 ? std::optional<double>(oracle::density(pm)) : std::nullopt;
    v[name + "_avg_clustering"] = oracle::avg_clustering(pm);
  }
  return s;
}

Outcome metric_oracles() {
  std::mt19937_64 rng(5150);
  Failures bad;
  std::size_t compared = 0, community_graphs = 0, gaps = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    // Node counts up to 15 + 15 = 30.
    const auto truth = oracle::random_graph(rng, 15, 15, 0.12);
    // A second graph over overlapping labels exercises RMAE with real errors.
    const auto g = trial % 2 ? truth : oracle::random_graph(rng, 15, 15, 0.12);
    const auto suite = compute_suite(g, &truth);
    const auto want = oracle_suite(g, truth);
    for (const auto& field : flatten(suite)) {
      const std::string name(field.name);
      if (name == "num_communities") continue;
      const auto it = want.values.find(name);
      if (it == want.values.end()) {
        bad.add("trial " + std::to_string(trial) + ": no oracle for " + name);
        continue;
      }
      ++compared;
      if (field.value.has_value() != it->second.has_value()) {
        bad.add("trial " + std::to_string(trial) + " " + name + ": defined-ness differs");
      } else if (field.value && !close_rel(*field.value, *it->second)) {
        std::ostringstream os;
        os << "trial " << trial << " " << name << ": " << *field.value << " vs " << *it->second;
        bad.add(os.str());
      }
    }
    // Communities: greedy labelling against the definition, and against the
    // exhaustive optimum on small graphs.
    if (g.num_edges() > 0) {
      const auto labels = greedy_modularity_communities(g);
      const auto m = oracle::unified(g);
      std::vector<int> lab(labels.begin(), labels.end());
      const std::set<int> distinct(lab.begin(), lab.end());
      ++compared;
      if (!suite.num_communities || static_cast<std::size_t>(*suite.num_communities) != distinct.size()) {
        bad.add("trial " + std::to_string(trial) + ": community count differs from labelling");
      }
      const double q = oracle::modularity(m, lab);
      if (!close_rel(modularity(g.unified_csr(), labels), q)) {
        bad.add("trial " + std::to_string(trial) + ": modularity of greedy labelling differs");
      }
      if (distinct.size() < oracle::components(m).size()) {
        bad.add("trial " + std::to_string(trial) + ": fewer communities than components");
      }
      if (m.n <= 8) {
        ++community_graphs;
        const auto best = oracle::exhaustive_modularity(m);
        if (q > best.q + 1e-12) bad.add("trial " + std::to_string(trial) + ": greedy above exhaustive optimum");
        if (q < best.q - 1e-12) {
          ++gaps;
          worst_gap = std::max(worst_gap, best.q - q);
        }
      }
    }
  }
  // Extra small graphs so the exhaustive comparison has a useful sample.
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 4, 4, 0.4);
    if (g.num_edges() == 0) continue;
    const auto labels = greedy_modularity_communities(g);
    const auto m = oracle::unified(g);
    std::vector<int> lab(labels.begin(), labels.end());
    const double q = oracle::modularity(m, lab);
    const auto best = oracle::exhaustive_modularity(m);
    ++community_graphs;
    if (q > best.q + 1e-12) bad.add("small trial " + std::to_string(trial) + ": greedy above exhaustive optimum");
    if (q < best.q - 1e-12) {
      ++gaps;
      worst_gap = std::max(worst_gap, best.q - q);
    }
  }
  std::ostringstream os;
  os << compared << " field comparisons on 100 graphs; greedy modularity below the exhaustive optimum on "
     << gaps << " of " << community_graphs << " graphs with <= 8 nodes (largest gap " << worst_gap << ")";
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

// ---------------------------------------------------------------------------
// 3 and 7. Desk-scale experiment

ExperimentConfig desk_config(const fs::path& truth, const fs::path& out, std::size_t jobs) {
  ExperimentConfig cfg;
  cfg.truth_path = truth.string();
  cfg.graph_id = "synthetic";
  cfg.output_dir = out.string();
  cfg.jobs = jobs;
  for (ErrorModel m : kAllModels) cfg.runs.push_back({m, 0.85, 0.85, 20, 1});
  return cfg;
}

fs::path write_synthetic_truth(const fs::path& dir) {
  const auto g = generate_affiliation_graph({});
  const auto path = dir / "synthetic.json";
  write_text(path.string(), dump(to_json(g)));
  return path;
}

std::optional<double> model_bias(const ExperimentResult& res, ErrorModel model, const std::string& metric) {
  std::vector<BiasRecord> subset;
  const std::string prefix = std::string(to_string(model)) + "_";
  for (const auto& r : res.records()) {
    if (r.run_id.rfind(prefix, 0) == 0) subset.push_back(r);
  }
  const auto table = aggregate(subset);
  const auto* row = table.find(f1_bin(0.85), metric);
  if (!row) return std::nullopt;
  return row->mean_rel_bias;
}

Outcome directional_bias() {
  const auto dir = scratch_dir("c3");
  const auto truth = write_synthetic_truth(dir);
  const auto res = run_experiment_to_dir(desk_config(truth, dir / "out", 1), NormalizationConfig::defaults());
  Failures bad;
  std::ostringstream os;
  if (res.failed_runs()) bad.add(std::to_string(res.failed_runs()) + " failed runs");
  struct Expect {
    ErrorModel model;
    std::string metric;
    int sign;
  };
  const std::vector<Expect> expects = {
      {ErrorModel::RandomEdge, "bipartite_density", +1},
      {ErrorModel::PreferentialAttachment, "bipartite_density", +1},
      {ErrorModel::NodeAddition, "bipartite_density", -1},
      {ErrorModel::NodeAddition, "num_connected_components", +1},
      {ErrorModel::NodeDisaggregation, "bipartite_density", -1},
      {ErrorModel::NodeDisaggregation, "num_connected_components", +1},
      {ErrorModel::NodeDisaggregation, "comembership_density", -1},
      {ErrorModel::NodeDisaggregation, "org_density", -1},
  };
  for (const auto& e : expects) {
    const auto b = model_bias(res, e.model, e.metric);
    os << to_string(e.model) << "/" << e.metric << "=";
    if (b) {
      os << format_number(std::round(*b * 1e4) / 1e4) << " ";
    } else {
      os << "null ";
    }
    if (!b || *b * e.sign <= 0.01) {
      bad.add(std::string(to_string(e.model)) + " " + e.metric + " has the wrong sign or |mean| <= 0.01");
    }
  }
  fs::remove_all(dir.parent_path() / "c3");
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

Outcome determinism() {
  const auto dir = scratch_dir("c7");
  const auto truth = write_synthetic_truth(dir);
  const auto a = dir / "first", b = dir / "second";
  run_experiment_to_dir(desk_config(truth, a, 1), NormalizationConfig::defaults());
  run_experiment_to_dir(desk_config(truth, b, 1), NormalizationConfig::defaults());
  const auto csv_a = read_text((a / "bias_table.csv").string());
  const auto csv_b = read_text((b / "bias_table.csv").string());
  // Same config with a different worker count, reported only.
  const auto c = dir / "parallel";
  run_experiment_to_dir(desk_config(truth, c, 4), NormalizationConfig::defaults());
  const bool parallel_same = read_text((c / "bias_table.csv").string()) == csv_a;
  fs::remove_all(dir);
  std::ostringstream os;
  os << csv_a.size() << "-byte bias table; 4-worker rerun " << (parallel_same ? "identical" : "differs");
  if (csv_a.empty() || csv_a != csv_b) return {Verdict::Fail, os.str() + "; reruns differ"};
  return {Verdict::Pass, os.str()};
}

// ---------------------------------------------------------------------------
// 4. Monotonicity

Outcome monotonicity() {
  const auto g = generate_affiliation_graph({});
  const std::vector<double> targets = {0.96, 0.88, 0.80, 0.58};
  Failures bad;
  std::ostringstream os;
  for (ErrorModel model : kAllModels) {
    ExperimentConfig cfg;
    cfg.metrics = {"bipartite_density"};
    for (double f : targets) cfg.runs.push_back({model, f, f, 20, 1});
    const auto res = run_experiment(g, cfg);
    if (res.failed_runs()) bad.add(std::string(to_string(model)) + ": failed runs");
    std::vector<double> series;
    for (double f : targets) {
      const auto* row = res.table.find(f1_bin(f), "bipartite_density");
      series.push_back(row ? row->mean_rel_mae : std::nan(""));
    }
    int inversions = 0;
    bool large = false;
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (std::isnan(series[i]) || std::isnan(series[i - 1])) {
        large = true;
      } else if (series[i] < series[i - 1]) {
        ++inversions;
        large = large || series[i - 1] - series[i] > 0.005;
      }
    }
    os << to_string(model) << "=[";
    for (std::size_t i = 0; i < series.size(); ++i) os << (i ? "," : "") << std::round(series[i] * 1e4) / 1e4;
    os << "] ";
    if (large || inversions > 1) bad.add(std::string(to_string(model)) + " not monotone");
  }
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Tuple-eval fixture

int optimal_tp(const std::vector<EdgeTuple>& pred, const std::vector<EdgeTuple>& truth, const NormalizationConfig& cfg) {
  std::vector<std::vector<bool>> compat(pred.size(), std::vector<bool>(truth.size()));
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const auto pp = normalize_label(pred[i].person, cfg), tp = normalize_label(truth[j].person, cfg);
      const auto pc = normalize_label(pred[i].club, cfg), tc = normalize_label(truth[j].club, cfg);
      compat[i][j] = (pp == tp && pc == tc) || (persons_match(pp, tp, cfg) && entities_match(pc, tc, cfg));
    }
  return oracle::max_matching(compat);
}

Outcome tuple_fixture() {
  const std::string dir = AFFILKG_FIXTURE_DIR;
  const auto pred = parse_tuple_file(dir + "/eval_pred.csv");
  const auto truth = parse_tuple_file(dir + "/eval_truth.csv");
  const auto cfg = NormalizationConfig::defaults();
  const auto r = evaluate_tuples(pred, truth);
  Failures bad;
  // Hand-computed: 16 of 25 predictions match, 16 of 20 truth tuples found.
  const std::vector<std::size_t> want_fp = {5, 6, 10, 13, 14, 20, 21, 22, 23};
  const std::vector<std::size_t> want_fn = {7, 12, 13, 19};
  if (pred.size() != 25 || truth.size() != 20) bad.add("fixture sizes changed");
  if (r.true_positives != 16) bad.add("TP " + std::to_string(r.true_positives) + " != 16");
  if (r.false_positives != want_fp) bad.add("false positive set differs");
  if (r.false_negatives != want_fn) bad.add("false negative set differs");
  if (r.precision != 16.0 / 25.0) bad.add("precision != 0.64");
  if (r.recall != 16.0 / 20.0) bad.add("recall != 0.8");
  if (!close_rel(r.f1, 32.0 / 45.0, 1e-15)) bad.add("F1 != 32/45");
  const int best = optimal_tp(pred, truth, cfg);
  if (best != 16) bad.add("matching oracle gives " + std::to_string(best));

  // Greedy against optimal on random fixtures of up to 12 tuples a side.
  const std::vector<std::string> people = {"Mr John Smith", "John Smith", "Mrs John Smith", "Jane Doe",
                                           "Dr Jane Doe",   "J Doe",      "Peter Brown",    "Mr Peter Brown"};
  const std::vector<std::string> clubs = {"Rotary Club", "Rotary",        "Harare Sports Club",
                                          "Harare Sports Club of Rhodesia", "Bulawayo Club", "Byo Club",
                                          "Lions",       "Lion",          "St Andrews Society",
                                          "Saint Andrews Society"};
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> pp(0, people.size() - 1), pc(0, clubs.size() - 1), n(1, 12);
  auto draw = [&](std::size_t k) {
    std::vector<EdgeTuple> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back({people[pp(rng)], "member", clubs[pc(rng)], std::nullopt});
    return out;
  };
  int gaps = 0, instances = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = draw(n(rng)), t = draw(n(rng));
    const auto res = evaluate_tuples(p, t);
    auto keep = [](const std::vector<EdgeTuple>& xs, const std::vector<std::size_t>& dup) {
      std::vector<EdgeTuple> out;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::find(dup.begin(), dup.end(), i) == dup.end()) out.push_back(xs[i]);
      return out;
    };
    const int opt = optimal_tp(keep(p, res.duplicate_predicted), keep(t, res.duplicate_truth), cfg);
    ++instances;
    if (static_cast<int>(res.true_positives) > opt) bad.add("greedy exceeds optimum on trial " + std::to_string(trial));
    gaps += static_cast<int>(res.true_positives) < opt;
  }
  std::ostringstream os;
  os << "P=" << r.precision << " R=" << r.recall << " F1=" << r.f1 << "; greedy below optimal on " << gaps
     << " of " << instances << " random fixtures";
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

// ---------------------------------------------------------------------------
// 6. Ground-truth rows (needs user-supplied data)

Outcome ground_truth_rows() {
  const char* env = std::getenv("AFFILKG_TRUTH_DIR");
  if (!env) return {Verdict::Skip, "AFFILKG_TRUTH_DIR not set"};
  std::optional<fs::path> file;
  for (const char* ext : {".json", ".csv", ".jsonl"}) {
    for (const char* stem : {"Denver", "denver"}) {
      const auto candidate = fs::path(env) / (std::string(stem) + ext);
      if (!file && fs::exists(candidate)) file = candidate;
    }
  }
  if (!file) return {Verdict::Skip, "no Denver graph under " + std::string(env)};
  const auto g = load_graph(file->string(), NormalizationConfig::defaults());
  const auto s = compute_suite(g);
  Failures bad;
  std::ostringstream os;
  auto real = [&](const char* name, const std::optional<double>& got, double want) {
    os << name << "=" << (got ? format_number(*got) : "null") << " ";
    if (!got || std::abs(*got - want) > 0.01 * std::abs(want)) bad.add(std::string(name) + " outside 1%");
  };
  auto integer = [&](const char* name, const std::optional<std::int64_t>& got, std::int64_t want, double tol) {
    os << name << "=" << (got ? std::to_string(*got) : "null") << " ";
    if (!got || std::abs(static_cast<double>(*got - want)) > tol * static_cast<double>(want)) {
      bad.add(std::string(name) + " differs");
    }
  };
  real("comembership_density", s.comembership_density, 0.491);
  real("comembership_avg_clustering", s.comembership_avg_clustering, 0.804);
  integer("num_connected_components", s.num_connected_components, 11, 0.0);
  integer("num_communities", s.num_communities, 36, 0.10);
  real("bipartite_density", s.bipartite_density, 0.015);
  integer("diameter_largest_cc", s.diameter_largest_cc, 10, 0.0);
  real("degree_mean_indiv", s.degree_mean_indiv, 3.777);
  real("degree_mean_club", s.degree_mean_club, 5.452);
  if (bad.count) return {Verdict::Fail, os.str() + "; " + bad.describe()};
  return {Verdict::Pass, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "budget exactness", budget_exactness},
      {2, "metric oracles", metric_oracles},
      {3, "directional bias at desk scale", directional_bias},
      {4, "rel_mae monotone in F1 bin", monotonicity},
      {5, "tuple-eval fixture", tuple_fixture},
      {6, "ground-truth rows", ground_truth_rows},
      {7, "experiment determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool failed = false, any_ran = false;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    failed = failed || o.verdict == Verdict::Fail;
    any_ran = any_ran || o.verdict != Verdict::Skip;
    std::cout << tag << " criterion " << c.id << " (" << c.title << ", " << std::round(secs * 10) / 10
              << " s): " << o.detail << std::endl;
  }
  std::error_code ec;
  fs::remove_all(fs::temp_directory_path() / ("affilkg-acceptance-" + std::to_string(::getpid())), ec);
  // 77 marks a run where every selected criterion was skipped.
  if (failed) return 1;
  return any_ran ? 0 : 77;
}
