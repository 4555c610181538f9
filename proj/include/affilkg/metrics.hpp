#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affilkg/graph.hpp"
#include "affilkg/projections.hpp"

namespace affilkg {

struct DegreeStats {
  double mean = 0.0;
  double std = 0.0;  // population
};

// Throws EmptyPartition.
DegreeStats degree_stats(const AffiliationGraph& g, Partition partition);

// |E| / (|V_indiv| |V_club|). Throws EmptyPartition.
double bipartite_density(const AffiliationGraph& g);

struct RmaeScope {
  std::optional<std::size_t> top_k;

  static RmaeScope all() { return {}; }
  static RmaeScope top(std::size_t k) { return {k}; }
};

// Mean over truth clubs of |deg_extracted - deg_truth| / deg_truth. Clubs are
// aligned by exact label; a truth club missing from `extracted` counts as
// degree 0. Zero-degree truth clubs are skipped (no defined relative error).
// Throws EmptyPartition when truth has no club with nonzero degree.
double rmae_club_degrees(const AffiliationGraph& truth, const AffiliationGraph& extracted,
                         RmaeScope scope);

struct ComponentSummary {
  std::size_t num_components = 0;
  double prop_largest = 0.0;
  double avg_rest_size = 0.0;
};

// Throws EmptyGraph for a graph without nodes.
ComponentSummary component_metrics(const AffiliationGraph& g);

// Members (unified ids, ascending) of the largest component; ties go to the
// component holding the smallest NodeId.
std::vector<std::uint32_t> largest_component(const AffiliationGraph& g);

struct PathSummary {
  std::uint32_t diameter = 0;
  double avg_shortest_path = 0.0;
};

// Hop metrics of the largest component over unordered pairs.
// Throws DegenerateComponent when that component is a single node.
PathSummary path_metrics(const AffiliationGraph& g);

// Community label per unified node from Clauset-Newman-Moore greedy
// modularity (resolution 1) on the graph viewed as unipartite. Merge scores
// are kept as exact integers, 2m * l_ij - K_i * K_j, so ties are exact and
// break toward the smallest (i, j) community pair. Labels are dense, ordered
// by smallest member.
std::vector<std::uint32_t> greedy_modularity_communities(const AffiliationGraph& g);

// Newman modularity of a labelling, resolution 1.
double modularity(const Csr& adj, const std::vector<std::uint32_t>& community);

// Throws EmptyGraph for an edgeless graph.
std::size_t count_communities(const AffiliationGraph& g);

// Metrics that may be left out of a suite (they dominate runtime).
struct SuiteOptions {
  bool communities = true;
  bool paths = true;
  bool projections = true;
  DensityConvention density = DensityConvention::Standard;
};

// Every downstream metric for one graph. A field is empty when its metric is
// undefined for the graph or was not requested.
struct MetricSuite {
  std::optional<double> degree_mean_indiv, degree_std_indiv;
  std::optional<double> degree_mean_club, degree_std_club;
  std::optional<double> rmae_all_clubs, rmae_top10_clubs;
  std::optional<double> bipartite_density;
  std::optional<std::int64_t> num_connected_components;
  std::optional<std::int64_t> num_communities;
  std::optional<double> prop_largest_cc;
  std::optional<double> avg_shortest_path_largest_cc;
  std::optional<std::int64_t> diameter_largest_cc;
  std::optional<double> avg_size_rest_components;
  std::optional<double> comembership_density, comembership_avg_clustering;
  std::optional<double> org_density, org_avg_clustering;
};

struct MetricValue {
  std::string_view name;
  std::optional<double> value;
};

// Fields in canonical order.
std::vector<MetricValue> flatten(const MetricSuite& suite);
const std::vector<std::string_view>& metric_names();
bool is_error_metric(std::string_view name);  // rmae_*: already a relative error

// Suite options implied by a metric-name selection; empty selects all.
// Throws InvalidArgument on an unknown name.
SuiteOptions options_for(const std::vector<std::string>& selection);

// `truth` enables the RMAE fields.
MetricSuite compute_suite(const AffiliationGraph& g, const AffiliationGraph* truth = nullptr,
                          const SuiteOptions& options = {});

}  // namespace affilkg
