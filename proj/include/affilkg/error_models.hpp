#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affilkg/graph.hpp"
#include "affilkg/rng.hpp"

namespace affilkg {

enum class ErrorModel { RandomEdge, PreferentialAttachment, NodeAddition, NodeDisaggregation };

inline constexpr ErrorModel kAllModels[] = {ErrorModel::RandomEdge, ErrorModel::PreferentialAttachment,
                                            ErrorModel::NodeAddition, ErrorModel::NodeDisaggregation};

// CLI names: random, pref, node-add, node-split.
std::string_view to_string(ErrorModel m);
ErrorModel error_model_from_string(std::string_view s);

struct PerturbationSpec {
  ErrorModel model = ErrorModel::RandomEdge;
  double precision = 1.0;
  double recall = 1.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless both rates are in (0, 1].
  void validate() const;
};

struct EdgeBudget {
  std::size_t e_keep = 0;  // floor(recall * |E|)
  std::size_t e_add = 0;   // floor((1/precision - 1) * e_keep)

  friend bool operator==(const EdgeBudget&, const EdgeBudget&) = default;
};

// Both floors snap values within 1e-9 (relative) of an integer to that
// integer, so decimal rates such as 0.9 hit their exact budgets despite
// binary rounding. Throws BudgetUnderflow when e_keep == 0.
EdgeBudget compute_budget(std::size_t num_edges, double precision, double recall);

// floor(x), treating x within 1e-9 relative of an integer as that integer.
std::size_t snapped_floor(double x);

// Synthetic node labels share this prefix and are checked against the
// original labels, so they never collide.
inline constexpr std::string_view kSyntheticPrefix = "#syn:";
bool is_synthetic(std::string_view label);

struct PerturbationReport {
  PerturbationSpec spec;
  EdgeBudget budget;
  std::size_t true_edges = 0;   // output edges present in the input
  std::size_t false_edges = 0;  // output edges absent from the input
  std::size_t synthetic_nodes = 0;
  std::size_t redirected_edges = 0;         // disaggregation step 2
  std::size_t reconciliation_deletions = 0;  // redirected edges dropped over budget
  std::size_t reconciliation_additions = 0;  // fresh edges added to reach e_add
  std::uint64_t rejected_draws = 0;          // preferential attachment
  double achieved_precision = 0.0;
  double achieved_recall = 0.0;
};

struct Perturbation {
  AffiliationGraph graph;
  PerturbationReport report;
};

// Keeps e_keep uniformly chosen edges and adds e_add uniformly chosen pairs
// from (V_indiv x V_club) \ E. Throws SaturatedGraph.
Perturbation perturb_random_edge(const AffiliationGraph& g, const PerturbationSpec& spec);

// As random edge, but each added pair draws its endpoints independently with
// probability proportional to original degree, rejecting pairs in E or
// already added. Throws SamplingStalled after 100 * e_add consecutive
// rejections.
Perturbation perturb_preferential(const AffiliationGraph& g, const PerturbationSpec& spec);

// Keeps e_keep edges; each of the e_add false edges joins a uniformly chosen
// original node (partition picked by fair coin) to a new node in the other
// partition.
Perturbation perturb_node_addition(const AffiliationGraph& g, const PerturbationSpec& spec);

// Keeps floor(max(P, R) |E|) edges intact and redirects the rest to new
// "misspelled" nodes, then trims intact edges to e_keep and reconciles the
// redirected edges with e_add (uniform deletion of the excess, or fresh
// original-to-new-node edges for a shortfall). Requires |E| >= 2.
Perturbation perturb_node_disaggregation(const AffiliationGraph& g, const PerturbationSpec& spec);

Perturbation perturb(const AffiliationGraph& g, const PerturbationSpec& spec);

// Degree-proportional node sampler over one partition of a fixed graph.
class DegreeSampler {
 public:
  DegreeSampler(const AffiliationGraph& g, Partition p);
  std::uint32_t draw(CounterRng& rng) const;
  std::uint64_t total_degree() const { return cumulative_.empty() ? 0 : cumulative_.back(); }

 private:
  std::vector<std::uint64_t> cumulative_;
};

enum class CountKind { Nodes, Edges };

// 100 * (|extracted| - |truth|) / |truth|. Throws EmptyGraph for an empty truth count.
double overestimation_pct(const AffiliationGraph& truth, const AffiliationGraph& extracted,
                          CountKind what);

}  // namespace affilkg
