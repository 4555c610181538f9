#include "affilkg/error_models.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "affilkg/error.hpp"

namespace affilkg {

namespace {

constexpr std::uint64_t kEnumerateLimit = std::uint64_t{1} << 22;
constexpr std::uint64_t kStallFactor = 100;

using LabelledEdges = std::vector<std::pair<std::string, std::string>>;

// Fresh labels "#syn:<partition>:<n>" that avoid the source graph's labels.
class SyntheticNamer {
 public:
  explicit SyntheticNamer(const AffiliationGraph& g) : g_(g) {}

  std::string next(Partition p) {
    auto& counter = p == Partition::Indiv ? indiv_ : club_;
    while (true) {
      std::string label = std::string(kSyntheticPrefix) + std::string(to_string(p)) + ":" +
                          std::to_string(counter++);
      if (!g_.find(p, label)) {
        ++created_;
        return label;
      }
    }
  }

  std::size_t created() const { return created_; }

 private:
  const AffiliationGraph& g_;
  std::uint64_t indiv_ = 0, club_ = 0;
  std::size_t created_ = 0;
};

struct Scaffold {
  std::vector<std::string> indiv, club;
  LabelledEdges edges;
};

Scaffold with_original_nodes(const AffiliationGraph& g) {
  Scaffold s;
  auto i = g.labels(Partition::Indiv);
  auto c = g.labels(Partition::Club);
  s.indiv.assign(i.begin(), i.end());
  s.club.assign(c.begin(), c.end());
  return s;
}

std::pair<std::string, std::string> labelled(const AffiliationGraph& g, const Edge& e) {
  return {g.labels(Partition::Indiv)[e.indiv], g.labels(Partition::Club)[e.club]};
}

// e_keep edges of g chosen uniformly, in edge order.
std::vector<std::size_t> keep_uniform(const AffiliationGraph& g, std::size_t e_keep, CounterRng& rng) {
  auto kept = sample_without_replacement(g.num_edges(), e_keep, rng);
  std::sort(kept.begin(), kept.end());
  return kept;
}

void add_kept(const AffiliationGraph& g, const std::vector<std::size_t>& kept, Scaffold& s) {
  for (std::size_t k : kept) s.edges.push_back(labelled(g, g.edges()[k]));
}

// New node in `fresh_side` attached to a uniformly chosen original node of the
// other partition.
void attach_to_new_node(const AffiliationGraph& g, Partition fresh_side, CounterRng& rng,
                        SyntheticNamer& namer, Scaffold& s) {
  const Partition anchor_side = other(fresh_side);
  const auto anchor = static_cast<std::uint32_t>(rng.below(g.num_nodes(anchor_side)));
  std::string anchor_label = g.labels(anchor_side)[anchor];
  std::string fresh = namer.next(fresh_side);
  if (fresh_side == Partition::Indiv) {
    s.indiv.push_back(fresh);
    s.edges.emplace_back(std::move(fresh), std::move(anchor_label));
  } else {
    s.club.push_back(fresh);
    s.edges.emplace_back(std::move(anchor_label), std::move(fresh));
  }
}

Perturbation finish(const AffiliationGraph& source, const PerturbationSpec& spec, const EdgeBudget& budget,
                    Scaffold&& s, PerturbationReport report) {
  Perturbation out;
  out.graph = AffiliationGraph::from_labels(std::move(s.indiv), std::move(s.club), s.edges);
  report.spec = spec;
  report.budget = budget;
  report.true_edges = 0;
  for (const Edge& e : out.graph.edges()) {
    auto [p, c] = labelled(out.graph, e);
    auto pi = source.find(Partition::Indiv, p);
    auto ci = source.find(Partition::Club, c);
    if (pi && ci && source.has_edge(*pi, *ci)) ++report.true_edges;
  }
  report.false_edges = out.graph.num_edges() - report.true_edges;
  const auto total = static_cast<double>(out.graph.num_edges());
  report.achieved_precision = total > 0 ? static_cast<double>(report.true_edges) / total : 0.0;
  report.achieved_recall = static_cast<double>(report.true_edges) / static_cast<double>(source.num_edges());
  out.report = report;
  return out;
}

void check_nonempty(const AffiliationGraph& g) {
  if (g.num_edges() == 0) throw Error(ErrorCode::EmptyGraph, "cannot perturb a graph without edges");
}

}  // namespace

std::string_view to_string(ErrorModel m) {
  switch (m) {
    case ErrorModel::RandomEdge: return "random";
    case ErrorModel::PreferentialAttachment: return "pref";
    case ErrorModel::NodeAddition: return "node-add";
    case ErrorModel::NodeDisaggregation: return "node-split";
  }
  return "random";
}

ErrorModel error_model_from_string(std::string_view s) {
  for (ErrorModel m : kAllModels) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown error model '" + std::string(s) + "' (random|pref|node-add|node-split)");
}

void PerturbationSpec::validate() const {
  auto ok = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!ok(precision) || !ok(recall)) {
    throw Error(ErrorCode::InvalidArgument, "precision and recall must lie in (0, 1]");
  }
}

std::size_t snapped_floor(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(x));
}

EdgeBudget compute_budget(std::size_t num_edges, double precision, double recall) {
  PerturbationSpec{ErrorModel::RandomEdge, precision, recall, 0}.validate();
  if (num_edges == 0) throw Error(ErrorCode::InvalidArgument, "graph has no edges");
  EdgeBudget b;
  b.e_keep = snapped_floor(recall * static_cast<double>(num_edges));
  if (b.e_keep == 0) {
    throw Error(ErrorCode::BudgetUnderflow,
                "recall " + std::to_string(recall) + " keeps no edges of " + std::to_string(num_edges));
  }
  b.e_add = snapped_floor((1.0 / precision - 1.0) * static_cast<double>(b.e_keep));
  return b;
}

bool is_synthetic(std::string_view label) { return label.starts_with(kSyntheticPrefix); }

Perturbation perturb_random_edge(const AffiliationGraph& g, const PerturbationSpec& spec) {
  spec.validate();
  check_nonempty(g);
  const EdgeBudget budget = compute_budget(g.num_edges(), spec.precision, spec.recall);
  const std::uint64_t pairs = static_cast<std::uint64_t>(g.num_indiv()) * g.num_club();
  const std::uint64_t non_edges = pairs - g.num_edges();
  if (non_edges < budget.e_add) {
    throw Error(ErrorCode::SaturatedGraph,
                std::to_string(budget.e_add) + " false edges requested but only " +
                    std::to_string(non_edges) + " non-edges exist");
  }

  CounterRng removal(spec.seed, Stream::Removal);
  CounterRng addition(spec.seed, Stream::Addition);
  Scaffold s = with_original_nodes(g);
  add_kept(g, keep_uniform(g, budget.e_keep, removal), s);

  const auto nc = static_cast<std::uint64_t>(g.num_club());
  auto push_pair = [&](std::uint64_t idx) {
    s.edges.emplace_back(g.labels(Partition::Indiv)[idx / nc], g.labels(Partition::Club)[idx % nc]);
  };
  if (pairs <= kEnumerateLimit) {
    std::vector<std::uint64_t> candidates;
    candidates.reserve(non_edges);
    for (std::uint64_t idx = 0; idx < pairs; ++idx) {
      if (!g.has_edge(static_cast<std::uint32_t>(idx / nc), static_cast<std::uint32_t>(idx % nc))) {
        candidates.push_back(idx);
      }
    }
    for (std::size_t k : sample_without_replacement(candidates.size(), budget.e_add, addition)) {
      push_pair(candidates[k]);
    }
  } else {
    // Rejection over the full pair space is uniform over the non-edges.
    std::unordered_set<std::uint64_t> chosen;
    while (chosen.size() < budget.e_add) {
      const std::uint64_t idx = addition.below(pairs);
      if (g.has_edge(static_cast<std::uint32_t>(idx / nc), static_cast<std::uint32_t>(idx % nc))) continue;
      if (chosen.insert(idx).second) push_pair(idx);
    }
  }
  return finish(g, spec, budget, std::move(s), {});
}

DegreeSampler::DegreeSampler(const AffiliationGraph& g, Partition p) {
  cumulative_.reserve(g.num_nodes(p));
  std::uint64_t acc = 0;
  for (std::uint32_t v = 0; v < g.num_nodes(p); ++v) {
    acc += g.degree(p, v);
    cumulative_.push_back(acc);
  }
}

std::uint32_t DegreeSampler::draw(CounterRng& rng) const {
  const std::uint64_t r = rng.below(total_degree());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return static_cast<std::uint32_t>(it - cumulative_.begin());
}

Perturbation perturb_preferential(const AffiliationGraph& g, const PerturbationSpec& spec) {
  spec.validate();
  check_nonempty(g);
  const EdgeBudget budget = compute_budget(g.num_edges(), spec.precision, spec.recall);
  CounterRng removal(spec.seed, Stream::Removal);
  CounterRng endpoint(spec.seed, Stream::Endpoint);
  Scaffold s = with_original_nodes(g);
  add_kept(g, keep_uniform(g, budget.e_keep, removal), s);

  const DegreeSampler indiv(g, Partition::Indiv), club(g, Partition::Club);
  const std::uint64_t cap = kStallFactor * budget.e_add;
  std::unordered_set<std::uint64_t> chosen;
  PerturbationReport report;
  std::uint64_t consecutive = 0;
  while (chosen.size() < budget.e_add) {
    const std::uint32_t i = indiv.draw(endpoint);
    const std::uint32_t c = club.draw(endpoint);
    const std::uint64_t key = static_cast<std::uint64_t>(i) * g.num_club() + c;
    if (g.has_edge(i, c) || chosen.contains(key)) {
      ++report.rejected_draws;
      if (++consecutive >= cap) {
        throw Error(ErrorCode::SamplingStalled,
                    std::to_string(consecutive) + " consecutive rejected draws with " +
                        std::to_string(chosen.size()) + " of " + std::to_string(budget.e_add) +
                        " false edges placed",
                    static_cast<std::int64_t>(report.rejected_draws));
      }
      continue;
    }
    consecutive = 0;
    chosen.insert(key);
    s.edges.emplace_back(g.labels(Partition::Indiv)[i], g.labels(Partition::Club)[c]);
  }
  return finish(g, spec, budget, std::move(s), report);
}

Perturbation perturb_node_addition(const AffiliationGraph& g, const PerturbationSpec& spec) {
  spec.validate();
  check_nonempty(g);
  const EdgeBudget budget = compute_budget(g.num_edges(), spec.precision, spec.recall);
  CounterRng removal(spec.seed, Stream::Removal);
  CounterRng addition(spec.seed, Stream::Addition);
  CounterRng endpoint(spec.seed, Stream::Endpoint);
  Scaffold s = with_original_nodes(g);
  add_kept(g, keep_uniform(g, budget.e_keep, removal), s);

  SyntheticNamer namer(g);
  for (std::size_t k = 0; k < budget.e_add; ++k) {
    // The coin picks the partition of the existing node.
    const Partition anchor = addition.coin() ? Partition::Club : Partition::Indiv;
    attach_to_new_node(g, other(anchor), endpoint, namer, s);
  }
  PerturbationReport report;
  report.synthetic_nodes = namer.created();
  return finish(g, spec, budget, std::move(s), report);
}

Perturbation perturb_node_disaggregation(const AffiliationGraph& g, const PerturbationSpec& spec) {
  spec.validate();
  if (g.num_edges() < 2) {
    throw Error(ErrorCode::InvalidArgument, "node disaggregation needs at least 2 edges");
  }
  const EdgeBudget budget = compute_budget(g.num_edges(), spec.precision, spec.recall);
  CounterRng removal(spec.seed, Stream::Removal);
  CounterRng redirect(spec.seed, Stream::Redirect);
  CounterRng reconcile(spec.seed, Stream::Reconcile);
  PerturbationReport report;

  // (1) edges that stay between their original endpoints
  const std::size_t n_intact = snapped_floor(std::max(spec.precision, spec.recall) *
                                             static_cast<double>(g.num_edges()));
  std::vector<std::size_t> intact = keep_uniform(g, n_intact, removal);
  std::vector<std::size_t> misspelled;
  {
    std::vector<bool> is_intact(g.num_edges(), false);
    for (std::size_t k : intact) is_intact[k] = true;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
      if (!is_intact[k]) misspelled.push_back(k);
    }
  }

  // (2) which endpoint each misspelled edge keeps
  struct Redirect {
    std::size_t edge;
    Partition replaced;
  };
  std::vector<Redirect> redirects;
  redirects.reserve(misspelled.size());
  for (std::size_t k : misspelled) {
    redirects.push_back({k, redirect.coin() ? Partition::Club : Partition::Indiv});
  }
  report.redirected_edges = redirects.size();

  // (3) trim intact edges down to e_keep
  if (intact.size() > budget.e_keep) {
    std::vector<std::size_t> picks = sample_without_replacement(intact.size(), budget.e_keep, removal);
    std::sort(picks.begin(), picks.end());
    std::vector<std::size_t> trimmed;
    trimmed.reserve(picks.size());
    for (std::size_t p : picks) trimmed.push_back(intact[p]);
    intact = std::move(trimmed);
  }

  // (4) reconcile false positives with e_add
  if (redirects.size() > budget.e_add) {
    auto picks = sample_without_replacement(redirects.size(), budget.e_add, reconcile);
    std::sort(picks.begin(), picks.end());
    std::vector<Redirect> kept;
    kept.reserve(picks.size());
    for (std::size_t p : picks) kept.push_back(redirects[p]);
    report.reconciliation_deletions = redirects.size() - kept.size();
    redirects = std::move(kept);
  }

  Scaffold s = with_original_nodes(g);
  add_kept(g, intact, s);
  SyntheticNamer namer(g);
  for (const Redirect& r : redirects) {
    auto [p, c] = labelled(g, g.edges()[r.edge]);
    std::string fresh = namer.next(r.replaced);
    if (r.replaced == Partition::Indiv) {
      s.indiv.push_back(fresh);
      s.edges.emplace_back(std::move(fresh), std::move(c));
    } else {
      s.club.push_back(fresh);
      s.edges.emplace_back(std::move(p), std::move(fresh));
    }
  }
  for (std::size_t k = redirects.size(); k < budget.e_add; ++k) {
    const Partition anchor = reconcile.coin() ? Partition::Club : Partition::Indiv;
    attach_to_new_node(g, other(anchor), reconcile, namer, s);
    ++report.reconciliation_additions;
  }
  report.synthetic_nodes = namer.created();
  return finish(g, spec, budget, std::move(s), report);
}

Perturbation perturb(const AffiliationGraph& g, const PerturbationSpec& spec) {
  switch (spec.model) {
    case ErrorModel::RandomEdge: return perturb_random_edge(g, spec);
    case ErrorModel::PreferentialAttachment: return perturb_preferential(g, spec);
    case ErrorModel::NodeAddition: return perturb_node_addition(g, spec);
    case ErrorModel::NodeDisaggregation: return perturb_node_disaggregation(g, spec);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown error model");
}

double overestimation_pct(const AffiliationGraph& truth, const AffiliationGraph& extracted, CountKind what) {
  const auto count = [what](const AffiliationGraph& g) {
    return static_cast<double>(what == CountKind::Nodes ? g.num_nodes() : g.num_edges());
  };
  if (count(truth) == 0) throw Error(ErrorCode::EmptyGraph, "truth graph has nothing to compare against");
  return 100.0 * (count(extracted) - count(truth)) / count(truth);
}

}  // namespace affilkg
