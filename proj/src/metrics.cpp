#include "affilkg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "affilkg/error.hpp"
#include "affilkg/kernels.hpp"

namespace affilkg {

namespace {

void require_partition(const AffiliationGraph& g, Partition p) {
  if (g.num_nodes(p) == 0) {
    throw Error(ErrorCode::EmptyPartition, std::string(to_string(p)) + " partition is empty");
  }
}

template <typename F>
auto optional_of(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

DegreeStats degree_stats(const AffiliationGraph& g, Partition partition) {
  require_partition(g, partition);
  const std::size_t n = g.num_nodes(partition);
  double sum = 0.0;
  for (std::uint32_t v = 0; v < n; ++v) sum += static_cast<double>(g.degree(partition, v));
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const double d = static_cast<double>(g.degree(partition, v)) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / static_cast<double>(n))};
}

double bipartite_density(const AffiliationGraph& g) {
  require_partition(g, Partition::Indiv);
  require_partition(g, Partition::Club);
  return static_cast<double>(g.num_edges()) /
         (static_cast<double>(g.num_indiv()) * static_cast<double>(g.num_club()));
}

double rmae_club_degrees(const AffiliationGraph& truth, const AffiliationGraph& extracted,
                         RmaeScope scope) {
  if (scope.top_k && *scope.top_k == 0) throw Error(ErrorCode::InvalidArgument, "top-k must be >= 1");
  struct Club {
    std::size_t degree;
    std::uint32_t pos;
  };
  std::vector<Club> clubs;
  for (std::uint32_t c = 0; c < truth.num_club(); ++c) {
    if (auto d = truth.degree(Partition::Club, c); d > 0) clubs.push_back({d, c});
  }
  if (clubs.empty()) throw Error(ErrorCode::EmptyPartition, "truth graph has no clubs with members");
  if (scope.top_k && *scope.top_k < clubs.size()) {
    // Positions follow label order, so a stable sort breaks ties by label.
    std::stable_sort(clubs.begin(), clubs.end(),
                     [](const Club& a, const Club& b) { return a.degree > b.degree; });
    clubs.resize(*scope.top_k);
  }
  auto truth_labels = truth.labels(Partition::Club);
  double sum = 0.0;
  for (const Club& c : clubs) {
    const auto pos = extracted.find(Partition::Club, truth_labels[c.pos]);
    const double got = pos ? static_cast<double>(extracted.degree(Partition::Club, *pos)) : 0.0;
    const double want = static_cast<double>(c.degree);
    sum += std::abs(got - want) / want;
  }
  return sum / static_cast<double>(clubs.size());
}

std::vector<std::uint32_t> largest_component(const AffiliationGraph& g) {
  if (g.num_nodes() == 0) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
  std::size_t count = 0;
  const auto comp = component_ids(g.unified_csr(), &count);
  std::vector<std::size_t> size(count, 0);
  std::vector<std::uint32_t> smallest(count, static_cast<std::uint32_t>(-1));
  for (std::uint32_t u = 0; u < comp.size(); ++u) {
    ++size[comp[u]];
    auto& s = smallest[comp[u]];
    if (s == static_cast<std::uint32_t>(-1) || g.node(u) < g.node(s)) s = u;
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < count; ++c) {
    if (size[c] > size[best] || (size[c] == size[best] && g.node(smallest[c]) < g.node(smallest[best]))) {
      best = c;
    }
  }
  std::vector<std::uint32_t> members;
  members.reserve(size[best]);
  for (std::uint32_t u = 0; u < comp.size(); ++u) {
    if (comp[u] == best) members.push_back(u);
  }
  return members;
}

ComponentSummary component_metrics(const AffiliationGraph& g) {
  if (g.num_nodes() == 0) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
  std::size_t count = 0;
  component_ids(g.unified_csr(), &count);
  const std::size_t largest = largest_component(g).size();
  ComponentSummary s;
  s.num_components = count;
  s.prop_largest = static_cast<double>(largest) / static_cast<double>(g.num_nodes());
  s.avg_rest_size = count > 1 ? static_cast<double>(g.num_nodes() - largest) / static_cast<double>(count - 1)
                              : 0.0;
  return s;
}

PathSummary path_metrics(const AffiliationGraph& g) {
  const auto members = largest_component(g);
  if (members.size() < 2) {
    throw Error(ErrorCode::DegenerateComponent, "largest component is a single node");
  }
  // Induced subgraph on the component, renumbered densely.
  const Csr full = g.unified_csr();
  std::vector<std::uint32_t> local(g.num_nodes(), static_cast<std::uint32_t>(-1));
  for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
  Csr sub;
  sub.offsets.reserve(members.size() + 1);
  sub.offsets.push_back(0);
  for (std::uint32_t u : members) {
    for (std::uint32_t v : full.neighbors(u)) sub.targets.push_back(local[v]);
    sub.offsets.push_back(static_cast<std::uint32_t>(sub.targets.size()));
  }
  const auto totals = kernels::parallel::all_pairs_bfs(sub);
  const double n = static_cast<double>(members.size());
  // Ordered-pair sum over ordered-pair count equals the unordered average.
  return {totals.max_distance, static_cast<double>(totals.distance_sum) / (n * (n - 1.0))};
}

std::vector<std::uint32_t> greedy_modularity_communities(const AffiliationGraph& g) {
  const std::size_t n = g.num_nodes();
  const Csr adj = g.unified_csr();
  const auto two_m = static_cast<std::int64_t>(2 * g.num_edges());

  std::vector<std::int64_t> total_degree(n);
  std::vector<std::map<std::uint32_t, std::int64_t>> links(n);
  std::vector<std::uint32_t> owner(n);  // node -> community
  for (std::uint32_t u = 0; u < n; ++u) {
    owner[u] = u;
    total_degree[u] = static_cast<std::int64_t>(adj.degree(u));
    for (std::uint32_t v : adj.neighbors(u)) links[u][v] += 1;
  }

  auto score = [&](std::uint32_t i, std::uint32_t j, std::int64_t l) {
    return two_m * l - total_degree[i] * total_degree[j];
  };

  // Best merge partner per row; pair ordering (min, max) is the tie-breaker.
  struct Best {
    std::int64_t score = 0;
    std::uint32_t lo = 0, hi = 0;
    bool valid = false;
  };
  auto better = [](const Best& a, const Best& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
  };
  std::vector<Best> best(n);
  auto refresh = [&](std::uint32_t i) {
    Best b;
    for (const auto& [j, l] : links[i]) {
      Best cand{score(i, j, l), std::min(i, j), std::max(i, j), true};
      if (better(cand, b)) b = cand;
    }
    best[i] = b;
  };
  for (std::uint32_t i = 0; i < n; ++i) refresh(i);

  std::vector<bool> alive(n, true);
  while (true) {
    Best top;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (alive[i] && better(best[i], top)) top = best[i];
    }
    if (!top.valid || top.score <= 0) break;

    const std::uint32_t keep = top.lo, gone = top.hi;
    auto& into = links[keep];
    into.erase(gone);
    for (const auto& [k, l] : links[gone]) {
      if (k == keep) continue;
      into[k] += l;
      auto& row = links[k];
      row.erase(gone);
      row[keep] += l;
    }
    links[gone].clear();
    total_degree[keep] += total_degree[gone];
    total_degree[gone] = 0;
    alive[gone] = false;
    best[gone] = {};
    for (std::uint32_t u = 0; u < n; ++u) {
      if (owner[u] == gone) owner[u] = keep;
    }
    refresh(keep);
    for (const auto& [k, l] : into) refresh(k);
  }

  // Dense relabel by smallest member.
  std::vector<std::uint32_t> label(n, static_cast<std::uint32_t>(-1));
  std::vector<std::uint32_t> out(n);
  std::uint32_t next = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    auto& l = label[owner[u]];
    if (l == static_cast<std::uint32_t>(-1)) l = next++;
    out[u] = l;
  }
  return out;
}

double modularity(const Csr& adj, const std::vector<std::uint32_t>& community) {
  const std::size_t n = adj.num_nodes();
  const double two_m = static_cast<double>(adj.targets.size());
  if (two_m == 0) return 0.0;
  std::uint32_t k = 0;
  for (auto c : community) k = std::max(k, c + 1);
  std::vector<double> internal(k, 0.0), total(k, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    total[community[u]] += static_cast<double>(adj.degree(u));
    for (std::uint32_t v : adj.neighbors(u)) {
      if (community[v] == community[u]) internal[community[u]] += 1.0;
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < k; ++c) {
    q += internal[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

std::size_t count_communities(const AffiliationGraph& g) {
  if (g.num_edges() == 0) throw Error(ErrorCode::EmptyGraph, "community detection needs at least one edge");
  const auto labels = greedy_modularity_communities(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

const std::vector<std::string_view>& metric_names() {
  static const std::vector<std::string_view> names = {
      "degree_mean_indiv",
      "degree_std_indiv",
      "degree_mean_club",
      "degree_std_club",
      "rmae_all_clubs",
      "rmae_top10_clubs",
      "bipartite_density",
      "num_connected_components",
      "num_communities",
      "prop_largest_cc",
      "avg_shortest_path_largest_cc",
      "diameter_largest_cc",
      "avg_size_rest_components",
      "comembership_density",
      "comembership_avg_clustering",
      "org_density",
      "org_avg_clustering",
  };
  return names;
}

bool is_error_metric(std::string_view name) { return name.starts_with("rmae_"); }

std::vector<MetricValue> flatten(const MetricSuite& s) {
  auto as_real = [](const std::optional<std::int64_t>& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  const auto& names = metric_names();
  return {
      {names[0], s.degree_mean_indiv},
      {names[1], s.degree_std_indiv},
      {names[2], s.degree_mean_club},
      {names[3], s.degree_std_club},
      {names[4], s.rmae_all_clubs},
      {names[5], s.rmae_top10_clubs},
      {names[6], s.bipartite_density},
      {names[7], as_real(s.num_connected_components)},
      {names[8], as_real(s.num_communities)},
      {names[9], s.prop_largest_cc},
      {names[10], s.avg_shortest_path_largest_cc},
      {names[11], as_real(s.diameter_largest_cc)},
      {names[12], s.avg_size_rest_components},
      {names[13], s.comembership_density},
      {names[14], s.comembership_avg_clustering},
      {names[15], s.org_density},
      {names[16], s.org_avg_clustering},
  };
}

SuiteOptions options_for(const std::vector<std::string>& selection) {
  SuiteOptions opt;
  if (selection.empty()) return opt;
  const auto& names = metric_names();
  for (const auto& s : selection) {
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown metric '" + s + "'");
    }
  }
  auto wants = [&](std::initializer_list<std::string_view> any) {
    return std::any_of(selection.begin(), selection.end(), [&](const std::string& s) {
      return std::find(any.begin(), any.end(), s) != any.end();
    });
  };
  opt.communities = wants({"num_communities"});
  opt.paths = wants({"avg_shortest_path_largest_cc", "diameter_largest_cc"});
  opt.projections = wants({"comembership_density", "comembership_avg_clustering", "org_density",
                           "org_avg_clustering"});
  return opt;
}

MetricSuite compute_suite(const AffiliationGraph& g, const AffiliationGraph* truth,
                          const SuiteOptions& options) {
  MetricSuite s;
  if (auto d = optional_of([&] { return degree_stats(g, Partition::Indiv); })) {
    s.degree_mean_indiv = d->mean;
    s.degree_std_indiv = d->std;
  }
  if (auto d = optional_of([&] { return degree_stats(g, Partition::Club); })) {
    s.degree_mean_club = d->mean;
    s.degree_std_club = d->std;
  }
  if (truth) {
    s.rmae_all_clubs = optional_of([&] { return rmae_club_degrees(*truth, g, RmaeScope::all()); });
    s.rmae_top10_clubs = optional_of([&] { return rmae_club_degrees(*truth, g, RmaeScope::top(10)); });
  }
  s.bipartite_density = optional_of([&] { return bipartite_density(g); });
  if (auto c = optional_of([&] { return component_metrics(g); })) {
    s.num_connected_components = static_cast<std::int64_t>(c->num_components);
    s.prop_largest_cc = c->prop_largest;
    s.avg_size_rest_components = c->avg_rest_size;
  }
  if (options.communities) {
    if (auto c = optional_of([&] { return count_communities(g); })) {
      s.num_communities = static_cast<std::int64_t>(*c);
    }
  }
  if (options.paths) {
    if (auto p = optional_of([&] { return path_metrics(g); })) {
      s.diameter_largest_cc = p->diameter;
      s.avg_shortest_path_largest_cc = p->avg_shortest_path;
    }
  }
  if (options.projections) {
    for (Partition onto : {Partition::Indiv, Partition::Club}) {
      auto proj = optional_of([&] { return project(g, onto); });
      if (!proj) continue;
      auto density = optional_of([&] { return projection_density(*proj, options.density); });
      auto clustering = avg_clustering(*proj);
      if (onto == Partition::Indiv) {
        s.comembership_density = density;
        s.comembership_avg_clustering = clustering;
      } else {
        s.org_density = density;
        s.org_avg_clustering = clustering;
      }
    }
  }
  return s;
}

}  // namespace affilkg
