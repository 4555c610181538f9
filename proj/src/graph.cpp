#include "affilkg/graph.hpp"

#include <algorithm>
#include <numeric>

#include "affilkg/error.hpp"

namespace affilkg {

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::uint32_t position(const std::vector<std::string>& sorted, const std::string& label) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), label);
  return static_cast<std::uint32_t>(it - sorted.begin());
}

// Offsets + sorted targets for one side of a bipartite edge list.
void side_csr(std::size_t n, std::span<const Edge> edges, bool by_indiv,
              std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& adj) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(by_indiv ? e.indiv : e.club) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  adj.resize(edges.size());
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  // Edges are sorted by (indiv, club), so both sides come out sorted.
  for (const Edge& e : edges) {
    if (by_indiv) {
      adj[fill[e.indiv]++] = e.club;
    } else {
      adj[fill[e.club]++] = e.indiv;
    }
  }
}

}  // namespace

std::string_view to_string(Partition p) { return p == Partition::Indiv ? "indiv" : "club"; }

Partition partition_from_string(std::string_view s) {
  if (s == "indiv") return Partition::Indiv;
  if (s == "club") return Partition::Club;
  throw Error(ErrorCode::InvalidArgument, "unknown partition '" + std::string(s) + "'");
}

Csr Csr::from_undirected(std::size_t num_nodes,
                         std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  Csr csr;
  csr.offsets.assign(num_nodes + 1, 0);
  for (auto [u, v] : edges) {
    ++csr.offsets[u + 1];
    ++csr.offsets[v + 1];
  }
  std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
  csr.targets.resize(2 * edges.size());
  std::vector<std::uint32_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (auto [u, v] : edges) {
    csr.targets[fill[u]++] = v;
    csr.targets[fill[v]++] = u;
  }
  for (std::size_t u = 0; u < num_nodes; ++u) {
    std::sort(csr.targets.begin() + csr.offsets[u], csr.targets.begin() + csr.offsets[u + 1]);
  }
  return csr;
}

AffiliationGraph AffiliationGraph::from_labels(
    std::vector<std::string> indiv, std::vector<std::string> club,
    std::span<const std::pair<std::string, std::string>> edges) {
  AffiliationGraph g;
  for (const auto& [p, c] : edges) {
    indiv.push_back(p);
    club.push_back(c);
  }
  for (const auto& s : indiv) {
    if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty indiv label");
  }
  for (const auto& s : club) {
    if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty club label");
  }
  sort_unique(indiv);
  sort_unique(club);
  g.indiv_ = std::move(indiv);
  g.club_ = std::move(club);
  g.edges_.reserve(edges.size());
  for (const auto& [p, c] : edges) {
    g.edges_.push_back({position(g.indiv_, p), position(g.club_, c)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
  g.build_adjacency();
  return g;
}

void AffiliationGraph::build_adjacency() {
  side_csr(indiv_.size(), edges_, true, indiv_offsets_, indiv_adj_);
  side_csr(club_.size(), edges_, false, club_offsets_, club_adj_);
}

std::optional<std::uint32_t> AffiliationGraph::find(Partition p, std::string_view label) const {
  const auto& v = p == Partition::Indiv ? indiv_ : club_;
  auto it = std::lower_bound(v.begin(), v.end(), label);
  if (it == v.end() || *it != label) return std::nullopt;
  return static_cast<std::uint32_t>(it - v.begin());
}

bool AffiliationGraph::has_edge(std::uint32_t indiv, std::uint32_t club) const {
  auto adj = neighbors(Partition::Indiv, indiv);
  return std::binary_search(adj.begin(), adj.end(), club);
}

std::span<const std::uint32_t> AffiliationGraph::neighbors(Partition p, std::uint32_t pos) const {
  const auto& off = p == Partition::Indiv ? indiv_offsets_ : club_offsets_;
  const auto& adj = p == Partition::Indiv ? indiv_adj_ : club_adj_;
  return {adj.data() + off[pos], adj.data() + off[pos + 1]};
}

std::size_t AffiliationGraph::degree(const NodeId& v) const {
  auto pos = find(v.partition, v.label);
  if (!pos) {
    throw Error(ErrorCode::NodeNotFound,
                std::string(to_string(v.partition)) + " node '" + v.label + "' not in graph");
  }
  return degree(v.partition, *pos);
}

NodeId AffiliationGraph::node(std::uint32_t unified_id) const {
  if (unified_id < indiv_.size()) return {Partition::Indiv, indiv_[unified_id]};
  return {Partition::Club, club_[unified_id - indiv_.size()]};
}

const std::string& AffiliationGraph::label(std::uint32_t unified_id) const {
  return unified_id < indiv_.size() ? indiv_[unified_id] : club_[unified_id - indiv_.size()];
}

Csr AffiliationGraph::unified_csr() const {
  const auto n_indiv = static_cast<std::uint32_t>(indiv_.size());
  Csr csr;
  csr.offsets.resize(num_nodes() + 1);
  csr.targets.reserve(2 * edges_.size());
  csr.offsets[0] = 0;
  for (std::uint32_t i = 0; i < n_indiv; ++i) {
    for (std::uint32_t c : neighbors(Partition::Indiv, i)) csr.targets.push_back(n_indiv + c);
    csr.offsets[i + 1] = static_cast<std::uint32_t>(csr.targets.size());
  }
  for (std::uint32_t c = 0; c < club_.size(); ++c) {
    for (std::uint32_t i : neighbors(Partition::Club, c)) csr.targets.push_back(i);
    csr.offsets[n_indiv + c + 1] = static_cast<std::uint32_t>(csr.targets.size());
  }
  return csr;
}

AffiliationGraph AffiliationGraph::without_isolated() const {
  std::vector<std::pair<std::string, std::string>> labelled;
  labelled.reserve(edges_.size());
  for (const Edge& e : edges_) labelled.emplace_back(indiv_[e.indiv], club_[e.club]);
  return from_labels({}, {}, labelled);
}

void GraphBuilder::add_node(Partition p, std::string label) {
  (p == Partition::Indiv ? indiv_ : club_).push_back(std::move(label));
}

void GraphBuilder::add_edge(std::string indiv, std::string club) {
  edges_.emplace_back(std::move(indiv), std::move(club));
}

AffiliationGraph GraphBuilder::build() && {
  return AffiliationGraph::from_labels(std::move(indiv_), std::move(club_), edges_);
}

AffiliationGraph build_graph(std::span<const EdgeTuple> tuples, const NormalizationConfig& cfg) {
  if (tuples.empty()) throw Error(ErrorCode::EmptyInput, "no tuples to build a graph from");
  GraphBuilder builder;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const EdgeTuple& t = tuples[i];
    const auto index = static_cast<std::int64_t>(i);
    if (t.person.empty() || t.club.empty()) {
      throw Error(ErrorCode::MalformedTuple, "tuple " + std::to_string(i) + " has an empty field", index);
    }
    try {
      builder.add_edge(normalize_label(t.person, cfg), normalize_label(t.club, cfg));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyAfterNormalization) throw;
      throw Error(ErrorCode::MalformedTuple, "tuple " + std::to_string(i) + ": " + e.what(), index);
    }
  }
  return std::move(builder).build();
}

std::vector<EdgeTuple> graph_to_tuples(const AffiliationGraph& g) {
  std::vector<EdgeTuple> out;
  out.reserve(g.num_edges());
  auto indiv = g.labels(Partition::Indiv);
  auto club = g.labels(Partition::Club);
  for (const Edge& e : g.edges()) out.push_back({indiv[e.indiv], "member", club[e.club], std::nullopt});
  return out;
}

std::size_t degree(const AffiliationGraph& g, const NodeId& v) { return g.degree(v); }

std::vector<std::uint32_t> component_ids(const Csr& adj, std::size_t* count) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  const std::size_t n = adj.num_nodes();
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    queue.clear();
    queue.push_back(s);
    comp[s] = next;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::uint32_t v : adj.neighbors(queue[head])) {
        if (comp[v] == kUnset) {
          comp[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

std::vector<std::vector<NodeId>> connected_components(const AffiliationGraph& g) {
  std::size_t count = 0;
  auto comp = component_ids(g.unified_csr(), &count);
  std::vector<std::vector<NodeId>> out(count);
  for (std::uint32_t u = 0; u < comp.size(); ++u) out[comp[u]].push_back(g.node(u));
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

}  // namespace affilkg
