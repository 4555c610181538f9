#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affilkg/normalize.hpp"

namespace affilkg {

enum class Partition : std::uint8_t { Indiv, Club };

constexpr Partition other(Partition p) {
  return p == Partition::Indiv ? Partition::Club : Partition::Indiv;
}

std::string_view to_string(Partition p);
Partition partition_from_string(std::string_view s);

// Nodes order by label first so that "lexicographically smallest member"
// is well defined across partitions.
struct NodeId {
  Partition partition = Partition::Indiv;
  std::string label;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
    if (auto c = a.label <=> b.label; c != 0) return c;
    return a.partition <=> b.partition;
  }
};

struct EdgeTuple {
  std::string person;
  std::string relation = "member";
  std::string club;
  std::optional<std::int64_t> source_line;

  friend bool operator==(const EdgeTuple&, const EdgeTuple&) = default;
};

// Edge between indiv node `indiv` and club node `club`, both positions in
// the graph's sorted label arrays.
struct Edge {
  std::uint32_t indiv = 0;
  std::uint32_t club = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Compressed adjacency over dense node ids [0, num_nodes).
struct Csr {
  std::vector<std::uint32_t> offsets;  // size num_nodes + 1
  std::vector<std::uint32_t> targets;

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }
  std::size_t degree(std::uint32_t u) const { return offsets[u + 1] - offsets[u]; }

  // Symmetric CSR from an undirected edge list; neighbor lists sorted.
  static Csr from_undirected(std::size_t num_nodes,
                             std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);
};

// Bipartite affiliation graph. Immutable once built: label arrays sorted and
// unique per partition, edges sorted and unique.
//
// Unified node ids: indiv i -> i, club j -> num_indiv() + j. All whole-graph
// algorithms (components, BFS, communities) work on this numbering.
class AffiliationGraph {
 public:
  AffiliationGraph() = default;

  // Sorts and deduplicates; endpoints missing from the label lists are added.
  static AffiliationGraph from_labels(std::vector<std::string> indiv,
                                      std::vector<std::string> club,
                                      std::span<const std::pair<std::string, std::string>> edges);

  std::size_t num_indiv() const { return indiv_.size(); }
  std::size_t num_club() const { return club_.size(); }
  std::size_t num_nodes() const { return indiv_.size() + club_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_nodes(Partition p) const { return p == Partition::Indiv ? num_indiv() : num_club(); }

  std::span<const std::string> labels(Partition p) const {
    return p == Partition::Indiv ? std::span<const std::string>(indiv_)
                                 : std::span<const std::string>(club_);
  }
  std::span<const Edge> edges() const { return edges_; }

  std::optional<std::uint32_t> find(Partition p, std::string_view label) const;
  bool contains(const NodeId& v) const { return find(v.partition, v.label).has_value(); }
  bool has_edge(std::uint32_t indiv, std::uint32_t club) const;

  // Neighbors of a node given by its position within partition p. Returned
  // positions are in the opposite partition, sorted.
  std::span<const std::uint32_t> neighbors(Partition p, std::uint32_t pos) const;
  std::size_t degree(Partition p, std::uint32_t pos) const { return neighbors(p, pos).size(); }
  std::size_t degree(const NodeId& v) const;

  std::uint32_t unified(Partition p, std::uint32_t pos) const {
    return p == Partition::Indiv ? pos : static_cast<std::uint32_t>(num_indiv()) + pos;
  }
  NodeId node(std::uint32_t unified_id) const;
  const std::string& label(std::uint32_t unified_id) const;

  // Adjacency on unified ids.
  Csr unified_csr() const;

  // Same graph minus zero-degree nodes.
  AffiliationGraph without_isolated() const;

  friend bool operator==(const AffiliationGraph& a, const AffiliationGraph& b) {
    return a.indiv_ == b.indiv_ && a.club_ == b.club_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency();

  std::vector<std::string> indiv_;
  std::vector<std::string> club_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> indiv_offsets_, indiv_adj_;
  std::vector<std::uint32_t> club_offsets_, club_adj_;
};

// Incremental construction by label.
class GraphBuilder {
 public:
  void add_node(Partition p, std::string label);
  void add_edge(std::string indiv, std::string club);
  AffiliationGraph build() &&;

 private:
  std::vector<std::string> indiv_;
  std::vector<std::string> club_;
  std::vector<std::pair<std::string, std::string>> edges_;
};

// Normalizes both entity fields and collapses repeats. Throws EmptyInput or
// MalformedTuple(index) for an empty field or one that normalizes to nothing.
AffiliationGraph build_graph(std::span<const EdgeTuple> tuples, const NormalizationConfig& cfg);

// One tuple per edge, in edge order.
std::vector<EdgeTuple> graph_to_tuples(const AffiliationGraph& g);

std::size_t degree(const AffiliationGraph& g, const NodeId& v);

// Component id per unified node; ids are dense, in order of first appearance
// by unified id.
std::vector<std::uint32_t> component_ids(const Csr& adj, std::size_t* count = nullptr);

// Components sorted by descending size, then by smallest member.
std::vector<std::vector<NodeId>> connected_components(const AffiliationGraph& g);

}  // namespace affilkg
