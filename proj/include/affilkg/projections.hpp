#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "affilkg/graph.hpp"

namespace affilkg {

// One-mode projection onto a single partition. Nodes are the partition's
// labels in the source graph's order, including nodes with no projected
// edge. Edges (u, v) have u < v and are sorted.
struct ProjectionGraph {
  Partition partition = Partition::Indiv;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  Csr adjacency() const { return Csr::from_undirected(nodes.size(), edges); }
};

enum class DensityConvention {
  Standard,  // 2|E| / (|V|(|V|-1))
  OrderedPairs,  // |E| / (|V|(|V|-1)), edges over ordered pairs
};

DensityConvention density_convention_from_string(std::string_view s);

// u ~ v iff they share a neighbor in the other partition. Throws EmptyPartition.
ProjectionGraph project(const AffiliationGraph& g, Partition onto);

// Throws DegenerateGraph when |V| < 2.
double projection_density(const ProjectionGraph& p,
                          DensityConvention convention = DensityConvention::Standard);

// Mean local clustering over all nodes, zero for degree < 2.
double avg_clustering(const ProjectionGraph& p);

}  // namespace affilkg
