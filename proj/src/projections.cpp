#include "affilkg/projections.hpp"

#include "affilkg/error.hpp"
#include "affilkg/kernels.hpp"

namespace affilkg {

DensityConvention density_convention_from_string(std::string_view s) {
  if (s == "standard") return DensityConvention::Standard;
  if (s == "ordered-pairs") return DensityConvention::OrderedPairs;
  throw Error(ErrorCode::InvalidArgument, "density convention must be 'standard' or 'ordered-pairs'");
}

ProjectionGraph project(const AffiliationGraph& g, Partition onto) {
  if (g.num_nodes(onto) == 0) {
    throw Error(ErrorCode::EmptyPartition,
                "cannot project onto empty " + std::string(to_string(onto)) + " partition");
  }
  ProjectionGraph p;
  p.partition = onto;
  auto labels = g.labels(onto);
  p.nodes.assign(labels.begin(), labels.end());
  p.edges = kernels::parallel::projection_edges(g, onto);
  return p;
}

double projection_density(const ProjectionGraph& p, DensityConvention convention) {
  const double n = static_cast<double>(p.nodes.size());
  if (p.nodes.size() < 2) {
    throw Error(ErrorCode::DegenerateGraph, "projection density needs at least 2 nodes");
  }
  const double factor = convention == DensityConvention::Standard ? 2.0 : 1.0;
  return factor * static_cast<double>(p.edges.size()) / (n * (n - 1.0));
}

double avg_clustering(const ProjectionGraph& p) {
  if (p.nodes.empty()) return 0.0;
  const Csr adj = p.adjacency();
  const auto triangles = kernels::parallel::triangles_per_node(adj);
  double sum = 0.0;
  for (std::uint32_t u = 0; u < adj.num_nodes(); ++u) {
    const double d = static_cast<double>(adj.degree(u));
    if (d < 2) continue;
    sum += 2.0 * static_cast<double>(triangles[u]) / (d * (d - 1.0));
  }
  return sum / static_cast<double>(adj.num_nodes());
}

}  // namespace affilkg
