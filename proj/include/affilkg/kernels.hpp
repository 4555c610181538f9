#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "affilkg/graph.hpp"

// Hot loops of the metric suite. Each kernel has a serial reference and an
// OpenMP version; the two must agree bit for bit, which holds because every
// reduction is over integers or happens serially after the parallel region.
namespace affilkg::kernels {

struct PathTotals {
  std::uint64_t distance_sum = 0;  // over ordered pairs (u, v), u != v
  std::uint32_t max_distance = 0;
  std::uint64_t reachable_pairs = 0;  // ordered pairs at finite distance
};

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

namespace serial {
PathTotals all_pairs_bfs(const Csr& adj);
std::vector<std::uint64_t> triangles_per_node(const Csr& adj);
EdgeList projection_edges(const AffiliationGraph& g, Partition onto);
}  // namespace serial

namespace parallel {
PathTotals all_pairs_bfs(const Csr& adj);
std::vector<std::uint64_t> triangles_per_node(const Csr& adj);
EdgeList projection_edges(const AffiliationGraph& g, Partition onto);
}  // namespace parallel

// Threads the parallel kernels use (1 when built without OpenMP).
int max_threads();
void set_num_threads(int n);

}  // namespace affilkg::kernels
