#include "affilkg/kernels.hpp"

#include <algorithm>
#include <limits>

#ifdef AFFILKG_HAVE_OPENMP
#include <omp.h>
#endif

namespace affilkg::kernels {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// BFS from `source`, accumulating into `totals`. `dist` and `queue` are
// scratch buffers sized to the node count.
void bfs_from(const Csr& adj, std::uint32_t source, std::vector<std::uint32_t>& dist,
              std::vector<std::uint32_t>& queue, PathTotals& totals) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    const std::uint32_t du = dist[u];
    if (u != source) {
      totals.distance_sum += du;
      ++totals.reachable_pairs;
      totals.max_distance = std::max(totals.max_distance, du);
    }
    for (std::uint32_t v : adj.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = du + 1;
        queue.push_back(v);
      }
    }
  }
}

// Triangles through u: pairs of neighbors of u that are adjacent.
// `mark` must be all zero on entry and is left all zero.
std::uint64_t triangles_at(const Csr& adj, std::uint32_t u, std::vector<std::uint8_t>& mark) {
  auto nu = adj.neighbors(u);
  for (std::uint32_t v : nu) mark[v] = 1;
  std::uint64_t closed = 0;
  for (std::uint32_t v : nu) {
    for (std::uint32_t w : adj.neighbors(v)) closed += mark[w];
  }
  for (std::uint32_t v : nu) mark[v] = 0;
  return closed / 2;
}

// Projected neighbors of `pos` with a larger position, sorted.
void projected_row(const AffiliationGraph& g, Partition onto, std::uint32_t pos,
                   std::vector<std::uint8_t>& seen, std::vector<std::uint32_t>& row) {
  row.clear();
  for (std::uint32_t mid : g.neighbors(onto, pos)) {
    for (std::uint32_t w : g.neighbors(other(onto), mid)) {
      if (w > pos && !seen[w]) {
        seen[w] = 1;
        row.push_back(w);
      }
    }
  }
  for (std::uint32_t w : row) seen[w] = 0;
  std::sort(row.begin(), row.end());
}

}  // namespace

namespace serial {

PathTotals all_pairs_bfs(const Csr& adj) {
  const std::size_t n = adj.num_nodes();
  PathTotals totals;
  std::vector<std::uint32_t> dist(n), queue;
  queue.reserve(n);
  for (std::uint32_t s = 0; s < n; ++s) bfs_from(adj, s, dist, queue, totals);
  return totals;
}

std::vector<std::uint64_t> triangles_per_node(const Csr& adj) {
  const std::size_t n = adj.num_nodes();
  std::vector<std::uint64_t> out(n);
  std::vector<std::uint8_t> mark(n, 0);
  for (std::uint32_t u = 0; u < n; ++u) out[u] = triangles_at(adj, u, mark);
  return out;
}

EdgeList projection_edges(const AffiliationGraph& g, Partition onto) {
  const std::size_t n = g.num_nodes(onto);
  EdgeList out;
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> row;
  for (std::uint32_t u = 0; u < n; ++u) {
    projected_row(g, onto, u, seen, row);
    for (std::uint32_t w : row) out.emplace_back(u, w);
  }
  return out;
}

}  // namespace serial

namespace parallel {

PathTotals all_pairs_bfs(const Csr& adj) {
  const auto n = static_cast<std::int64_t>(adj.num_nodes());
  std::uint64_t sum = 0, pairs = 0;
  std::uint32_t diameter = 0;
#pragma omp parallel reduction(+ : sum, pairs) reduction(max : diameter)
  {
    std::vector<std::uint32_t> dist(static_cast<std::size_t>(n)), queue;
    queue.reserve(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t s = 0; s < n; ++s) {
      PathTotals local;
      bfs_from(adj, static_cast<std::uint32_t>(s), dist, queue, local);
      sum += local.distance_sum;
      pairs += local.reachable_pairs;
      diameter = std::max(diameter, local.max_distance);
    }
  }
  return {sum, diameter, pairs};
}

std::vector<std::uint64_t> triangles_per_node(const Csr& adj) {
  const auto n = static_cast<std::int64_t>(adj.num_nodes());
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(n), 0);
#pragma omp for schedule(dynamic, 32)
    for (std::int64_t u = 0; u < n; ++u) {
      out[static_cast<std::size_t>(u)] = triangles_at(adj, static_cast<std::uint32_t>(u), mark);
    }
  }
  return out;
}

EdgeList projection_edges(const AffiliationGraph& g, Partition onto) {
  const auto n = static_cast<std::int64_t>(g.num_nodes(onto));
  std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::uint32_t> row;
#pragma omp for schedule(dynamic, 32)
    for (std::int64_t u = 0; u < n; ++u) {
      projected_row(g, onto, static_cast<std::uint32_t>(u), seen, row);
      rows[static_cast<std::size_t>(u)] = row;
    }
  }
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  EdgeList out;
  out.reserve(total);
  for (std::uint32_t u = 0; u < rows.size(); ++u) {
    for (std::uint32_t w : rows[u]) out.emplace_back(u, w);
  }
  return out;
}

}  // namespace parallel

int max_threads() {
#ifdef AFFILKG_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#ifdef AFFILKG_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace affilkg::kernels
