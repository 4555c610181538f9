#pragma once

#include <cstddef>
#include <cstdint>

#include "affilkg/graph.hpp"

namespace affilkg {

// Random affiliation graph with Zipf-distributed club popularity, so club
// sizes are heavy tailed while person degrees stay small.
struct GeneratorConfig {
  std::size_t num_indiv = 500;
  std::size_t num_club = 100;
  double zipf_exponent = 1.1;            // club weight (rank + 1)^-exponent
  double mean_extra_memberships = 2.5;   // person degree is 1 + Geometric(mean)
  std::uint64_t seed = 1;
};

// Every node has at least one edge. Labels are "person-0000" and
// "club-000" style, zero padded to sort numerically.
AffiliationGraph generate_affiliation_graph(const GeneratorConfig& cfg);

}  // namespace affilkg
