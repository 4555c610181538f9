#include "affilkg/generate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "affilkg/error.hpp"
#include "affilkg/rng.hpp"

namespace affilkg {

namespace {

std::string padded(std::string_view prefix, std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return std::string(prefix) + digits;
}

}  // namespace

AffiliationGraph generate_affiliation_graph(const GeneratorConfig& cfg) {
  if (cfg.num_indiv == 0 || cfg.num_club == 0) {
    throw Error(ErrorCode::InvalidArgument, "generator needs at least one node per partition");
  }
  if (!(cfg.zipf_exponent >= 0.0) || !(cfg.mean_extra_memberships >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "generator parameters must be non-negative");
  }
  CounterRng root(cfg.seed, Stream::Generate);
  CounterRng degree_rng = root.split(1);
  CounterRng club_rng = root.split(2);
  CounterRng fill_rng = root.split(3);

  std::vector<double> cumulative(cfg.num_club);
  double total = 0.0;
  for (std::size_t c = 0; c < cfg.num_club; ++c) {
    total += std::pow(static_cast<double>(c + 1), -cfg.zipf_exponent);
    cumulative[c] = total;
  }
  auto draw_club = [&]() {
    const double x = club_rng.unit() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                            static_cast<std::ptrdiff_t>(cfg.num_club) - 1));
  };

  const double stop = 1.0 / (1.0 + cfg.mean_extra_memberships);
  std::vector<std::vector<bool>> member(cfg.num_indiv, std::vector<bool>(cfg.num_club, false));
  std::vector<std::size_t> club_size(cfg.num_club, 0);
  for (std::size_t i = 0; i < cfg.num_indiv; ++i) {
    std::size_t d = 1;
    while (d < cfg.num_club && degree_rng.unit() >= stop) ++d;
    for (std::size_t k = 0; k < d;) {
      const std::size_t c = draw_club();
      if (member[i][c]) continue;
      member[i][c] = true;
      ++club_size[c];
      ++k;
    }
  }
  for (std::size_t c = 0; c < cfg.num_club; ++c) {
    if (club_size[c] > 0) continue;
    member[fill_rng.below(cfg.num_indiv)][c] = true;
  }

  GraphBuilder b;
  for (std::size_t i = 0; i < cfg.num_indiv; ++i) {
    const std::string person = padded("person-", i, cfg.num_indiv);
    for (std::size_t c = 0; c < cfg.num_club; ++c) {
      if (member[i][c]) b.add_edge(person, padded("club-", c, cfg.num_club));
    }
  }
  return std::move(b).build();
}

}  // namespace affilkg
