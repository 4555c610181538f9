#include "affilkg/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "affilkg/error.hpp"

namespace affilkg {

namespace {

int bin_rank(F1Bin b) {
  switch (b) {
    case F1Bin::Top: return 0;
    case F1Bin::High: return 1;
    case F1Bin::Mid: return 2;
    case F1Bin::Low: return 3;
    case F1Bin::BelowRange: return 4;
  }
  return 4;
}

// Values are summed in sorted order so the mean does not depend on the
// order records arrive in.
struct Accumulator {
  std::vector<double> values;

  void add(double x) { values.push_back(x); }
  std::size_t size() const { return values.size(); }
  double mean() const {
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  }
};

}  // namespace

BiasRecord bias_record(std::string_view metric, double truth, double extracted, double f1,
                       std::string graph_id, std::string run_id) {
  if (!std::isfinite(truth) || !std::isfinite(extracted)) {
    throw Error(ErrorCode::InvalidArgument, "metric values must be finite");
  }
  BiasRecord r;
  r.metric = metric;
  r.truth = truth;
  r.extracted = extracted;
  r.f1 = f1;
  r.bin = f1_bin(f1);
  r.graph_id = std::move(graph_id);
  r.run_id = std::move(run_id);
  if (truth != 0.0) {
    r.rel_bias = (extracted - truth) / truth;
    r.rel_mae = std::abs(*r.rel_bias);
  }
  return r;
}

BiasRecord error_record(std::string_view metric, double value, double f1, std::string graph_id,
                        std::string run_id) {
  BiasRecord r;
  r.metric = metric;
  r.truth = 0.0;
  r.extracted = value;
  r.rel_mae = value;
  r.f1 = f1;
  r.bin = f1_bin(f1);
  r.graph_id = std::move(graph_id);
  r.run_id = std::move(run_id);
  return r;
}

const BiasRow* BiasTable::find(F1Bin bin, std::string_view metric) const {
  for (const auto& row : rows) {
    if (row.bin == bin && row.metric == metric) return &row;
  }
  return nullptr;
}

BiasTable aggregate(std::span<const BiasRecord> records) {
  struct PerGraph {
    Accumulator bias, mae;
  };
  // (bin rank, metric) -> graph id -> sums
  std::map<std::pair<int, std::string>, std::map<std::string, PerGraph>> groups;
  BiasTable table;
  for (const BiasRecord& r : records) {
    if (!r.rel_mae) {
      ++table.skipped_records;
      continue;
    }
    auto& g = groups[{bin_rank(r.bin), r.metric}][r.graph_id];
    g.mae.add(*r.rel_mae);
    if (r.rel_bias) g.bias.add(*r.rel_bias);
  }
  for (const auto& [key, graphs] : groups) {
    BiasRow row;
    static constexpr F1Bin kByRank[] = {F1Bin::Top, F1Bin::High, F1Bin::Mid, F1Bin::Low,
                                        F1Bin::BelowRange};
    row.bin = kByRank[key.first];
    row.metric = key.second;
    Accumulator bias, mae;
    for (const auto& [id, g] : graphs) {
      mae.add(g.mae.mean());
      row.n += g.mae.size();
      if (g.bias.size() > 0) bias.add(g.bias.mean());
    }
    row.mean_rel_mae = mae.mean();
    if (bias.size() > 0) {
      row.mean_rel_bias = bias.mean();
      if (row.mean_rel_mae + 1e-12 < std::abs(*row.mean_rel_bias)) {
        throw Error(ErrorCode::InvalidArgument,
                    "row " + row.metric + " has mean rel_mae below |mean rel_bias|");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

SignFractions sign_consistency(std::span<const BiasRecord> records, std::string_view metric) {
  std::size_t total = 0, neg = 0, pos = 0;
  for (const BiasRecord& r : records) {
    if (r.metric != metric || !r.rel_bias) continue;
    ++total;
    if (*r.rel_bias < 0) ++neg;
    if (*r.rel_bias > 0) ++pos;
  }
  if (total == 0) throw Error(ErrorCode::NoData, "no records with a defined bias for " + std::string(metric));
  return {static_cast<double>(neg) / static_cast<double>(total),
          static_cast<double>(pos) / static_cast<double>(total)};
}

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const BiasTable& table) {
  std::string out = "bin,metric,mean_rel_bias,mean_rel_mae,n\n";
  for (const auto& row : table.rows) {
    // Bin labels contain a comma, so they are always quoted.
    out += "\"" + std::string(to_string(row.bin)) + "\"," + row.metric + ",";
    if (row.mean_rel_bias) out += format_number(*row.mean_rel_bias);
    out += "," + format_number(row.mean_rel_mae) + "," + std::to_string(row.n) + "\n";
  }
  return out;
}

}  // namespace affilkg
