#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affilkg/tuple_eval.hpp"

namespace affilkg {

struct BiasRecord {
  std::string metric;
  double truth = 0.0;
  double extracted = 0.0;
  // Empty when truth == 0. For error-valued metrics (RMAE) rel_bias is empty
  // and rel_mae holds the metric itself.
  std::optional<double> rel_bias;
  std::optional<double> rel_mae;
  double f1 = 0.0;
  F1Bin bin = F1Bin::BelowRange;
  std::string graph_id;
  std::string run_id;
};

// (extracted - truth) / truth and its magnitude; null fields when truth == 0.
BiasRecord bias_record(std::string_view metric, double truth, double extracted, double f1,
                       std::string graph_id = {}, std::string run_id = {});

// Record for a metric that is already a relative error of the extraction.
BiasRecord error_record(std::string_view metric, double value, double f1, std::string graph_id = {},
                        std::string run_id = {});

struct BiasRow {
  F1Bin bin = F1Bin::BelowRange;
  std::string metric;
  std::optional<double> mean_rel_bias;
  double mean_rel_mae = 0.0;
  std::size_t n = 0;  // records contributing to mean_rel_mae
};

struct BiasTable {
  std::vector<BiasRow> rows;  // ordered by bin (best first), then metric name
  std::size_t skipped_records = 0;  // records with no defined relative error

  const BiasRow* find(F1Bin bin, std::string_view metric) const;
};

// Means per (bin, metric). Within a row, records are first averaged per
// graph_id and those per-graph means are then averaged, so each graph counts
// once. Throws if a row would violate mean rel_mae >= |mean rel_bias|.
BiasTable aggregate(std::span<const BiasRecord> records);

struct SignFractions {
  double negative = 0.0;
  double positive = 0.0;
};

// Throws NoData when no record of `metric` has a defined rel_bias.
SignFractions sign_consistency(std::span<const BiasRecord> records, std::string_view metric);

// "bin,metric,mean_rel_bias,mean_rel_mae,n" with shortest round-trip numbers.
std::string to_csv(const BiasTable& table);
std::string format_number(double x);

}  // namespace affilkg
