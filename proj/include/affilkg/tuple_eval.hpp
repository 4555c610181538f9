#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affilkg/graph.hpp"
#include "affilkg/normalize.hpp"

namespace affilkg {

struct EvalOptions {
  NormalizationConfig normalization = NormalizationConfig::defaults();
  // When set, a tuple whose relation is not "member" (case-insensitive)
  // never matches.
  bool require_member_relation = false;
  // Skip the fuzzy pass entirely.
  bool exact_only = false;
};

// All indices refer to positions in the caller's input lists.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t exact_matches = 0;  // pairs found by the first pass
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;  // (predicted, truth)
  std::vector<std::size_t> false_positives;
  std::vector<std::size_t> false_negatives;
  // Inputs dropped as repeats of an earlier tuple after normalization.
  std::vector<std::size_t> duplicate_predicted;
  std::vector<std::size_t> duplicate_truth;
};

// Two-pass one-to-one matching. Pass 1 pairs identical normalized
// (person, club); pass 2 walks the remaining predictions in input order and
// takes the first remaining truth tuple that matches fuzzily. Throws
// EmptyGroundTruth.
EvalReport evaluate_tuples(std::span<const EdgeTuple> predicted, std::span<const EdgeTuple> truth,
                           const EvalOptions& options = {});

// Edge-set comparison of two graphs by label; the exact-matching special
// case used to verify perturbations.
EvalReport evaluate_graphs(const AffiliationGraph& predicted, const AffiliationGraph& truth);

double f1_score(double precision, double recall);

enum class F1Bin { Top, High, Mid, Low, BelowRange };

inline constexpr F1Bin kReportBins[] = {F1Bin::Top, F1Bin::High, F1Bin::Mid, F1Bin::Low};

// [0.92,1.00), [0.84,0.92), [0.76,0.84), [0.40,0.76), else BelowRange.
// f1 == 1.0 falls in the top bin.
F1Bin f1_bin(double f1);
std::string_view to_string(F1Bin bin);
F1Bin f1_bin_from_string(std::string_view label);
// Midpoint of a reporting bin.
double bin_midpoint(F1Bin bin);

// min(n, |FP|) false-positive tuples chosen uniformly without replacement,
// returned in input order.
std::vector<EdgeTuple> sample_false_positives(const EvalReport& report,
                                              std::span<const EdgeTuple> predicted, std::size_t n,
                                              std::uint64_t seed);

}  // namespace affilkg
