#include "affilkg/tuple_eval.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "affilkg/error.hpp"
#include "affilkg/rng.hpp"

namespace affilkg {

namespace {

struct Prepared {
  std::size_t input_index;
  std::string person;
  std::string club;
  bool eligible;  // relation accepted
};

bool is_member(std::string_view relation) {
  if (relation.size() != 6) return false;
  constexpr std::string_view kMember = "member";
  for (std::size_t i = 0; i < 6; ++i) {
    char c = relation[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != kMember[i]) return false;
  }
  return true;
}

std::vector<Prepared> prepare(std::span<const EdgeTuple> tuples, const EvalOptions& opt,
                              std::vector<std::size_t>& duplicates) {
  std::vector<Prepared> out;
  out.reserve(tuples.size());
  std::map<std::tuple<std::string, std::string, bool>, std::size_t> seen;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const EdgeTuple& t = tuples[i];
    const auto index = static_cast<std::int64_t>(i);
    if (t.person.empty() || t.club.empty()) {
      throw Error(ErrorCode::MalformedTuple, "tuple " + std::to_string(i) + " has an empty field", index);
    }
    Prepared p{i, {}, {}, !opt.require_member_relation || is_member(t.relation)};
    try {
      p.person = normalize_label(t.person, opt.normalization);
      p.club = normalize_label(t.club, opt.normalization);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyAfterNormalization) throw;
      throw Error(ErrorCode::MalformedTuple, "tuple " + std::to_string(i) + ": " + e.what(), index);
    }
    if (!seen.emplace(std::make_tuple(p.person, p.club, p.eligible), i).second) {
      duplicates.push_back(i);
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

void finish(EvalReport& r, std::size_t n_pred, std::size_t n_truth) {
  r.true_positives = r.matched_pairs.size();
  r.precision = n_pred == 0 ? 0.0 : static_cast<double>(r.true_positives) / static_cast<double>(n_pred);
  r.recall = n_truth == 0 ? 0.0 : static_cast<double>(r.true_positives) / static_cast<double>(n_truth);
  r.f1 = f1_score(r.precision, r.recall);
  std::sort(r.matched_pairs.begin(), r.matched_pairs.end());
  std::sort(r.false_positives.begin(), r.false_positives.end());
  std::sort(r.false_negatives.begin(), r.false_negatives.end());
}

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport evaluate_tuples(std::span<const EdgeTuple> predicted, std::span<const EdgeTuple> truth,
                           const EvalOptions& options) {
  if (truth.empty()) throw Error(ErrorCode::EmptyGroundTruth, "ground-truth tuple list is empty");
  EvalReport report;
  auto pred = prepare(predicted, options, report.duplicate_predicted);
  auto gold = prepare(truth, options, report.duplicate_truth);

  std::vector<bool> pred_used(pred.size(), false), gold_used(gold.size(), false);

  // Pass 1: identical normalized entities. Truth keys are unique after
  // prepare(), so the first hit is the only one.
  std::map<std::pair<std::string_view, std::string_view>, std::size_t> gold_index;
  for (std::size_t j = 0; j < gold.size(); ++j) {
    if (gold[j].eligible) gold_index.emplace(std::pair<std::string_view, std::string_view>(gold[j].person, gold[j].club), j);
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred[i].eligible) continue;
    auto it = gold_index.find({pred[i].person, pred[i].club});
    if (it == gold_index.end() || gold_used[it->second]) continue;
    pred_used[i] = gold_used[it->second] = true;
    report.matched_pairs.emplace_back(pred[i].input_index, gold[it->second].input_index);
  }
  report.exact_matches = report.matched_pairs.size();

  // Pass 2: fuzzy, first remaining truth tuple in input order.
  if (!options.exact_only) {
    const auto& cfg = options.normalization;
    std::vector<std::size_t> open_gold;
    std::vector<PersonKey> gold_person;
    std::vector<EntityKey> gold_club;
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (gold_used[j] || !gold[j].eligible) continue;
      open_gold.push_back(j);
      gold_person.push_back(PersonKey::make(gold[j].person, cfg));
      gold_club.push_back(EntityKey::make(gold[j].club, cfg));
    }
    std::vector<bool> taken(open_gold.size(), false);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred_used[i] || !pred[i].eligible) continue;
      const PersonKey person = PersonKey::make(pred[i].person, cfg);
      const EntityKey club = EntityKey::make(pred[i].club, cfg);
      for (std::size_t k = 0; k < open_gold.size(); ++k) {
        if (taken[k]) continue;
        if (persons_match(person, gold_person[k], cfg) && entities_match(club, gold_club[k], cfg)) {
          taken[k] = true;
          pred_used[i] = gold_used[open_gold[k]] = true;
          report.matched_pairs.emplace_back(pred[i].input_index, gold[open_gold[k]].input_index);
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred_used[i]) report.false_positives.push_back(pred[i].input_index);
  }
  for (std::size_t j = 0; j < gold.size(); ++j) {
    if (!gold_used[j]) report.false_negatives.push_back(gold[j].input_index);
  }
  finish(report, pred.size(), gold.size());
  return report;
}

EvalReport evaluate_graphs(const AffiliationGraph& predicted, const AffiliationGraph& truth) {
  if (truth.num_edges() == 0) throw Error(ErrorCode::EmptyGroundTruth, "ground-truth graph has no edges");
  EvalReport report;
  auto p_indiv = predicted.labels(Partition::Indiv);
  auto p_club = predicted.labels(Partition::Club);
  auto p_edges = predicted.edges();
  auto t_edges = truth.edges();
  std::vector<bool> gold_used(t_edges.size(), false);
  for (std::size_t i = 0; i < p_edges.size(); ++i) {
    auto ti = truth.find(Partition::Indiv, p_indiv[p_edges[i].indiv]);
    auto tc = truth.find(Partition::Club, p_club[p_edges[i].club]);
    if (ti && tc) {
      Edge key{*ti, *tc};
      auto it = std::lower_bound(t_edges.begin(), t_edges.end(), key);
      if (it != t_edges.end() && *it == key) {
        auto j = static_cast<std::size_t>(it - t_edges.begin());
        gold_used[j] = true;
        report.matched_pairs.emplace_back(i, j);
        continue;
      }
    }
    report.false_positives.push_back(i);
  }
  for (std::size_t j = 0; j < t_edges.size(); ++j) {
    if (!gold_used[j]) report.false_negatives.push_back(j);
  }
  report.exact_matches = report.matched_pairs.size();
  finish(report, p_edges.size(), t_edges.size());
  return report;
}

F1Bin f1_bin(double f1) {
  if (f1 >= 0.92) return F1Bin::Top;
  if (f1 >= 0.84) return F1Bin::High;
  if (f1 >= 0.76) return F1Bin::Mid;
  if (f1 >= 0.40) return F1Bin::Low;
  return F1Bin::BelowRange;
}

std::string_view to_string(F1Bin bin) {
  switch (bin) {
    case F1Bin::Top: return "[0.92,1.00)";
    case F1Bin::High: return "[0.84,0.92)";
    case F1Bin::Mid: return "[0.76,0.84)";
    case F1Bin::Low: return "[0.40,0.76)";
    case F1Bin::BelowRange: return "below";
  }
  return "below";
}

F1Bin f1_bin_from_string(std::string_view label) {
  for (F1Bin b : {F1Bin::Top, F1Bin::High, F1Bin::Mid, F1Bin::Low, F1Bin::BelowRange}) {
    if (to_string(b) == label) return b;
  }
  throw Error(ErrorCode::MalformedInput, "unknown F1 bin '" + std::string(label) + "'");
}

double bin_midpoint(F1Bin bin) {
  switch (bin) {
    case F1Bin::Top: return 0.96;
    case F1Bin::High: return 0.88;
    case F1Bin::Mid: return 0.80;
    case F1Bin::Low: return 0.58;
    case F1Bin::BelowRange: return 0.20;
  }
  return 0.20;
}

std::vector<EdgeTuple> sample_false_positives(const EvalReport& report,
                                              std::span<const EdgeTuple> predicted, std::size_t n,
                                              std::uint64_t seed) {
  CounterRng rng(seed, Stream::Sample);
  auto picks = sample_without_replacement(report.false_positives.size(), n, rng);
  std::sort(picks.begin(), picks.end());
  std::vector<EdgeTuple> out;
  out.reserve(picks.size());
  for (std::size_t k : picks) {
    const std::size_t idx = report.false_positives[k];
    if (idx >= predicted.size()) {
      throw Error(ErrorCode::InvalidArgument, "report does not belong to the predicted list");
    }
    out.push_back(predicted[idx]);
  }
  return out;
}

}  // namespace affilkg
