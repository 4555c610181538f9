#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace affilkg {

// Entity-name canonicalization and the fuzzy equivalence used when scoring
// extracted tuples.
struct NormalizationConfig {
  // Keys are matched case-insensitively against whole tokens.
  std::map<std::string, std::string> abbreviations;
  bool strip_parentheticals = true;
  std::vector<std::string> titles;
  // Substring rule applies only when both compared forms are strictly longer.
  std::size_t min_substring_len = 10;
  // When false, a title present on only one side is compatible.
  bool strict_titles = false;

  static NormalizationConfig defaults();

  // Exact-only matching: no substring rule, no abbreviations, strict titles.
  static NormalizationConfig exact();

  // Throws InvalidArgument on duplicate case-folded keys or
  // min_substring_len == 0.
  void validate() const;
};

// Loads a JSON object of abbreviation -> expansion and merges it into cfg
// (file entries win).
void load_abbreviations(const std::string& path, NormalizationConfig& cfg);

// NFC, parenthetical removal, punctuation canonicalization, abbreviation
// expansion, whitespace collapse. Throws EmptyAfterNormalization.
std::string normalize_label(std::string_view raw, const NormalizationConfig& cfg);

// Label with all whitespace and punctuation removed. This is the form the
// fuzzy rules compare.
std::string compare_key(std::string_view label);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

bool entities_match(std::string_view a, std::string_view b, const NormalizationConfig& cfg);

bool persons_match(std::string_view a, std::string_view b, const NormalizationConfig& cfg);

// Precomputed comparison forms for one entity string. Matching many
// candidates against each other should go through this to avoid
// recomputing keys in the inner loop.
struct EntityKey {
  std::string key;       // compare_key(label)
  std::string expanded;  // compare_key(label with abbreviation tokens expanded)
  std::size_t length = 0;  // utf8_length(key)

  static EntityKey make(std::string_view label, const NormalizationConfig& cfg);
};

struct PersonKey {
  std::string title;  // case-folded title token without punctuation; empty if none
  EntityKey rest;

  static PersonKey make(std::string_view label, const NormalizationConfig& cfg);
};

bool entities_match(const EntityKey& a, const EntityKey& b, const NormalizationConfig& cfg);
bool persons_match(const PersonKey& a, const PersonKey& b, const NormalizationConfig& cfg);

}  // namespace affilkg
