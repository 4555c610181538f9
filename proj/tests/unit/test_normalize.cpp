#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "affilkg/error.hpp"
#include "affilkg/normalize.hpp"

using namespace affilkg;

namespace {
const NormalizationConfig kDefaults = NormalizationConfig::defaults();
}

TEST_CASE("normalize_label examples") {
  CHECK(normalize_label("Country Assn", kDefaults) == "Country Association");
  CHECK(normalize_label("Smith (Jr.)", kDefaults) == "Smith");
  CHECK(normalize_label("  Rotary   Club. ", kDefaults) == "Rotary Club");
}

TEST_CASE("abbreviation lookup ignores case but keeps other text") {
  CHECK(normalize_label("country ASSN", kDefaults) == "country Association");
  CHECK(normalize_label("Assn. of Farmers", kDefaults) == "Association of Farmers");
  CHECK(normalize_label("Assnx Club", kDefaults) == "Assnx Club");
}

TEST_CASE("parentheticals are removed without gluing neighbours") {
  CHECK(normalize_label("Royal(Old)Club", kDefaults) == "Royal Club");
  CHECK(normalize_label("A (b (c) d) E", kDefaults) == "A E");
  NormalizationConfig keep = kDefaults;
  keep.strip_parentheticals = false;
  CHECK(normalize_label("Smith (Jr)", keep).find("Jr") != std::string::npos);
}

TEST_CASE("comma and semicolon separate words") {
  CHECK(normalize_label("Smith,John", kDefaults) == "Smith John");
  CHECK(normalize_label("Club;Branch", kDefaults) == "Club Branch");
}

TEST_CASE("NFC composes equivalent sequences") {
  const std::string decomposed = "Cafe\xCC\x81 Club";  // e + combining acute
  const std::string composed = "Caf\xC3\xA9 Club";
  CHECK(normalize_label(decomposed, kDefaults) == composed);
}

TEST_CASE("empty after normalization is an error") {
  auto code_of = [](std::string_view s) {
    try {
      normalize_label(s, NormalizationConfig::defaults());
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of("(only a note)") == ErrorCode::EmptyAfterNormalization);
  CHECK(code_of("  ...  ") == ErrorCode::EmptyAfterNormalization);
  CHECK(code_of("") == ErrorCode::EmptyAfterNormalization);
}

TEST_CASE("normalize_label is idempotent on varied inputs") {
  const char* inputs[] = {"Country Assn", "Smith (Jr.)", "  Rotary   Club. ", "St. Mary's Univ",
                          "Dr. J. (\"Jim\") O'Neil", "Byo Club, Ltd.", "A--B", "x (y", "Mrs  Jane   Doe!"};
  for (const char* s : inputs) {
    const std::string once = normalize_label(s, kDefaults);
    CHECK(normalize_label(once, kDefaults) == once);
  }
}

TEST_CASE("entities_match examples") {
  CHECK(entities_match("Bulawayo Club", "Byo Club", kDefaults));
  CHECK(entities_match("Harare Sports Club", "Harare Sports Club of Rhodesia", kDefaults));
  CHECK_FALSE(entities_match("Lions", "Lion", kDefaults));
}

TEST_CASE("exact rule ignores spaces and punctuation") {
  CHECK(entities_match("Rotary Club", "RotaryClub", kDefaults));
  CHECK(entities_match("St-Marys", "St Marys", kDefaults));
  CHECK_FALSE(entities_match("rotary club", "Rotary Club", kDefaults));
}

TEST_CASE("substring rule needs both stripped forms strictly longer than the threshold") {
  // "ABCDEFGHIJ" has exactly 10 characters: not enough.
  CHECK_FALSE(entities_match("ABCDEFGHIJ", "ABCDEFGHIJK", kDefaults));
  CHECK(entities_match("ABCDEFGHIJK", "ABCDEFGHIJKL", kDefaults));
  // Spaces do not count towards the length.
  CHECK_FALSE(entities_match("ABCDE FGHIJ", "ABCDE FGHIJ Club", kDefaults));
}

TEST_CASE("abbreviation rule expands both sides token by token") {
  CHECK(entities_match("St Andrews", "Saint Andrews", kDefaults));
  CHECK(entities_match("Univ Club", "University Club", kDefaults));
  NormalizationConfig none = kDefaults;
  none.abbreviations.clear();
  CHECK_FALSE(entities_match("Byo Club", "Bulawayo Club", none));
}

TEST_CASE("persons_match examples") {
  CHECK(persons_match("Mrs Jane Doe", "Mrs Jane Doe", kDefaults));
  CHECK_FALSE(persons_match("Mr Jane Doe", "Mrs Jane Doe", kDefaults));
  // One-sided title: compatible by default, rejected with strict titles.
  CHECK(persons_match("Jane Doe", "Mrs Jane Doe", kDefaults));
  NormalizationConfig strict = kDefaults;
  strict.strict_titles = true;
  CHECK_FALSE(persons_match("Jane Doe", "Mrs Jane Doe", strict));
  CHECK(persons_match("Mrs Jane Doe", "Mrs Jane Doe", strict));
}

TEST_CASE("titles compare without punctuation or case") {
  CHECK(persons_match("Mr. John Smith", "mr John Smith", kDefaults));
  CHECK_FALSE(persons_match("Dr John Smith", "Rev John Smith", kDefaults));
}

TEST_CASE("match predicates are reflexive and symmetric") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> pool = {"Harare Sports Club", "Harare Sports Club of Rhodesia", "Byo Club",
                                         "Bulawayo Club",      "Lions",                          "Lion",
                                         "Mrs Jane Doe",       "Jane Doe",                       "Mr Jane Doe",
                                         "St Andrews",         "Saint Andrews",                  "Rotary Club"};
  for (const auto& a : pool) {
    CHECK(entities_match(a, a, kDefaults));
    CHECK(persons_match(a, a, kDefaults));
    for (const auto& b : pool) {
      CHECK(entities_match(a, b, kDefaults) == entities_match(b, a, kDefaults));
      CHECK(persons_match(a, b, kDefaults) == persons_match(b, a, kDefaults));
    }
  }
}

TEST_CASE("key-based and string-based matching agree") {
  const std::vector<std::string> pool = {"Harare Sports Club", "Harare Sports Club of Rhodesia", "Byo Club",
                                         "Bulawayo Club", "Mrs Jane Doe", "Jane Doe", "Mr Jane Doe"};
  for (const auto& a : pool)
    for (const auto& b : pool) {
      CHECK(entities_match(EntityKey::make(a, kDefaults), EntityKey::make(b, kDefaults), kDefaults) ==
            entities_match(a, b, kDefaults));
      CHECK(persons_match(PersonKey::make(a, kDefaults), PersonKey::make(b, kDefaults), kDefaults) ==
            persons_match(a, b, kDefaults));
    }
}

TEST_CASE("exact config disables fuzzy rules") {
  const auto exact = NormalizationConfig::exact();
  CHECK_FALSE(entities_match("Harare Sports Club", "Harare Sports Club of Rhodesia", exact));
  CHECK_FALSE(entities_match("Byo Club", "Bulawayo Club", exact));
  CHECK(entities_match("Rotary Club", "Rotary Club", exact));
}

TEST_CASE("validate rejects bad configs") {
  NormalizationConfig c = kDefaults;
  c.abbreviations["assn"] = "Assoc";
  CHECK_THROWS_AS(c.validate(), Error);
  NormalizationConfig z = kDefaults;
  z.min_substring_len = 0;
  CHECK_THROWS_AS(z.validate(), Error);
  NormalizationConfig chain = NormalizationConfig{};
  chain.abbreviations = {{"A", "B"}, {"B", "C"}};
  CHECK_THROWS_AS(chain.validate(), Error);
  CHECK_NOTHROW(kDefaults.validate());
}

TEST_CASE("load_abbreviations merges a JSON file") {
  const auto path = std::filesystem::temp_directory_path() / "affilkg_abbrev_test.json";
  {
    std::ofstream out(path);
    out << R"({"Soc": "Society", "Assn": "Assembly"})";
  }
  NormalizationConfig c = kDefaults;
  load_abbreviations(path.string(), c);
  CHECK(normalize_label("Farmers Soc", c) == "Farmers Society");
  CHECK(normalize_label("Country Assn", c) == "Country Assembly");
  {
    std::ofstream out(path);
    out << R"(["not", "an", "object"])";
  }
  CHECK_THROWS_AS(load_abbreviations(path.string(), c), Error);
  std::filesystem::remove(path);
}

TEST_CASE("utf8_length counts code points") {
  CHECK(utf8_length("abc") == 3);
  CHECK(utf8_length("Caf\xC3\xA9") == 4);
  CHECK(compare_key("St. Mary's  Club") == "StMarysClub");
}
