#include "affilkg/normalize.hpp"

#include <fstream>
#include <set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <json.hpp>

#include "affilkg/error.hpp"

namespace affilkg {

namespace {

icu::UnicodeString to_nfc(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  if (U_FAILURE(status)) return text;
  icu::UnicodeString out = nfc->normalize(text, status);
  return U_FAILURE(status) ? text : out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string fold(std::string_view s) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.foldCase();
  return to_utf8(u);
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

// Drops (...) spans, nesting aware, leaving a space where the span was.
// Unbalanced parentheses become spaces on their own.
icu::UnicodeString strip_parentheticals(const icu::UnicodeString& in) {
  enum Mark : char { Keep, Drop, Space };
  std::vector<Mark> mark(static_cast<std::size_t>(in.length()), Keep);
  std::vector<int32_t> open_stack;
  for (int32_t i = 0; i < in.length(); ++i) {
    UChar c = in.charAt(i);
    if (c == u'(') {
      open_stack.push_back(i);
    } else if (c == u')') {
      if (open_stack.empty()) {
        mark[static_cast<std::size_t>(i)] = Space;
      } else {
        int32_t start = open_stack.back();
        open_stack.pop_back();
        for (int32_t k = start; k <= i; ++k) mark[static_cast<std::size_t>(k)] = Drop;
        mark[static_cast<std::size_t>(start)] = Space;
      }
    }
  }
  for (int32_t start : open_stack) mark[static_cast<std::size_t>(start)] = Space;

  icu::UnicodeString out;
  for (int32_t i = 0; i < in.length(); ++i) {
    switch (mark[static_cast<std::size_t>(i)]) {
      case Keep: out.append(in.charAt(i)); break;
      case Space: out.append(u' '); break;
      case Drop: break;
    }
  }
  return out;
}

// Punctuation table. Returns the replacement for c: 0 keeps c, -1 drops it,
// anything else is substituted.
UChar32 canonical_punct(UChar32 c) {
  switch (c) {
    case u'.':
    case u'"':
    case u'!':
    case u'?':
    case 0x201C:  // left double quotation mark
    case 0x201D:  // right double quotation mark
    case 0x00AB:
    case 0x00BB:
      return -1;
    case u',':
    case u';':
      return u' ';
    case 0x2018:
    case 0x2019:
    case 0x02BC:
    case u'`':
      return u'\'';
    case 0x2010:
    case 0x2011:
    case 0x2012:
    case 0x2013:
    case 0x2014:
    case 0x2212:
      return u'-';
    default:
      return 0;
  }
}

// Punctuation + whitespace canonicalization, returning space-separated tokens.
std::vector<std::string> canonical_tokens(const icu::UnicodeString& in) {
  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (!current.isEmpty()) {
      tokens.push_back(to_utf8(current));
      current.remove();
    }
  };
  for (int32_t i = 0; i < in.length();) {
    UChar32 c = in.char32At(i);
    i += U16_LENGTH(c);
    if (c == u'(' || c == u')') {
      flush();
      continue;
    }
    if (is_space(c)) {
      flush();
      continue;
    }
    UChar32 repl = canonical_punct(c);
    if (repl == -1) continue;
    if (repl == u' ') {
      flush();
      continue;
    }
    current.append(repl == 0 ? c : repl);
  }
  flush();
  return tokens;
}

std::vector<std::string> canonical_tokens(std::string_view raw, bool strip_parens) {
  icu::UnicodeString text = to_nfc(raw);
  if (strip_parens) text = strip_parentheticals(text);
  return canonical_tokens(text);
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

// Case-folded abbreviation lookup table with canonicalized expansions.
class AbbreviationIndex {
 public:
  explicit AbbreviationIndex(const NormalizationConfig& cfg) {
    for (const auto& [key, value] : cfg.abbreviations) {
      auto key_tokens = canonical_tokens(key, false);
      if (key_tokens.size() != 1) continue;
      index_.emplace(fold(key_tokens.front()), canonical_tokens(value, cfg.strip_parentheticals));
    }
  }

  const std::vector<std::string>* find(const std::string& token) const {
    auto it = index_.find(fold(token));
    return it == index_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> expand(const std::vector<std::string>& tokens) const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
      if (const auto* e = find(t)) {
        out.insert(out.end(), e->begin(), e->end());
      } else {
        out.push_back(t);
      }
    }
    return out;
  }

 private:
  std::map<std::string, std::vector<std::string>> index_;
};

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_substring(const std::string& a, const std::string& b) {
  return a.find(b) != std::string::npos || b.find(a) != std::string::npos;
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig cfg;
  cfg.abbreviations = {
      {"Assn", "Association"},
      {"Byo", "Bulawayo"},
      {"St", "Saint"},
      {"Univ", "University"},
  };
  cfg.titles = {"Mr", "Mrs", "Miss", "Rev", "Dr"};
  return cfg;
}

NormalizationConfig NormalizationConfig::exact() {
  NormalizationConfig cfg = defaults();
  cfg.abbreviations.clear();
  cfg.min_substring_len = static_cast<std::size_t>(-1);
  cfg.strict_titles = true;
  return cfg;
}

void NormalizationConfig::validate() const {
  if (min_substring_len == 0) {
    throw Error(ErrorCode::InvalidArgument, "min_substring_len must be >= 1");
  }
  std::set<std::string> keys;
  for (const auto& [key, value] : abbreviations) {
    if (!keys.insert(fold(key)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate abbreviation key after case folding: " + key);
    }
  }
  // Chained expansions would make normalization non-idempotent.
  for (const auto& [key, value] : abbreviations) {
    for (const auto& token : canonical_tokens(value, strip_parentheticals)) {
      if (keys.contains(fold(token))) {
        throw Error(ErrorCode::InvalidArgument,
                    "abbreviation expansion '" + value + "' contains another abbreviation key");
      }
    }
  }
}

void load_abbreviations(const std::string& path, NormalizationConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open abbreviation map " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::MalformedInput, path + ": expected a JSON object of string -> string");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) {
      throw Error(ErrorCode::MalformedInput, path + ": value for '" + key + "' is not a string");
    }
    // Replace any existing entry that differs only by case.
    for (auto it = cfg.abbreviations.begin(); it != cfg.abbreviations.end();) {
      it = fold(it->first) == fold(key) ? cfg.abbreviations.erase(it) : std::next(it);
    }
    cfg.abbreviations[key] = value.get<std::string>();
  }
  cfg.validate();
}

std::string normalize_label(std::string_view raw, const NormalizationConfig& cfg) {
  AbbreviationIndex abbrev(cfg);
  std::string out = join(abbrev.expand(canonical_tokens(raw, cfg.strip_parentheticals)));
  if (out.empty()) {
    throw Error(ErrorCode::EmptyAfterNormalization, "'" + std::string(raw) + "' is empty after normalization");
  }
  return out;
}

std::string compare_key(std::string_view label) {
  icu::UnicodeString text = to_nfc(label);
  icu::UnicodeString out;
  for (int32_t i = 0; i < text.length();) {
    UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (is_space(c) || u_ispunct(c)) continue;
    out.append(c);
  }
  return to_utf8(out);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

EntityKey EntityKey::make(std::string_view label, const NormalizationConfig& cfg) {
  AbbreviationIndex abbrev(cfg);
  EntityKey k;
  k.key = compare_key(label);
  k.expanded = compare_key(join(abbrev.expand(split_spaces(label))));
  k.length = utf8_length(k.key);
  return k;
}

PersonKey PersonKey::make(std::string_view label, const NormalizationConfig& cfg) {
  PersonKey k;
  auto tokens = split_spaces(label);
  if (tokens.size() >= 2) {
    std::string head = fold(compare_key(tokens.front()));
    for (const auto& title : cfg.titles) {
      if (fold(compare_key(title)) == head) {
        k.title = head;
        break;
      }
    }
  }
  if (!k.title.empty()) tokens.erase(tokens.begin());
  k.rest = EntityKey::make(join(tokens), cfg);
  return k;
}

bool entities_match(const EntityKey& a, const EntityKey& b, const NormalizationConfig& cfg) {
  if (a.key == b.key) return true;
  if (a.length > cfg.min_substring_len && b.length > cfg.min_substring_len &&
      is_substring(a.key, b.key)) {
    return true;
  }
  return a.expanded == b.expanded;
}

bool persons_match(const PersonKey& a, const PersonKey& b, const NormalizationConfig& cfg) {
  if (!a.title.empty() && !b.title.empty()) {
    if (a.title != b.title) return false;
  } else if (a.title.empty() != b.title.empty() && cfg.strict_titles) {
    return false;
  }
  return entities_match(a.rest, b.rest, cfg);
}

bool entities_match(std::string_view a, std::string_view b, const NormalizationConfig& cfg) {
  return entities_match(EntityKey::make(a, cfg), EntityKey::make(b, cfg), cfg);
}

bool persons_match(std::string_view a, std::string_view b, const NormalizationConfig& cfg) {
  return persons_match(PersonKey::make(a, cfg), PersonKey::make(b, cfg), cfg);
}

}  // namespace affilkg
