#include "affilkg/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "affilkg/error.hpp"

namespace affilkg {

namespace {

using nlohmann::json;

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void malformed(std::int64_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line) + ": " + what, line);
}

// Reads one RFC 4180 record. Returns false at end of input. `line` is the
// current physical line and is advanced past the record; `start` receives the
// line the record began on.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::int64_t& line,
                 std::int64_t& start) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  start = line;
  std::string field;
  bool quoted = false, after_quote = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else if (c == '"') {
      if (!field.empty() || after_quote) malformed(line, "quote inside an unquoted field");
      quoted = true;
    } else {
      if (after_quote) malformed(line, "text after closing quote");
      field.push_back(c);
    }
  }
  if (quoted) malformed(start, "unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].find_first_not_of(" \t\r") == std::string::npos;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

TupleFormat tuple_format_from_string(std::string_view s) {
  if (s == "auto") return TupleFormat::Auto;
  if (s == "csv") return TupleFormat::Csv;
  if (s == "jsonl") return TupleFormat::Jsonl;
  throw Error(ErrorCode::UnknownFormat, "unknown tuple format '" + std::string(s) + "'");
}

std::vector<EdgeTuple> parse_tuples_csv(std::istream& in) {
  std::vector<std::string> fields;
  std::int64_t line = 1, start = 1;
  // Header, skipping leading blank lines.
  do {
    if (!read_record(in, fields, line, start)) throw Error(ErrorCode::EmptyInput, "CSV input is empty");
  } while (blank(fields));
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  int person = -1, relation = -1, club = -1;
  for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
    const std::string name = trim(fields[static_cast<std::size_t>(i)]);
    if (name == "person") person = i;
    if (name == "relation") relation = i;
    if (name == "club") club = i;
  }
  if (person < 0 || club < 0) malformed(start, "header must name person, relation and club columns");
  const auto width = fields.size();

  std::vector<EdgeTuple> out;
  while (read_record(in, fields, line, start)) {
    if (blank(fields)) continue;
    if (fields.size() != width) {
      malformed(start, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    }
    EdgeTuple t;
    t.person = fields[static_cast<std::size_t>(person)];
    t.relation = relation >= 0 ? fields[static_cast<std::size_t>(relation)] : "member";
    t.club = fields[static_cast<std::size_t>(club)];
    t.source_line = start;
    out.push_back(std::move(t));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "CSV input has no tuples");
  return out;
}

std::vector<EdgeTuple> parse_tuples_jsonl(std::istream& in) {
  std::vector<EdgeTuple> out;
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::exception& e) {
      malformed(line, e.what());
    }
    if (!obj.is_object()) malformed(line, "expected a JSON object");
    auto field = [&](const char* key, bool required) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end()) {
        if (required) malformed(line, std::string("missing \"") + key + "\"");
        return "member";
      }
      if (!it->is_string()) malformed(line, std::string("\"") + key + "\" is not a string");
      return it->get<std::string>();
    };
    EdgeTuple t;
    t.person = field("person", true);
    t.relation = field("relation", false);
    t.club = field("club", true);
    t.source_line = line;
    out.push_back(std::move(t));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "JSONL input has no tuples");
  return out;
}

std::vector<EdgeTuple> parse_tuple_file(const std::string& path, TupleFormat format) {
  if (format == TupleFormat::Auto) {
    const std::string ext = lower_extension(path);
    if (ext == ".csv") {
      format = TupleFormat::Csv;
    } else if (ext == ".jsonl" || ext == ".ndjson") {
      format = TupleFormat::Jsonl;
    } else {
      throw Error(ErrorCode::UnknownFormat, "cannot infer tuple format of " + path);
    }
  }
  auto in = open_in(path);
  return format == TupleFormat::Csv ? parse_tuples_csv(in) : parse_tuples_jsonl(in);
}

json to_json(const AffiliationGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.indiv, e.club});
  auto indiv = g.labels(Partition::Indiv);
  auto club = g.labels(Partition::Club);
  return {{"indiv", std::vector<std::string>(indiv.begin(), indiv.end())},
          {"club", std::vector<std::string>(club.begin(), club.end())},
          {"edges", std::move(edges)}};
}

AffiliationGraph graph_from_json(const json& doc) {
  try {
    auto indiv = doc.at("indiv").get<std::vector<std::string>>();
    auto club = doc.at("club").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : doc.at("edges")) {
      const auto i = e.at(0).get<std::size_t>();
      const auto c = e.at(1).get<std::size_t>();
      if (e.size() != 2 || i >= indiv.size() || c >= club.size()) {
        throw Error(ErrorCode::MalformedInput, "edge index out of range");
      }
      edges.emplace_back(indiv[i], club[c]);
    }
    auto g = AffiliationGraph::from_labels(indiv, club, edges);
    if (g.num_indiv() != indiv.size() || g.num_club() != club.size()) {
      throw Error(ErrorCode::MalformedInput, "duplicate node labels in graph document");
    }
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("graph document: ") + e.what());
  }
}

AffiliationGraph load_graph(const std::string& path, const NormalizationConfig& cfg) {
  if (lower_extension(path) == ".json") {
    auto in = open_in(path);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
    }
    return graph_from_json(doc);
  }
  return build_graph(parse_tuple_file(path), cfg);
}

json to_json(const ProjectionGraph& p) {
  json edges = json::array();
  for (auto [u, v] : p.edges) edges.push_back({u, v});
  return {{"partition", std::string(to_string(p.partition))}, {"nodes", p.nodes}, {"edges", std::move(edges)}};
}

json to_json(const EvalReport& r) {
  json pairs = json::array();
  for (auto [p, t] : r.matched_pairs) pairs.push_back({p, t});
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"bin", std::string(to_string(f1_bin(r.f1)))},
          {"true_positives", r.true_positives},
          {"exact_matches", r.exact_matches},
          {"matched_pairs", std::move(pairs)},
          {"false_positives", r.false_positives},
          {"false_negatives", r.false_negatives},
          {"duplicate_predicted", r.duplicate_predicted},
          {"duplicate_truth", r.duplicate_truth}};
}

json to_json(const EdgeTuple& t) {
  json j = {{"person", t.person}, {"relation", t.relation}, {"club", t.club}};
  if (t.source_line) j["source_line"] = *t.source_line;
  return j;
}

json to_json(const MetricSuite& s) {
  json j = json::object();
  j["degree_mean_indiv"] = optional_json(s.degree_mean_indiv);
  j["degree_std_indiv"] = optional_json(s.degree_std_indiv);
  j["degree_mean_club"] = optional_json(s.degree_mean_club);
  j["degree_std_club"] = optional_json(s.degree_std_club);
  j["rmae_all_clubs"] = optional_json(s.rmae_all_clubs);
  j["rmae_top10_clubs"] = optional_json(s.rmae_top10_clubs);
  j["bipartite_density"] = optional_json(s.bipartite_density);
  j["num_connected_components"] = optional_json(s.num_connected_components);
  j["num_communities"] = optional_json(s.num_communities);
  j["prop_largest_cc"] = optional_json(s.prop_largest_cc);
  j["avg_shortest_path_largest_cc"] = optional_json(s.avg_shortest_path_largest_cc);
  j["diameter_largest_cc"] = optional_json(s.diameter_largest_cc);
  j["avg_size_rest_components"] = optional_json(s.avg_size_rest_components);
  j["comembership_density"] = optional_json(s.comembership_density);
  j["comembership_avg_clustering"] = optional_json(s.comembership_avg_clustering);
  j["org_density"] = optional_json(s.org_density);
  j["org_avg_clustering"] = optional_json(s.org_avg_clustering);
  return j;
}

json to_json(const PerturbationReport& r) {
  return {{"model", std::string(to_string(r.spec.model))},
          {"target_precision", r.spec.precision},
          {"target_recall", r.spec.recall},
          {"seed", r.spec.seed},
          {"e_keep", r.budget.e_keep},
          {"e_add", r.budget.e_add},
          {"true_edges", r.true_edges},
          {"false_edges", r.false_edges},
          {"achieved_precision", r.achieved_precision},
          {"achieved_recall", r.achieved_recall},
          {"synthetic_nodes", r.synthetic_nodes},
          {"redirected_edges", r.redirected_edges},
          {"reconciliation_deletions", r.reconciliation_deletions},
          {"reconciliation_additions", r.reconciliation_additions},
          {"rejected_draws", r.rejected_draws}};
}

json to_json(const BiasRecord& r) {
  return {{"metric", r.metric},
          {"truth", r.truth},
          {"extracted", r.extracted},
          {"rel_bias", optional_json(r.rel_bias)},
          {"rel_mae", optional_json(r.rel_mae)},
          {"f1", r.f1},
          {"bin", std::string(to_string(r.bin))},
          {"graph_id", r.graph_id},
          {"run_id", r.run_id}};
}

BiasRecord bias_record_from_json(const json& j) {
  BiasRecord r;
  auto opt = [&](const char* key) -> std::optional<double> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
  };
  r.metric = j.at("metric").get<std::string>();
  r.truth = j.at("truth").get<double>();
  r.extracted = j.at("extracted").get<double>();
  r.rel_bias = opt("rel_bias");
  r.rel_mae = opt("rel_mae");
  r.f1 = j.at("f1").get<double>();
  // The bin always follows from f1; a stored label is only cross-checked.
  r.bin = f1_bin(r.f1);
  if (auto it = j.find("bin"); it != j.end() && f1_bin_from_string(it->get<std::string>()) != r.bin) {
    throw Error(ErrorCode::MalformedInput, "record bin does not match its f1");
  }
  r.graph_id = j.value("graph_id", "");
  r.run_id = j.value("run_id", "");
  return r;
}

json to_json(const BiasTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"bin", std::string(to_string(row.bin))},
                    {"metric", row.metric},
                    {"mean_rel_bias", optional_json(row.mean_rel_bias)},
                    {"mean_rel_mae", row.mean_rel_mae},
                    {"n", row.n}});
  }
  return {{"rows", std::move(rows)}, {"skipped_records", t.skipped_records}};
}

std::vector<BiasRecord> read_bias_records(const std::string& path) {
  auto in = open_in(path);
  std::vector<BiasRecord> out;
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(bias_record_from_json(json::parse(text)));
    } catch (const json::exception& e) {
      malformed(line, e.what());
    } catch (const Error& e) {
      malformed(line, e.what());
    }
  }
  return out;
}

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace affilkg
