#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "affilkg/analysis.hpp"
#include "affilkg/error_models.hpp"
#include "affilkg/graph.hpp"
#include "affilkg/metrics.hpp"
#include "affilkg/projections.hpp"
#include "affilkg/tuple_eval.hpp"

namespace affilkg {

enum class TupleFormat { Auto, Csv, Jsonl };

TupleFormat tuple_format_from_string(std::string_view s);

// CSV with a header naming person, relation and club (any column order,
// extra columns ignored), RFC 4180 quoting. Throws EmptyInput or
// MalformedInput(line).
std::vector<EdgeTuple> parse_tuples_csv(std::istream& in);

// One {"person", "relation", "club"} object per non-blank line; relation
// defaults to "member". Throws EmptyInput or MalformedInput(line).
std::vector<EdgeTuple> parse_tuples_jsonl(std::istream& in);

// Format from the extension (.csv, .jsonl, .ndjson) unless given. Throws
// UnknownFormat, Io, plus the parser errors.
std::vector<EdgeTuple> parse_tuple_file(const std::string& path, TupleFormat format = TupleFormat::Auto);

// {"indiv": [...], "club": [...], "edges": [[i, j], ...]} with indices into
// the sorted label arrays.
nlohmann::json to_json(const AffiliationGraph& g);
AffiliationGraph graph_from_json(const nlohmann::json& doc);

// A .json path is read as a graph document; anything else as a tuple file
// built with `cfg`.
AffiliationGraph load_graph(const std::string& path, const NormalizationConfig& cfg);

nlohmann::json to_json(const ProjectionGraph& p);
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const EdgeTuple& t);
// Flat object, null for undefined fields.
nlohmann::json to_json(const MetricSuite& s);
nlohmann::json to_json(const PerturbationReport& r);
nlohmann::json to_json(const BiasRecord& r);
BiasRecord bias_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BiasTable& t);

std::vector<BiasRecord> read_bias_records(const std::string& path);

std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view text);

// Canonical serialization: 2-space indent plus trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace affilkg
