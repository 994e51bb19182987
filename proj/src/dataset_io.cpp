#include "factjudge/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "factjudge/csv.hpp"
#include "factjudge/error.hpp"

namespace factjudge {

using json = nlohmann::json;

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";
const std::vector<std::string> kCsvColumns = {"request_id",        "request",  "expected_retrieved_context",
                                              "expected_response", "response", "human_label"};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetErrc::Io, 0, "", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, kBom.size()) == kBom) text.remove_prefix(kBom.size());
  return text;
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t j = 1; j < len; ++j) {
      const auto cc = static_cast<unsigned char>(s[i + j]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const std::uint32_t min_cp[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_cp[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

[[noreturn]] void schema_error(std::size_t row, const std::string& field, const std::string& why) {
  throw DatasetError(DatasetErrc::Schema, row, field, "row " + std::to_string(row) + ", field " + field + ": " + why);
}

std::vector<RetrievedContext> context_from_json(const json& j, std::size_t row) {
  if (!j.is_array()) schema_error(row, "expected_retrieved_context", "must be a JSON array");
  std::vector<RetrievedContext> out;
  for (const auto& item : j) {
    if (!item.is_object()) schema_error(row, "expected_retrieved_context", "entries must be objects");
    RetrievedContext ctx;
    if (item.contains("doc_uri") && !item.at("doc_uri").is_null()) {
      if (!item.at("doc_uri").is_string()) schema_error(row, "expected_retrieved_context", "doc_uri must be a string");
      ctx.doc_uri = item.at("doc_uri").get<std::string>();
    }
    if (item.contains("content") && !item.at("content").is_null()) {
      if (!item.at("content").is_string()) schema_error(row, "expected_retrieved_context", "content must be a string");
      ctx.content = item.at("content").get<std::string>();
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

json context_to_json(const std::vector<RetrievedContext>& ctx) {
  json arr = json::array();
  for (const auto& c : ctx) arr.push_back({{"doc_uri", c.doc_uri}, {"content", c.content}});
  return arr;
}

std::optional<bool> label_from_json(const json& j, std::size_t row) {
  if (j.is_null()) return std::nullopt;
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v == 0 || v == 1) return v == 1;
  }
  if (j.is_string()) {
    const auto token = j.get<std::string>();
    if (trim(token).empty()) return std::nullopt;
    if (auto v = parse_label_token(token)) return v;
  }
  throw DatasetError(DatasetErrc::BadLabel, row, "human_label",
                     "row " + std::to_string(row) + ": unrecognized human_label " + j.dump());
}

std::string required_string(const json& obj, const char* field, std::size_t row) {
  if (!obj.contains(field) || obj.at(field).is_null()) schema_error(row, field, "missing");
  const json& v = obj.at(field);
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (std::string_view(field) == "request_id" && v.is_number_integer()) {
    s = std::to_string(v.get<std::int64_t>());
  } else {
    schema_error(row, field, std::string("must be a string, got ") + v.type_name());
  }
  if (s.empty()) schema_error(row, field, "is empty");
  return s;
}

EvalRecord record_from_json(const json& obj, std::size_t row) {
  if (!obj.is_object()) schema_error(row, "", "row is not a JSON object");
  EvalRecord r;
  r.request_id = required_string(obj, "request_id", row);
  r.request = required_string(obj, "request", row);
  r.expected_response = required_string(obj, "expected_response", row);
  r.response = required_string(obj, "response", row);
  if (obj.contains("expected_retrieved_context") && !obj.at("expected_retrieved_context").is_null()) {
    r.expected_retrieved_context = context_from_json(obj.at("expected_retrieved_context"), row);
  }
  if (obj.contains("human_label")) r.human_label = label_from_json(obj.at("human_label"), row);
  return r;
}

json record_to_json(const EvalRecord& r) {
  json obj = {{"request_id", r.request_id},
              {"request", r.request},
              {"expected_response", r.expected_response},
              {"response", r.response}};
  if (r.expected_retrieved_context) obj["expected_retrieved_context"] = context_to_json(*r.expected_retrieved_context);
  if (r.human_label) obj["human_label"] = *r.human_label;
  return obj;
}

std::vector<EvalRecord> parse_jsonl(std::string_view text) {
  std::vector<EvalRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      schema_error(line_no, "", std::string("invalid JSON (") + e.what() + ")");
    }
    out.push_back(record_from_json(obj, line_no));
  }
  return out;
}

std::vector<EvalRecord> parse_csv_set(std::string_view text) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(text);
  } catch (const std::exception& e) {
    throw DatasetError(DatasetErrc::Schema, 0, "", e.what());
  }
  if (rows.empty()) return {};
  const csv::Row& header = rows.front();
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[trim(header[i])] = i;

  std::vector<EvalRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& cells = rows[r];
    json obj = json::object();
    for (const auto& name : kCsvColumns) {
      auto it = column.find(name);
      if (it == column.end() || it->second >= cells.size()) continue;
      const std::string& cell = cells[it->second];
      if (!valid_utf8(cell)) schema_error(r, name, "invalid UTF-8");
      if (name == "expected_retrieved_context") {
        if (trim(cell).empty()) continue;
        try {
          obj[name] = json::parse(cell);
        } catch (const json::parse_error&) {
          schema_error(r, name, "must hold a JSON array");
        }
      } else if (name == "human_label") {
        if (!trim(cell).empty()) obj[name] = cell;
      } else {
        obj[name] = cell;
      }
    }
    out.push_back(record_from_json(obj, r));
  }
  return out;
}

}  // namespace

DatasetFormat dataset_format_from_string(std::string_view text) {
  if (text == "jsonl") return DatasetFormat::Jsonl;
  if (text == "csv") return DatasetFormat::Csv;
  throw std::invalid_argument("unknown dataset format '" + std::string(text) + "'");
}

DatasetFormat dataset_format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? DatasetFormat::Csv : DatasetFormat::Jsonl;
}

std::optional<bool> parse_label_token(std::string_view token) {
  std::string t = trim(token);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "pass") return true;
  if (t == "false" || t == "0" || t == "fail") return false;
  return std::nullopt;
}

std::vector<EvalRecord> parse_eval_set(std::string_view text, DatasetFormat format) {
  text = strip_bom(text);
  std::vector<EvalRecord> records = format == DatasetFormat::Csv ? parse_csv_set(text) : parse_jsonl(text);
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.request_id).second) {
      throw DatasetError(DatasetErrc::DuplicateId, 0, "request_id", "duplicate request_id \"" + r.request_id + "\"");
    }
  }
  return records;
}

std::vector<EvalRecord> load_eval_set(const std::filesystem::path& path, DatasetFormat format) {
  return parse_eval_set(read_file(path), format);
}

std::string serialize_eval_set(std::span<const EvalRecord> records, DatasetFormat format) {
  std::string out;
  if (format == DatasetFormat::Jsonl) {
    for (const auto& r : records) out += record_to_json(r).dump() + "\n";
    return out;
  }
  out += csv::format_row(kCsvColumns);
  for (const auto& r : records) {
    csv::Row row = {r.request_id,
                    r.request,
                    r.expected_retrieved_context ? context_to_json(*r.expected_retrieved_context).dump() : "",
                    r.expected_response,
                    r.response,
                    r.human_label ? (*r.human_label ? "true" : "false") : ""};
    out += csv::format_row(row);
  }
  return out;
}

void save_eval_set(std::span<const EvalRecord> records, const std::filesystem::path& path, DatasetFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(DatasetErrc::Io, 0, "", "cannot write " + path.string());
  out << serialize_eval_set(records, format);
}

std::map<std::string, bool> parse_human_labels(std::string_view text) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(strip_bom(text));
  } catch (const std::exception& e) {
    throw DatasetError(DatasetErrc::Schema, 0, "", e.what());
  }
  std::map<std::string, bool> labels;
  if (rows.empty()) return labels;

  std::size_t first = 0;
  std::size_t id_col = 0;
  std::size_t label_col = 1;
  // The header is optional so that bare "id,label" lines are accepted too.
  const csv::Row& head = rows.front();
  if (head.size() >= 2 && trim(head[0]) == "request_id") {
    first = 1;
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (trim(head[i]) == "request_id") id_col = i;
      if (trim(head[i]) == "human_label") label_col = i;
    }
  }
  for (std::size_t r = first; r < rows.size(); ++r) {
    const std::size_t row_no = r - first + 1;
    const csv::Row& cells = rows[r];
    if (cells.size() <= std::max(id_col, label_col)) schema_error(row_no, "human_label", "missing column");
    const std::string id = trim(cells[id_col]);
    if (id.empty()) schema_error(row_no, "request_id", "is empty");
    const auto label = parse_label_token(cells[label_col]);
    if (!label) {
      throw DatasetError(DatasetErrc::BadLabel, row_no, "human_label",
                         "row " + std::to_string(row_no) + ": unrecognized label \"" + cells[label_col] + "\"");
    }
    if (!labels.emplace(id, *label).second) {
      throw DatasetError(DatasetErrc::DuplicateId, row_no, "request_id", "duplicate label for \"" + id + "\"");
    }
  }
  return labels;
}

std::map<std::string, bool> load_human_labels(const std::filesystem::path& path) {
  return parse_human_labels(read_file(path));
}

std::size_t apply_human_labels(std::vector<EvalRecord>& records, const std::map<std::string, bool>& labels) {
  std::size_t matched = 0;
  for (auto& r : records) {
    if (auto it = labels.find(r.request_id); it != labels.end()) {
      r.human_label = it->second;
      ++matched;
    }
  }
  return labels.size() - matched;
}

std::size_t count_chars(std::string_view utf8) {
  return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

DatasetStats summarize_dataset(std::span<const EvalRecord> records) {
  if (records.empty()) throw DatasetError(DatasetErrc::Empty, 0, "", "dataset is empty");
  auto summarize = [&](auto field) {
    TextStats s;
    s.min_len_chars = SIZE_MAX;
    double len_sum = 0.0;
    double word_sum = 0.0;
    for (const auto& r : records) {
      const std::string& text = r.*field;
      const std::size_t len = count_chars(text);
      len_sum += static_cast<double>(len);
      word_sum += static_cast<double>(count_words(text));
      s.min_len_chars = std::min(s.min_len_chars, len);
      s.max_len_chars = std::max(s.max_len_chars, len);
    }
    s.avg_len_chars = len_sum / static_cast<double>(records.size());
    s.avg_word_count = word_sum / static_cast<double>(records.size());
    return s;
  };
  DatasetStats stats;
  stats.total_count = records.size();
  stats.request = summarize(&EvalRecord::request);
  stats.response = summarize(&EvalRecord::response);
  return stats;
}

std::string format_dataset_stats(const DatasetStats& stats) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "| Statistic | Request | Response |\n"
                "|---|---|---|\n"
                "| Total Count | %zu | %zu |\n"
                "| Average Length (chars) | %.2f | %.2f |\n"
                "| Min Length (chars) | %zu | %zu |\n"
                "| Max Length (chars) | %zu | %zu |\n"
                "| Average Word Count | %.2f | %.2f |\n",
                stats.total_count, stats.total_count, stats.request.avg_len_chars, stats.response.avg_len_chars,
                stats.request.min_len_chars, stats.response.min_len_chars, stats.request.max_len_chars,
                stats.response.max_len_chars, stats.request.avg_word_count, stats.response.avg_word_count);
  return buf;
}

}  // namespace factjudge
