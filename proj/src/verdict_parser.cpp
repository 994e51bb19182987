#include "factjudge/verdict_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <set>

#include <nlohmann/json.hpp>

#include "factjudge/error.hpp"

namespace factjudge {

namespace {

using json = nlohmann::json;

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::array<std::string_view, 3> kRealFields = {"semantic_similarity", "fact_match_ratio",
                                                        "final_score"};
constexpr std::array<std::string_view, 3> kCountFields = {
    "critical_facts_missed", "supporting_facts_missed", "trivial_facts_missed"};
constexpr std::array<std::string_view, 7> kSchemaOrder = {
    "semantic_similarity",     "fact_match_ratio",     "critical_facts_missed",
    "supporting_facts_missed", "trivial_facts_missed", "final_score",
    "explanation"};

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, kBom.size()) == kBom) text.remove_prefix(kBom.size());
  return text;
}

bool is_tag_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+';
}

// Removes ``` fence markers (and an info string such as "json" after an
// opening fence) at line starts and line ends. JSON strings cannot contain a
// raw newline, so a line-leading fence is never inside a verdict string.
std::string unwrap_fences(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    const bool last = eol == std::string_view::npos;
    std::string_view line = text.substr(pos, last ? std::string_view::npos : eol - pos);

    std::size_t lead = 0;
    while (lead < line.size() && (line[lead] == ' ' || line[lead] == '\t')) ++lead;
    if (line.substr(lead, 3) == "```") {
      std::size_t cut = lead + 3;
      while (cut < line.size() && is_tag_char(line[cut])) ++cut;
      line.remove_prefix(cut);
    }
    std::size_t end = line.size();
    while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r')) --end;
    if (end >= 3 && line.substr(end - 3, 3) == "```") line = line.substr(0, end - 3);

    out.append(line);
    if (last) break;
    out.push_back('\n');
    pos = eol + 1;
  }
  return out;
}

// Index one past the brace closing the object opened at `open`, or npos.
std::size_t match_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// Parses with duplicate-key detection. nlohmann keeps the last value written
// for a repeated key; the callback only observes keys.
json parse_checked(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<std::set<std::string>> seen;
  auto callback = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start: seen.emplace_back(); break;
      case json::parse_event_t::object_end:
        if (!seen.empty()) seen.pop_back();
        break;
      case json::parse_event_t::key:
        if (!seen.empty() && !seen.back().insert(parsed.get<std::string>()).second && warnings) {
          warnings->push_back("duplicate key '" + parsed.get<std::string>() +
                              "': last occurrence used");
        }
        break;
      default: break;
    }
    return true;
  };
  return json::parse(text.begin(), text.end(), callback);
}

std::string clamp_warning(std::string_view field, double from, double to) {
  return "clamped " + std::string(field) + " " + json(from).dump() + " -> " + json(to).dump();
}

double read_real(const json& obj, std::string_view field, const ValidationPolicy& policy,
                 std::vector<std::string>& warnings) {
  const json& value = obj.at(std::string(field));
  double x = 0.0;
  if (value.is_number_float()) {
    x = value.get<double>();
  } else if (value.is_number_integer() && policy.allow_integer_like_reals) {
    x = static_cast<double>(value.get<std::int64_t>());
  } else {
    throw ParseError(ParseErrc::WrongType, std::string(field),
                     std::string(field) + " must be a number, got " + value.type_name());
  }
  if (x < 0.0 || x > 1.0) {
    if (policy.range_handling == RangeHandling::Reject) {
      throw ParseError(ParseErrc::OutOfRange, std::string(field),
                       std::string(field) + " = " + value.dump() + " is outside [0,1]");
    }
    const double clamped = std::clamp(x, 0.0, 1.0);
    warnings.push_back(clamp_warning(field, x, clamped));
    x = clamped;
  }
  return x;
}

std::int64_t read_count(const json& obj, std::string_view field, const ValidationPolicy& policy,
                        std::vector<std::string>& warnings) {
  const json& value = obj.at(std::string(field));
  std::int64_t n = 0;
  if (value.is_number_unsigned()) {
    const auto u = value.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) {
      throw ParseError(ParseErrc::OutOfRange, std::string(field), std::string(field) + " is too large");
    }
    n = static_cast<std::int64_t>(u);
  } else if (value.is_number_integer()) {
    n = value.get<std::int64_t>();
  } else if (value.is_number_float() && policy.allow_integer_like_reals) {
    const double x = value.get<double>();
    if (x != std::floor(x) || std::abs(x) > 9.0e15) {
      throw ParseError(ParseErrc::WrongType, std::string(field),
                       std::string(field) + " must be an integer, got " + value.dump());
    }
    n = static_cast<std::int64_t>(x);
    warnings.push_back(std::string(field) + " given as real " + value.dump());
  } else {
    throw ParseError(ParseErrc::WrongType, std::string(field),
                     std::string(field) + " must be an integer, got " + value.type_name());
  }
  if (n < 0) {
    throw ParseError(ParseErrc::NegativeCount, std::string(field),
                     std::string(field) + " = " + std::to_string(n) + " is negative");
  }
  return n;
}

}  // namespace

std::string extract_json_block(std::string_view text) {
  const std::string cleaned = unwrap_fences(strip_bom(text));
  const std::string_view view = cleaned;

  bool saw_unbalanced = false;
  bool saw_undecodable_verdict = false;
  for (auto open = view.find('{'); open != std::string_view::npos; open = view.find('{', open + 1)) {
    const auto close = match_brace(view, open);
    if (close == std::string_view::npos) {
      saw_unbalanced = true;
      continue;
    }
    const auto candidate = view.substr(open, close - open);
    try {
      const json parsed = json::parse(candidate);
      if (parsed.is_object() && parsed.contains("final_score")) return std::string(candidate);
    } catch (const json::parse_error&) {
      if (candidate.find("final_score") != std::string_view::npos) saw_undecodable_verdict = true;
    }
  }
  if (saw_unbalanced) throw ParseError(ParseErrc::UnbalancedJson, "", "unterminated JSON object in judge output");
  if (saw_undecodable_verdict) {
    throw ParseError(ParseErrc::InvalidJson, "", "verdict-like object is not valid JSON");
  }
  throw ParseError(ParseErrc::NoJsonFound, "", "no JSON object with a final_score key in judge output");
}

ParsedVerdict parse_verdict(std::string_view json_text, const ValidationPolicy& policy) {
  ParsedVerdict out;
  json obj;
  try {
    obj = parse_checked(strip_bom(json_text), &out.warnings);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrc::InvalidJson, "", std::string("verdict is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(ParseErrc::WrongType, "", "verdict must be a JSON object");

  for (auto field : kSchemaOrder) {
    if (!obj.contains(std::string(field))) {
      throw ParseError(ParseErrc::MissingField, std::string(field), "verdict lacks " + std::string(field));
    }
  }
  if (!policy.allow_extra_keys) {
    for (const auto& item : obj.items()) {
      if (std::find(kSchemaOrder.begin(), kSchemaOrder.end(), item.key()) == kSchemaOrder.end()) {
        throw ParseError(ParseErrc::UnexpectedField, item.key(), "unexpected verdict key " + item.key());
      }
    }
  }

  Verdict& v = out.verdict;
  v.semantic_similarity = read_real(obj, kRealFields[0], policy, out.warnings);
  v.fact_match_ratio = read_real(obj, kRealFields[1], policy, out.warnings);
  v.critical_facts_missed = read_count(obj, kCountFields[0], policy, out.warnings);
  v.supporting_facts_missed = read_count(obj, kCountFields[1], policy, out.warnings);
  v.trivial_facts_missed = read_count(obj, kCountFields[2], policy, out.warnings);
  v.final_score = read_real(obj, kRealFields[2], policy, out.warnings);

  const json& explanation = obj.at("explanation");
  if (!explanation.is_string()) {
    throw ParseError(ParseErrc::WrongType, "explanation",
                     std::string("explanation must be a string, got ") + explanation.type_name());
  }
  v.explanation = explanation.get<std::string>();
  if (std::all_of(v.explanation.begin(), v.explanation.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    throw ParseError(ParseErrc::EmptyField, "explanation", "explanation is empty");
  }
  return out;
}

ParsedVerdict parse_llm_output(std::string_view text, const ValidationPolicy& policy) {
  return parse_verdict(extract_json_block(text), policy);
}

std::string serialize_verdict(const Verdict& v) {
  json obj = {
      {"semantic_similarity", v.semantic_similarity},
      {"fact_match_ratio", v.fact_match_ratio},
      {"critical_facts_missed", v.critical_facts_missed},
      {"supporting_facts_missed", v.supporting_facts_missed},
      {"trivial_facts_missed", v.trivial_facts_missed},
      {"final_score", v.final_score},
      {"explanation", v.explanation},
  };
  return obj.dump();
}

}  // namespace factjudge
