#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factjudge/core_model.hpp"

namespace factjudge {

enum class RangeHandling { Reject, Clamp };

struct ValidationPolicy {
  RangeHandling range_handling = RangeHandling::Clamp;
  bool allow_extra_keys = true;
  // Accept 1 where 1.0 is expected.
  bool allow_integer_like_reals = true;

  bool operator==(const ValidationPolicy&) const = default;
};

struct ParsedVerdict {
  Verdict verdict;
  // Clamped values, duplicate keys and similar recoverable findings.
  std::vector<std::string> warnings;
};

// Finds the verdict object in free-form judge output. Code fences are removed
// first; candidates are outermost balanced {...} spans (brace matching ignores
// braces inside JSON strings) that decode as an object holding "final_score".
// A leading UTF-8 BOM is ignored.
// Throws ParseError(NoJsonFound) or ParseError(UnbalancedJson).
std::string extract_json_block(std::string_view text);

// Validates a JSON object against the verdict schema. Duplicate keys resolve
// to the last occurrence and produce a warning.
ParsedVerdict parse_verdict(std::string_view json_text, const ValidationPolicy& policy = {});

// extract_json_block followed by parse_verdict.
ParsedVerdict parse_llm_output(std::string_view text, const ValidationPolicy& policy = {});

// Compact JSON with the seven schema keys.
std::string serialize_verdict(const Verdict& verdict);

}  // namespace factjudge
