#include "factjudge/prompt_builder.hpp"

#include <fstream>
#include <sstream>

#include "factjudge/error.hpp"

namespace factjudge {

namespace {

// Output contract shared by both builtin prompts. Key names and type
// annotations are what verdict_parser enforces.
constexpr std::string_view kVerdictFormatBlock =
    "{\n"
    "    \"semantic_similarity\": <float between 0 and 1>,\n"
    "    \"fact_match_ratio\": <float between 0 and 1>,\n"
    "    \"critical_facts_missed\": <integer>,\n"
    "    \"supporting_facts_missed\": <integer>,\n"
    "    \"trivial_facts_missed\": <integer>,\n"
    "    \"final_score\": <float between 0 and 1>,\n"
    "    \"explanation\": <string explaining your evaluation>\n"
    "}\n";

constexpr std::string_view kWeightedPreamble =
    "You are an AI judge evaluating the quality of an AI-generated response compared to a gold "
    "standard response. Your task is to determine if the AI response matches the gold response "
    "based on the following criteria:\n"
    "1. Compare the factual content of both responses.\n"
    "2. Check if the AI response includes facts that are also present in the gold response.\n"
    "3. The AI response can have additional facts not present in the gold response.\n"
    "4. The AI response should not miss any critical or supporting facts from the gold response.\n"
    "5. The AI response can miss trivial facts from the gold response.\n"
    "\n"
    "Please analyze the following responses:\n"
    "\n"
    "AI Response: {ai_response}\n"
    "\n"
    "Gold Response: {gold_response}\n"
    "\n"
    "Provide your evaluation in the following JSON format:\n";

constexpr std::string_view kBaselinePreamble =
    "Does the AI response match the gold response? Answer with the same JSON format.\n"
    "\n"
    "AI Response: {ai_response}\n"
    "\n"
    "Gold Response: {gold_response}\n"
    "\n"
    "JSON format:\n";

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

std::vector<TemplateIssue> validate(const PromptTemplate& tmpl) {
  std::vector<TemplateIssue> issues;
  if (tmpl.body.empty()) issues.push_back({TemplateIssueKind::Empty, ""});
  for (auto slot : {kAiResponseSlot, kGoldResponseSlot}) {
    const auto n = count_occurrences(tmpl.body, slot);
    if (n == 0) issues.push_back({TemplateIssueKind::MissingPlaceholder, std::string(slot)});
    if (n > 1) issues.push_back({TemplateIssueKind::DuplicatePlaceholder, std::string(slot)});
  }
  return issues;
}

std::string render(const PromptTemplate& tmpl, std::string_view ai_response,
                   std::string_view gold_response) {
  for (const auto& issue : validate(tmpl)) {
    switch (issue.kind) {
      case TemplateIssueKind::Empty:
        throw PromptError(PromptErrc::EmptyTemplate, "prompt template body is empty");
      case TemplateIssueKind::MissingPlaceholder:
        throw PromptError(PromptErrc::MissingPlaceholder, "template lacks placeholder " + issue.placeholder);
      case TemplateIssueKind::DuplicatePlaceholder:
        throw PromptError(PromptErrc::DuplicatePlaceholder,
                          "template repeats placeholder " + issue.placeholder);
    }
  }
  if (ai_response.empty()) throw PromptError(PromptErrc::EmptyInput, "ai_response is empty");
  if (gold_response.empty()) throw PromptError(PromptErrc::EmptyInput, "gold_response is empty");

  struct Slot {
    std::size_t pos;
    std::string_view token;
    std::string_view value;
  };
  Slot first{tmpl.body.find(kAiResponseSlot), kAiResponseSlot, ai_response};
  Slot second{tmpl.body.find(kGoldResponseSlot), kGoldResponseSlot, gold_response};
  if (second.pos < first.pos) std::swap(first, second);

  const std::string_view body = tmpl.body;
  std::string out;
  out.reserve(body.size() + ai_response.size() + gold_response.size());
  out.append(body.substr(0, first.pos));
  out.append(first.value);
  const auto mid = first.pos + first.token.size();
  out.append(body.substr(mid, second.pos - mid));
  out.append(second.value);
  out.append(body.substr(second.pos + second.token.size()));
  return out;
}

PromptTemplate builtin_weighted_template() {
  std::string body(kWeightedPreamble);
  body.append(kVerdictFormatBlock);
  return {PromptKind::Weighted, std::move(body)};
}

PromptTemplate builtin_baseline_template() {
  std::string body(kBaselinePreamble);
  body.append(kVerdictFormatBlock);
  return {PromptKind::Baseline, std::move(body)};
}

PromptTemplate builtin_template(PromptKind kind) {
  return kind == PromptKind::Baseline ? builtin_baseline_template() : builtin_weighted_template();
}

PromptTemplate load_template_file(const std::filesystem::path& path, PromptKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PromptError(PromptErrc::Io, "cannot open template file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();

  std::string body;
  body.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r' && i + 1 < raw.size() && raw[i + 1] == '\n') continue;
    body.push_back(raw[i]);
  }
  PromptTemplate tmpl{kind, std::move(body)};
  if (!validate(tmpl).empty()) {
    // render() reports the first issue with the right error code.
    (void)render(tmpl, "x", "x");
  }
  return tmpl;
}

}  // namespace factjudge
