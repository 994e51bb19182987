#include "factjudge/core_model.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace factjudge {

namespace {

bool in_unit_interval(double value) noexcept { return value >= 0.0 && value <= 1.0; }

double parse_threshold(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("decision threshold is not a number: " + std::string(text));
  }
  return value;
}

}  // namespace

std::vector<std::string> record_issues(const EvalRecord& record) {
  std::vector<std::string> issues;
  if (record.request_id.empty()) issues.emplace_back("request_id");
  if (record.request.empty()) issues.emplace_back("request");
  if (record.expected_response.empty()) issues.emplace_back("expected_response");
  if (record.response.empty()) issues.emplace_back("response");
  return issues;
}

bool is_valid(const Verdict& verdict) noexcept {
  return in_unit_interval(verdict.semantic_similarity) && in_unit_interval(verdict.fact_match_ratio) &&
         in_unit_interval(verdict.final_score) && verdict.critical_facts_missed >= 0 &&
         verdict.supporting_facts_missed >= 0 && verdict.trivial_facts_missed >= 0 &&
         !verdict.explanation.empty();
}

DecisionPolicy DecisionPolicy::score_threshold(double threshold) {
  if (!in_unit_interval(threshold)) throw std::invalid_argument("decision threshold must be in [0,1]");
  return DecisionPolicy(PolicyMode::ScoreThreshold, threshold);
}

DecisionPolicy DecisionPolicy::hybrid(double threshold) {
  if (!in_unit_interval(threshold)) throw std::invalid_argument("decision threshold must be in [0,1]");
  return DecisionPolicy(PolicyMode::Hybrid, threshold);
}

DecisionPolicy DecisionPolicy::parse(std::string_view text) {
  if (text == "strict") return strict_facts();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto mode = text.substr(0, colon);
    const auto value = parse_threshold(text.substr(colon + 1));
    if (mode == "threshold") return score_threshold(value);
    if (mode == "hybrid") return hybrid(value);
  }
  throw std::invalid_argument("unknown decision policy '" + std::string(text) +
                              "' (expected strict, threshold:T or hybrid:T)");
}

std::string DecisionPolicy::to_string() const {
  if (mode_ == PolicyMode::StrictFacts) return "strict";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%g", mode_ == PolicyMode::Hybrid ? "hybrid" : "threshold", threshold_);
  return buf;
}

bool decide_match(const Verdict& verdict, const DecisionPolicy& policy) noexcept {
  const bool facts_ok = verdict.critical_facts_missed == 0 && verdict.supporting_facts_missed == 0;
  const bool score_ok = verdict.final_score >= policy.threshold();
  switch (policy.mode()) {
    case PolicyMode::StrictFacts: return facts_ok;
    case PolicyMode::ScoreThreshold: return score_ok;
    case PolicyMode::Hybrid: return facts_ok && score_ok;
  }
  return false;
}

const char* to_string(PromptKind kind) noexcept {
  return kind == PromptKind::Baseline ? "baseline" : "weighted";
}

PromptKind prompt_kind_from_string(std::string_view text) {
  if (text == "baseline") return PromptKind::Baseline;
  if (text == "weighted") return PromptKind::Weighted;
  throw std::invalid_argument("unknown prompt kind '" + std::string(text) + "'");
}

}  // namespace factjudge
