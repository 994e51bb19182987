#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factjudge {

struct RetrievedContext {
  std::string doc_uri;
  std::string content;

  bool operator==(const RetrievedContext&) const = default;
};

// One row of an evaluation set: a user query, the curated gold answer, the
// candidate answer under evaluation and, optionally, a human pass/fail label.
struct EvalRecord {
  std::string request_id;
  std::string request;
  std::string expected_response;
  std::string response;
  std::optional<std::vector<RetrievedContext>> expected_retrieved_context;
  std::optional<bool> human_label;

  bool operator==(const EvalRecord&) const = default;
};

// Returns the names of fields that violate the record invariants
// (nonempty id, request, expected_response and response).
std::vector<std::string> record_issues(const EvalRecord& record);

// The seven-field verdict a judge model must return.
struct Verdict {
  double semantic_similarity = 0.0;
  double fact_match_ratio = 0.0;
  std::int64_t critical_facts_missed = 0;
  std::int64_t supporting_facts_missed = 0;
  std::int64_t trivial_facts_missed = 0;
  double final_score = 0.0;
  std::string explanation;

  bool operator==(const Verdict&) const = default;
};

bool is_valid(const Verdict& verdict) noexcept;

enum class PolicyMode { StrictFacts, ScoreThreshold, Hybrid };

// How a verdict becomes a binary "matches the gold response" decision.
class DecisionPolicy {
 public:
  static DecisionPolicy strict_facts() noexcept { return DecisionPolicy(PolicyMode::StrictFacts, 0.0); }
  // Throws std::invalid_argument unless threshold is in [0,1].
  static DecisionPolicy score_threshold(double threshold);
  static DecisionPolicy hybrid(double threshold);

  // Accepts "strict", "threshold:T" and "hybrid:T".
  static DecisionPolicy parse(std::string_view text);

  PolicyMode mode() const noexcept { return mode_; }
  double threshold() const noexcept { return threshold_; }
  std::string to_string() const;

  bool operator==(const DecisionPolicy&) const = default;

 private:
  DecisionPolicy(PolicyMode mode, double threshold) : mode_(mode), threshold_(threshold) {}

  PolicyMode mode_;
  double threshold_;
};

// StrictFacts: no critical and no supporting facts missed (trivial misses are
// tolerated). ScoreThreshold: final_score >= threshold. Hybrid: both.
bool decide_match(const Verdict& verdict, const DecisionPolicy& policy) noexcept;

enum class PromptKind { Baseline, Weighted };

const char* to_string(PromptKind kind) noexcept;
// "baseline" or "weighted"; throws std::invalid_argument otherwise.
PromptKind prompt_kind_from_string(std::string_view text);

struct JudgedRecord {
  EvalRecord record;
  std::string raw_response;
  std::optional<Verdict> verdict;
  // Parse or gateway error kind and message when verdict is absent.
  std::string failure_kind;
  std::string failure_message;
  std::vector<std::string> warnings;
  std::optional<bool> decision;
  std::string judge_model;
  PromptKind prompt_kind = PromptKind::Weighted;
  bool cache_hit = false;

  bool failed() const noexcept { return !verdict.has_value(); }
  bool operator==(const JudgedRecord&) const = default;
};

// Agreement bookkeeping for one run. Every judged record lands in exactly one
// of agreements, disagreements, labeled_failures, unlabeled.
struct AlignmentCounts {
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t labeled_failures = 0;
  std::size_t unlabeled = 0;

  std::size_t labeled() const noexcept { return agreements + disagreements + labeled_failures; }
  std::size_t total() const noexcept { return labeled() + unlabeled; }
  bool operator==(const AlignmentCounts&) const = default;
};

struct RunResult {
  std::string label;
  std::string provider;
  std::string judge_model;
  PromptKind prompt_kind = PromptKind::Weighted;
  std::string decision_policy;
  std::vector<JudgedRecord> judged;  // sorted by request_id
  std::optional<double> har_percent;
  std::vector<double> final_scores;  // parsed verdicts only, in judged order
  std::size_t failures = 0;
  AlignmentCounts counts;

  bool operator==(const RunResult&) const = default;
};

}  // namespace factjudge
