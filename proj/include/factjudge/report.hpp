#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factjudge/core_model.hpp"
#include "factjudge/llm_gateway.hpp"
#include "factjudge/metrics.hpp"
#include "factjudge/stats_tests.hpp"
#include "factjudge/verdict_parser.hpp"

namespace factjudge {

inline constexpr int kRunFileVersion = 1;

// Settings echoed into every run file. Parallelism and cache location are
// deliberately absent: they must not change the output bytes.
struct RunConfigEcho {
  std::string provider;
  std::string model;
  std::string endpoint_url;
  double temperature = 0.0;
  int max_tokens = 0;
  PromptKind prompt_kind = PromptKind::Weighted;
  std::string template_sha256;
  std::string decision_policy;
  ValidationPolicy validation;
};

RunConfigEcho make_config_echo(const ProviderConfig& provider, const std::string& template_body,
                               PromptKind kind, const DecisionPolicy& decision, const ValidationPolicy& validation);

nlohmann::json judged_record_to_json(const JudgedRecord& judged);
nlohmann::json run_to_json(const RunResult& run, const RunConfigEcho& config);
// Two-space indented JSON with sorted keys and shortest round-trip doubles,
// newline terminated.
std::string serialize_run(const RunResult& run, const RunConfigEcho& config);

// The subset of a run file that stats and report consume.
struct RunSummary {
  std::string label;
  PromptKind prompt_kind = PromptKind::Weighted;
  std::optional<double> har_percent;
  std::vector<double> final_scores;
  std::size_t failures = 0;
  std::size_t records = 0;
};

RunSummary summarize_run(const RunResult& run);
// Throws DatasetError(Io) for unreadable files and DatasetError(Schema) for
// files that do not follow the run schema.
RunSummary load_run_file(const std::filesystem::path& path);
RunSummary run_summary_from_json(const nlohmann::json& doc, const std::string& origin);

// Makes labels unique by appending " #2", " #3", ... to repeats.
void disambiguate_labels(std::vector<RunSummary>& runs);

// Markdown pipe table of label vs HAR, one decimal.
std::string har_table_markdown(std::span<const RunSummary> runs);
nlohmann::json run_set_summary_json(std::span<const RunSummary> runs);

struct StatsReport {
  double alpha = 0.05;
  std::vector<RunSummary> runs;
  AnovaResult anova;
  std::vector<PairwiseComparison> pairwise;
};

// ANOVA and Tukey HSD with one group of final scores per run.
// Throws StatsError(TooFewRuns) for fewer than two runs.
StatsReport compute_stats(std::vector<RunSummary> runs, double alpha);
nlohmann::json stats_to_json(const StatsReport& report);
std::string stats_to_markdown(const StatsReport& report);

// Baseline is the first run using the baseline prompt; the treated runs are
// the weighted runs with a HAR value.
std::optional<double> average_improvement(std::span<const RunSummary> runs);

std::string report_markdown(std::span<const RunSummary> runs);
nlohmann::json violin_data_json(std::span<const RunSummary> runs, std::size_t bins = 10);

std::string format_fixed(double value, int decimals);

}  // namespace factjudge
