#include "factjudge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "factjudge/error.hpp"

namespace factjudge {

using json = nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const char* range_handling_name(RangeHandling r) { return r == RangeHandling::Clamp ? "clamp" : "reject"; }

std::string md_cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

RunConfigEcho make_config_echo(const ProviderConfig& provider, const std::string& template_body, PromptKind kind,
                               const DecisionPolicy& decision, const ValidationPolicy& validation) {
  RunConfigEcho echo;
  echo.provider = provider.name;
  echo.model = provider.model;
  echo.endpoint_url = provider.endpoint_url;
  echo.temperature = provider.temperature;
  echo.max_tokens = provider.max_tokens;
  echo.prompt_kind = kind;
  echo.template_sha256 = sha256_hex(template_body);
  echo.decision_policy = decision.to_string();
  echo.validation = validation;
  return echo;
}

json judged_record_to_json(const JudgedRecord& j) {
  json record = {{"request_id", j.record.request_id},
                 {"request", j.record.request},
                 {"expected_response", j.record.expected_response},
                 {"response", j.record.response},
                 {"human_label", j.record.human_label ? json(*j.record.human_label) : json(nullptr)}};
  json verdict = nullptr;
  if (j.verdict) {
    const Verdict& v = *j.verdict;
    verdict = {{"semantic_similarity", v.semantic_similarity},
               {"fact_match_ratio", v.fact_match_ratio},
               {"critical_facts_missed", v.critical_facts_missed},
               {"supporting_facts_missed", v.supporting_facts_missed},
               {"trivial_facts_missed", v.trivial_facts_missed},
               {"final_score", v.final_score},
               {"explanation", v.explanation}};
  }
  json failure = nullptr;
  if (j.failed()) failure = {{"kind", j.failure_kind}, {"message", j.failure_message}};
  // cache_hit is left out so a cold run and its warm replay share bytes.
  return {{"record", record},
          {"raw_response", j.raw_response},
          {"verdict", verdict},
          {"failure", failure},
          {"warnings", j.warnings},
          {"decision", j.decision ? json(*j.decision) : json(nullptr)},
          {"judge_model", j.judge_model},
          {"prompt_kind", to_string(j.prompt_kind)}};
}

json run_to_json(const RunResult& run, const RunConfigEcho& config) {
  json records = json::array();
  for (const auto& j : run.judged) records.push_back(judged_record_to_json(j));
  json cfg = {{"provider", config.provider},
              {"model", config.model},
              {"endpoint_url", config.endpoint_url},
              {"temperature", config.temperature},
              {"max_tokens", config.max_tokens},
              {"prompt_kind", to_string(config.prompt_kind)},
              {"template_sha256", config.template_sha256},
              {"decision_policy", config.decision_policy},
              {"validation",
               {{"range_handling", range_handling_name(config.validation.range_handling)},
                {"allow_extra_keys", config.validation.allow_extra_keys},
                {"allow_integer_like_reals", config.validation.allow_integer_like_reals}}}};
  return {{"version", kRunFileVersion},
          {"label", run.label},
          {"judge_model", run.judge_model},
          {"prompt_kind", to_string(run.prompt_kind)},
          {"config", cfg},
          {"records", records},
          {"har_percent", optional_number(run.har_percent)},
          {"har_display", run.har_percent ? json(format_har(*run.har_percent)) : json(nullptr)},
          {"final_scores", run.final_scores},
          {"failures", run.failures},
          {"counts",
           {{"agreements", run.counts.agreements},
            {"disagreements", run.counts.disagreements},
            {"labeled_failures", run.counts.labeled_failures},
            {"unlabeled", run.counts.unlabeled}}}};
}

std::string serialize_run(const RunResult& run, const RunConfigEcho& config) {
  return run_to_json(run, config).dump(2) + "\n";
}

RunSummary summarize_run(const RunResult& run) {
  return {run.label, run.prompt_kind, run.har_percent, run.final_scores, run.failures, run.judged.size()};
}

RunSummary run_summary_from_json(const json& doc, const std::string& origin) {
  try {
    RunSummary s;
    s.label = doc.at("label").get<std::string>();
    s.prompt_kind = prompt_kind_from_string(doc.at("prompt_kind").get<std::string>());
    if (!doc.at("har_percent").is_null()) s.har_percent = doc.at("har_percent").get<double>();
    s.final_scores = doc.at("final_scores").get<std::vector<double>>();
    s.failures = doc.at("failures").get<std::size_t>();
    s.records = doc.contains("records") ? doc.at("records").size() : s.final_scores.size() + s.failures;
    return s;
  } catch (const std::exception& e) {
    throw DatasetError(DatasetErrc::Schema, 0, "", origin + ": not a run file (" + e.what() + ")");
  }
}

RunSummary load_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(DatasetErrc::Io, 0, "", "cannot open run file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DatasetError(DatasetErrc::Schema, 0, "", path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return run_summary_from_json(doc, path.string());
}

void disambiguate_labels(std::vector<RunSummary>& runs) {
  std::map<std::string, int> seen;
  for (auto& r : runs) {
    const int n = ++seen[r.label];
    if (n > 1) r.label += " #" + std::to_string(n);
  }
}

std::string har_table_markdown(std::span<const RunSummary> runs) {
  std::string out = "| Model | Human Alignment Rate (%) |\n|---|---|\n";
  for (const auto& r : runs) {
    out += "| " + md_cell(r.label) + " | " + (r.har_percent ? format_har(*r.har_percent) : std::string("n/a")) + " |\n";
  }
  return out;
}

json run_set_summary_json(std::span<const RunSummary> runs) {
  json rows = json::array();
  for (const auto& r : runs) {
    rows.push_back({{"label", r.label},
                    {"prompt_kind", to_string(r.prompt_kind)},
                    {"har_percent", optional_number(r.har_percent)},
                    {"har_display", r.har_percent ? json(format_har(*r.har_percent)) : json(nullptr)},
                    {"failures", r.failures},
                    {"records", r.records}});
  }
  json out = {{"version", kRunFileVersion}, {"runs", rows}};
  const auto delta = average_improvement(runs);
  out["average_improvement_pp"] = optional_number(delta);
  return out;
}

StatsReport compute_stats(std::vector<RunSummary> runs, double alpha) {
  if (runs.size() < 2) throw StatsError(StatsErrc::TooFewRuns, "stats need at least two run files");
  disambiguate_labels(runs);
  std::vector<LabeledGroup> groups;
  std::vector<std::vector<double>> values;
  for (const auto& r : runs) {
    if (r.final_scores.empty()) {
      throw StatsError(StatsErrc::TooFewObservations, "run '" + r.label + "' has no parsed final scores");
    }
    groups.push_back({r.label, r.final_scores});
    values.push_back(r.final_scores);
  }
  StatsReport report;
  report.alpha = alpha;
  report.anova = one_way_anova(values);
  report.pairwise = tukey_hsd(groups, alpha);
  report.runs = std::move(runs);
  return report;
}

json stats_to_json(const StatsReport& report) {
  json groups = json::array();
  for (const auto& r : report.runs) {
    double mean = 0.0;
    for (double x : r.final_scores) mean += x;
    mean /= static_cast<double>(r.final_scores.size());
    groups.push_back({{"label", r.label}, {"n", r.final_scores.size()}, {"mean", mean}});
  }
  json pairs = json::array();
  for (const auto& c : report.pairwise) {
    pairs.push_back({{"group1", c.group_a},
                     {"group2", c.group_b},
                     {"mean_diff", c.mean_diff},
                     {"q_stat", c.q_stat},
                     {"p_adj", c.p_adj},
                     {"p_adj_display", format_p_value(c.p_adj)},
                     {"reject", c.reject_at_alpha}});
  }
  const AnovaResult& a = report.anova;
  return {{"version", kRunFileVersion},
          {"alpha", report.alpha},
          {"groups", groups},
          {"anova",
           {{"f_stat", a.f_stat},
            {"df_between", a.df_between},
            {"df_within", a.df_within},
            {"p_value", a.p_value},
            {"ss_between", a.ss_between},
            {"ss_within", a.ss_within}}},
          {"anova_display", {{"f_stat", format_fixed(a.f_stat, 4)}, {"p_value", format_p_value(a.p_value)}}},
          {"pairwise", pairs}};
}

std::string stats_to_markdown(const StatsReport& report) {
  std::string out = "## One-way ANOVA\n\n| Statistic | Value |\n|---|---|\n";
  out += "| F-statistic | " + format_fixed(report.anova.f_stat, 4) + " |\n";
  out += "| p-value | " + format_p_value(report.anova.p_value) + " |\n";
  out += "\n## Tukey HSD\n\n| Group1 | Group2 | p-adj |\n|---|---|---|\n";
  for (const auto& c : report.pairwise) {
    out += "| " + md_cell(c.group_a) + " | " + md_cell(c.group_b) + " | " + format_p_value(c.p_adj) + " |\n";
  }
  return out;
}

std::optional<double> average_improvement(std::span<const RunSummary> runs) {
  const auto baseline = std::find_if(runs.begin(), runs.end(), [](const RunSummary& r) {
    return r.prompt_kind == PromptKind::Baseline && r.har_percent.has_value();
  });
  if (baseline == runs.end()) return std::nullopt;
  std::vector<double> treated;
  for (const auto& r : runs) {
    if (r.prompt_kind == PromptKind::Weighted && r.har_percent) treated.push_back(*r.har_percent);
  }
  if (treated.empty()) return std::nullopt;
  return improvement(*baseline->har_percent, treated);
}

std::string report_markdown(std::span<const RunSummary> runs) {
  std::string out = "# Judge comparison\n\n";
  out += har_table_markdown(runs);
  if (const auto delta = average_improvement(runs)) {
    out += "\naverage improvement " + format_fixed(*delta, 1) + " pp over baseline\n";
  }
  out += "\n## Failures\n\n| Model | Records | Parsed scores | Failures |\n|---|---|---|---|\n";
  for (const auto& r : runs) {
    out += "| " + md_cell(r.label) + " | " + std::to_string(r.records) + " | " +
           std::to_string(r.final_scores.size()) + " | " + std::to_string(r.failures) + " |\n";
  }
  std::string warnings;
  for (const auto& r : runs) {
    if (r.final_scores.empty()) warnings += "- " + r.label + ": no parsed scores (n=0)\n";
  }
  if (!warnings.empty()) out += "\n## Warnings\n\n" + warnings;
  return out;
}

json violin_data_json(std::span<const RunSummary> runs, std::size_t bins) {
  json models = json::array();
  for (const auto& r : runs) {
    std::vector<double> sorted = r.final_scores;
    std::sort(sorted.begin(), sorted.end());
    json entry = {{"label", r.label}, {"n", sorted.size()}, {"sorted_scores", sorted}};
    if (sorted.empty()) {
      entry["summary"] = nullptr;
      entry["warning"] = "no parsed scores";
    } else {
      const DistributionSummary d = score_distribution(sorted, bins);
      json hist = json::array();
      for (const auto& b : d.histogram) hist.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
      entry["summary"] = {{"n", d.n},           {"mean", d.mean}, {"min", d.min}, {"q1", d.q1},
                          {"median", d.median}, {"q3", d.q3},     {"max", d.max}, {"histogram", hist}};
    }
    models.push_back(std::move(entry));
  }
  return {{"version", kRunFileVersion}, {"score", "final_score"}, {"models", models}};
}

}  // namespace factjudge
