#include "factjudge/judge_pipeline.hpp"

#include <algorithm>
#include <exception>

#include "factjudge/error.hpp"

namespace factjudge {

JudgedRecord judge_record(const EvalRecord& record, const PromptTemplate& tmpl, const ProviderConfig& provider,
                          const JudgePolicies& policies, LlmGateway& gateway, CallCache& cache) {
  if (const auto issues = record_issues(record); !issues.empty()) {
    throw PipelineError(PipelineErrc::InvalidArgument,
                        "record '" + record.request_id + "' has an empty " + issues.front());
  }
  JudgedRecord out;
  out.record = record;
  out.judge_model = provider.model;
  out.prompt_kind = tmpl.kind;

  const std::string prompt = render(tmpl, record.response, record.expected_response);
  try {
    const CompletionResult completion = gateway.cached_complete(make_request(prompt, provider), provider, cache);
    out.raw_response = completion.text;
    out.cache_hit = completion.cache_hit;
  } catch (const GatewayError& e) {
    // Configuration problems are not judgment failures.
    if (e.code() == GatewayErrc::InvalidConfig || e.code() == GatewayErrc::MissingApiKey) throw;
    out.failure_kind = e.kind();
    out.failure_message = e.what();
    return out;
  }

  try {
    ParsedVerdict parsed = parse_llm_output(out.raw_response, policies.validation);
    out.decision = decide_match(parsed.verdict, policies.decision);
    out.verdict = std::move(parsed.verdict);
    out.warnings = std::move(parsed.warnings);
  } catch (const ParseError& e) {
    out.failure_kind = e.kind();
    out.failure_message = e.what();
  }
  return out;
}

RunResult aggregate_run(std::vector<JudgedRecord> judged, const ProviderConfig& provider, PromptKind kind,
                        const DecisionPolicy& decision) {
  std::sort(judged.begin(), judged.end(),
            [](const JudgedRecord& a, const JudgedRecord& b) { return a.record.request_id < b.record.request_id; });

  RunResult run;
  run.label = kind == PromptKind::Baseline ? provider.name + " (baseline)" : provider.name;
  run.provider = provider.name;
  run.judge_model = provider.model;
  run.prompt_kind = kind;
  run.decision_policy = decision.to_string();
  for (const auto& j : judged) {
    if (j.verdict) run.final_scores.push_back(j.verdict->final_score);
    if (j.failed()) ++run.failures;

    const auto& label = j.record.human_label;
    if (!label) {
      ++run.counts.unlabeled;
    } else if (!j.decision) {
      ++run.counts.labeled_failures;
    } else if (*j.decision == *label) {
      ++run.counts.agreements;
    } else {
      ++run.counts.disagreements;
    }
  }
  if (run.counts.labeled() > 0) {
    run.har_percent = 100.0 * static_cast<double>(run.counts.agreements) / static_cast<double>(run.counts.labeled());
  }
  run.judged = std::move(judged);
  return run;
}

RunResult run_evaluation(std::span<const EvalRecord> dataset, const PromptTemplate& tmpl,
                         const ProviderConfig& provider, const JudgePolicies& policies, int parallelism,
                         LlmGateway& gateway, CallCache& cache) {
  if (dataset.empty()) throw PipelineError(PipelineErrc::EmptyDataset, "evaluation set is empty");
  if (parallelism < 1) throw PipelineError(PipelineErrc::InvalidArgument, "parallelism must be >= 1");
  for (const auto& r : dataset) {
    if (const auto issues = record_issues(r); !issues.empty()) {
      throw PipelineError(PipelineErrc::InvalidArgument,
                          "record '" + r.request_id + "' has an empty " + issues.front());
    }
  }
  // Surface template errors before any work is scheduled.
  (void)render(tmpl, "x", "x");

  std::vector<JudgedRecord> judged(dataset.size());
  std::vector<std::exception_ptr> errors(dataset.size());
  const auto n = static_cast<long>(dataset.size());

#pragma omp parallel for num_threads(parallelism) schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      judged[i] = judge_record(dataset[i], tmpl, provider, policies, gateway, cache);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate_run(std::move(judged), provider, tmpl.kind, policies.decision);
}

std::vector<RunResult> run_two_step(std::span<const EvalRecord> dataset, const ProviderConfig& baseline_provider,
                                    std::span<const ProviderConfig> providers, const JudgePolicies& policies,
                                    int parallelism, LlmGateway& gateway, CallCache& cache) {
  if (providers.empty()) throw PipelineError(PipelineErrc::NoProviders, "two-step run needs at least one judge");
  std::vector<RunResult> runs;
  runs.reserve(providers.size() + 1);
  runs.push_back(run_evaluation(dataset, builtin_baseline_template(), baseline_provider, policies, parallelism,
                                gateway, cache));
  const PromptTemplate weighted = builtin_weighted_template();
  for (const auto& p : providers) {
    runs.push_back(run_evaluation(dataset, weighted, p, policies, parallelism, gateway, cache));
  }
  return runs;
}

}  // namespace factjudge
