#pragma once

#include <span>
#include <vector>

#include "factjudge/call_cache.hpp"
#include "factjudge/core_model.hpp"
#include "factjudge/llm_gateway.hpp"
#include "factjudge/prompt_builder.hpp"
#include "factjudge/verdict_parser.hpp"

namespace factjudge {

struct JudgePolicies {
  DecisionPolicy decision = DecisionPolicy::strict_facts();
  ValidationPolicy validation;
};

// Renders the prompt with (response, expected_response), calls the judge
// through the cache, parses the verdict and applies the decision policy.
// Parse and gateway failures are recorded on the returned record rather than
// thrown; invalid templates or records still throw.
JudgedRecord judge_record(const EvalRecord& record, const PromptTemplate& tmpl, const ProviderConfig& provider,
                          const JudgePolicies& policies, LlmGateway& gateway, CallCache& cache);

// Aggregates judged records (any order) into a RunResult: sorts by
// request_id, collects final scores and computes HAR over labeled records.
// A labeled record without a verdict counts as a disagreement.
RunResult aggregate_run(std::vector<JudgedRecord> judged, const ProviderConfig& provider, PromptKind kind,
                        const DecisionPolicy& decision);

// Judges every record with up to `parallelism` OpenMP threads.
// Throws PipelineError(EmptyDataset, InvalidArgument).
RunResult run_evaluation(std::span<const EvalRecord> dataset, const PromptTemplate& tmpl,
                         const ProviderConfig& provider, const JudgePolicies& policies, int parallelism,
                         LlmGateway& gateway, CallCache& cache);

// Step one: the baseline prompt on `baseline_provider`. Step two: the weighted
// prompt on each of `providers`. Returns the baseline run first.
// Throws PipelineError(NoProviders).
std::vector<RunResult> run_two_step(std::span<const EvalRecord> dataset, const ProviderConfig& baseline_provider,
                                    std::span<const ProviderConfig> providers, const JudgePolicies& policies,
                                    int parallelism, LlmGateway& gateway, CallCache& cache);

}  // namespace factjudge
