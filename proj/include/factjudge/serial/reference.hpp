#pragma once

// Single-threaded reference versions of the OpenMP kernels. Tests check the
// parallel paths against these; bench_kernels times both.

#include <span>
#include <vector>

#include "factjudge/judge_pipeline.hpp"
#include "factjudge/stats_tests.hpp"

namespace factjudge::serial {

RunResult run_evaluation(std::span<const EvalRecord> dataset, const PromptTemplate& tmpl,
                         const ProviderConfig& provider, const JudgePolicies& policies, LlmGateway& gateway,
                         CallCache& cache);

std::vector<PairwiseComparison> tukey_hsd(std::span<const LabeledGroup> groups, double alpha = 0.05);

}  // namespace factjudge::serial
