#include "factjudge/serial/reference.hpp"

#include "../tukey_common.hpp"
#include "factjudge/error.hpp"
#include "factjudge/special_functions.hpp"

namespace factjudge::serial {

RunResult run_evaluation(std::span<const EvalRecord> dataset, const PromptTemplate& tmpl,
                         const ProviderConfig& provider, const JudgePolicies& policies, LlmGateway& gateway,
                         CallCache& cache) {
  if (dataset.empty()) throw PipelineError(PipelineErrc::EmptyDataset, "evaluation set is empty");
  std::vector<JudgedRecord> judged;
  judged.reserve(dataset.size());
  for (const auto& record : dataset) {
    judged.push_back(judge_record(record, tmpl, provider, policies, gateway, cache));
  }
  return aggregate_run(std::move(judged), provider, tmpl.kind, policies.decision);
}

std::vector<PairwiseComparison> tukey_hsd(std::span<const LabeledGroup> groups, double alpha) {
  detail::TukeyLayout layout = detail::tukey_layout(groups, alpha);
  for (auto& c : layout.pairs) {
    c.p_adj = studentized_range_sf(c.q_stat, static_cast<int>(layout.k), layout.df_within);
    c.reject_at_alpha = c.p_adj < alpha;
  }
  return layout.pairs;
}

}  // namespace factjudge::serial
