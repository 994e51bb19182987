#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "factjudge/dataset_io.hpp"
#include "factjudge/error.hpp"
#include "factjudge/judge_pipeline.hpp"
#include "factjudge/report.hpp"
#include "factjudge/serial/reference.hpp"
#include "test_support.hpp"

using namespace factjudge;
using testsupport::fixture;

namespace {

struct MockRunFixture {
  std::vector<EvalRecord> records = load_eval_set(fixture("mock_run/dataset.jsonl"), DatasetFormat::Jsonl);
  ProviderConfig provider = load_provider_configs(fixture("mock_run/providers.json")).at(0);
  nlohmann::json expected = nlohmann::json::parse(testsupport::read_file(fixture("mock_run/expected.json")));
};

}  // namespace

TEST(Pipeline, MockRunMatchesIndependentCounts) {
  MockRunFixture f;
  LlmGateway gw;
  CallCache cache;
  const RunResult run = run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 4, gw, cache);
  EXPECT_EQ(run.judged.size(), 192u);
  EXPECT_EQ(run.counts.agreements, f.expected.at("agreements").get<std::size_t>());
  EXPECT_EQ(run.counts.disagreements, f.expected.at("disagreements").get<std::size_t>());
  EXPECT_EQ(run.counts.labeled_failures, f.expected.at("labeled_failures").get<std::size_t>());
  EXPECT_EQ(run.counts.total(), f.records.size());
  ASSERT_TRUE(run.har_percent.has_value());
  EXPECT_EQ(*run.har_percent, f.expected.at("har_percent").get<double>());
  EXPECT_EQ(run.failures, run.counts.labeled_failures);
  EXPECT_EQ(run.final_scores.size(), 192u - run.failures);
  for (const auto& j : run.judged) EXPECT_EQ(j.decision.has_value(), j.verdict.has_value());
}

TEST(Pipeline, ParallelEqualsSerialReference) {
  MockRunFixture f;
  LlmGateway gw_serial, gw_parallel;
  CallCache c1, c2;
  const auto serial_run = serial::run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, gw_serial, c1);
  for (int threads : {1, 3, 8}) {
    CallCache c;
    LlmGateway gw;
    EXPECT_EQ(run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, threads, gw, c), serial_run)
        << threads;
  }
}

TEST(Pipeline, OrderIndependent) {
  MockRunFixture f;
  LlmGateway gw;
  CallCache cache;
  const auto reference = run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 2, gw, cache);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    auto shuffled = f.records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    LlmGateway g2;
    CallCache c2;
    auto run = run_evaluation(shuffled, builtin_weighted_template(), f.provider, {}, 8, g2, c2);
    EXPECT_EQ(run, reference);
  }
  auto judged = reference.judged;
  std::reverse(judged.begin(), judged.end());
  EXPECT_EQ(aggregate_run(judged, f.provider, PromptKind::Weighted, DecisionPolicy::strict_facts()), reference);
}

TEST(Pipeline, WarmCacheReplayMakesNoCalls) {
  MockRunFixture f;
  testsupport::TempDir dir;
  const auto echo = make_config_echo(f.provider, builtin_weighted_template().body, PromptKind::Weighted,
                                     DecisionPolicy::strict_facts(), {});
  std::string cold_bytes;
  {
    CallCache cache(dir / "cache.jsonl");
    LlmGateway gw;
    const auto run = run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 8, gw, cache);
    EXPECT_EQ(gw.network_calls(), 192u);
    cold_bytes = serialize_run(run, echo);
  }
  CallCache cache(dir / "cache.jsonl");
  LlmGateway gw;
  auto warm = run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 3, gw, cache);
  EXPECT_EQ(gw.network_calls(), 0u);
  for (const auto& j : warm.judged) EXPECT_TRUE(j.cache_hit);
  const std::string warm_bytes = serialize_run(warm, echo);

  CallCache cache2(dir / "cache.jsonl");
  LlmGateway gw2;
  EXPECT_EQ(serialize_run(run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 1, gw2, cache2), echo),
            warm_bytes);
  EXPECT_EQ(cold_bytes, warm_bytes);
}

TEST(Pipeline, ThresholdPolicyChangesDecisions) {
  MockRunFixture f;
  LlmGateway gw;
  CallCache cache;
  JudgePolicies strict;
  JudgePolicies lenient;
  lenient.decision = DecisionPolicy::score_threshold(0.0);
  const auto a = run_evaluation(f.records, builtin_weighted_template(), f.provider, strict, 4, gw, cache);
  const auto b = run_evaluation(f.records, builtin_weighted_template(), f.provider, lenient, 4, gw, cache);
  EXPECT_EQ(gw.network_calls(), 192u);
  for (const auto& j : b.judged) {
    if (j.verdict) {
      EXPECT_TRUE(*j.decision);
    }
  }
  EXPECT_NE(a.har_percent, b.har_percent);
  EXPECT_EQ(b.decision_policy, "threshold:0");
}

TEST(Pipeline, GatewayFailuresAreRecorded) {
  MockRunFixture f;
  ProviderConfig broken = f.provider;
  broken.mock->always_status = 503;
  broken.max_retries = 1;
  GatewayOptions o;
  o.sleep = [](std::chrono::milliseconds) {};
  LlmGateway gw(o);
  CallCache cache;
  std::vector<EvalRecord> few(f.records.begin(), f.records.begin() + 6);
  const auto run = run_evaluation(few, builtin_weighted_template(), broken, {}, 2, gw, cache);
  EXPECT_EQ(run.failures, 6u);
  EXPECT_TRUE(run.final_scores.empty());
  EXPECT_EQ(run.counts.labeled_failures, 6u);
  ASSERT_TRUE(run.har_percent.has_value());
  EXPECT_EQ(*run.har_percent, 0.0);
  EXPECT_EQ(run.judged[0].failure_kind, "HttpError");
  EXPECT_EQ(cache.size(), 0u);
}

TEST(Pipeline, NoLabelsMeansNoHar) {
  MockRunFixture f;
  std::vector<EvalRecord> unlabeled(f.records.begin(), f.records.begin() + 5);
  for (auto& r : unlabeled) r.human_label.reset();
  LlmGateway gw;
  CallCache cache;
  const auto run = run_evaluation(unlabeled, builtin_weighted_template(), f.provider, {}, 2, gw, cache);
  EXPECT_FALSE(run.har_percent.has_value());
  EXPECT_EQ(run.counts.unlabeled, 5u);
}

TEST(Pipeline, RejectsBadInput) {
  MockRunFixture f;
  LlmGateway gw;
  CallCache cache;
  EXPECT_THROW(run_evaluation({}, builtin_weighted_template(), f.provider, {}, 1, gw, cache), PipelineError);
  EXPECT_THROW(run_evaluation(f.records, builtin_weighted_template(), f.provider, {}, 0, gw, cache), PipelineError);
  auto bad = f.records;
  bad[3].response.clear();
  EXPECT_THROW(run_evaluation(bad, builtin_weighted_template(), f.provider, {}, 4, gw, cache), PipelineError);
  EXPECT_THROW(run_evaluation(f.records, PromptTemplate{PromptKind::Weighted, "no slots"}, f.provider, {}, 4, gw, cache),
               PromptError);
}

TEST(Pipeline, TwoStepRunsBaselineThenWeighted) {
  auto records = load_eval_set(fixture("small/dataset.jsonl"), DatasetFormat::Jsonl);
  apply_human_labels(records, load_human_labels(fixture("small/labels.csv")));
  const auto providers = load_provider_configs(fixture("small/providers.json"));
  LlmGateway gw;
  CallCache cache;
  const std::vector<ProviderConfig> judges{providers[1]};
  const auto runs = run_two_step(records, providers[0], judges, {}, 2, gw, cache);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].prompt_kind, PromptKind::Baseline);
  EXPECT_EQ(runs[0].label, "baseline-mock (baseline)");
  EXPECT_EQ(runs[1].prompt_kind, PromptKind::Weighted);
  // Baseline passes r2 only; labels are pass, fail, pass, pass.
  EXPECT_EQ(*runs[0].har_percent, 0.0);
  // Weighted matches r1, r2, r4 and fails to parse r3.
  EXPECT_EQ(*runs[1].har_percent, 75.0);
  EXPECT_EQ(runs[1].failures, 1u);
  EXPECT_EQ(runs[1].judged[2].failure_kind, "NoJsonFound");
  EXPECT_THROW(run_two_step(records, providers[0], {}, {}, 1, gw, cache), PipelineError);
}
