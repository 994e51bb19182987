#include <gtest/gtest.h>

#include "factjudge/error.hpp"
#include "factjudge/prompt_builder.hpp"
#include "test_support.hpp"

using namespace factjudge;
using testsupport::fixture;
using testsupport::read_file;

namespace {

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

}  // namespace

TEST(PromptGolden, WeightedRenderMatchesGoldenBytes) {
  const std::string ai = read_file(fixture("prompts/pair_ai_response.txt"));
  const std::string gold = read_file(fixture("prompts/pair_gold_response.txt"));
  const std::string expected = read_file(fixture("prompts/weighted_golden.txt"));
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(render(builtin_weighted_template(), ai, gold), expected);
}

TEST(PromptGolden, WeightedHasCriteriaAndKeys) {
  const std::string body = builtin_weighted_template().body;
  for (const char* line : {"1. Compare the factual content", "2. Check if the AI response includes facts",
                           "3. The AI response can have additional facts", "4. The AI response should not miss any critical",
                           "5. The AI response can miss trivial facts"}) {
    EXPECT_NE(body.find(line), std::string::npos) << line;
  }
  for (const char* key : {"semantic_similarity", "fact_match_ratio", "critical_facts_missed", "supporting_facts_missed",
                          "trivial_facts_missed", "final_score", "explanation"}) {
    EXPECT_EQ(occurrences(body, std::string("\"") + key + "\""), 1u) << key;
  }
  EXPECT_EQ(body.find('\r'), std::string::npos);
}

TEST(PromptBaseline, HasNoTierCriteriaOutsideFormatBlock) {
  const PromptTemplate t = builtin_baseline_template();
  EXPECT_EQ(t.kind, PromptKind::Baseline);
  EXPECT_TRUE(validate(t).empty());
  const std::string prose = t.body.substr(0, t.body.find('{', t.body.find(kGoldResponseSlot) + 1));
  for (const char* word : {"critical", "supporting", "trivial"}) {
    EXPECT_EQ(prose.find(word), std::string::npos) << word;
  }
  EXPECT_NE(t.body.find("\"final_score\""), std::string::npos);
}

TEST(PromptRender, InputsAppearOnceAndAreNotRescanned) {
  const PromptTemplate t = builtin_weighted_template();
  const std::string ai = "answer mentioning {gold_response} literally";
  const std::string out = render(t, ai, "gold text");
  EXPECT_EQ(occurrences(out, ai), 1u);
  EXPECT_EQ(occurrences(out, "gold text"), 1u);
  EXPECT_EQ(occurrences(out, "{ai_response}"), 0u);
}

TEST(PromptRender, InjectiveOnInputs) {
  for (const auto& t : {builtin_weighted_template(), builtin_baseline_template()}) {
    EXPECT_NE(render(t, "a", "bc"), render(t, "ab", "c"));
    EXPECT_NE(render(t, "x", "y"), render(t, "y", "x"));
  }
}

TEST(PromptRender, Errors) {
  EXPECT_THROW(render(builtin_weighted_template(), "", "gold"), PromptError);
  try {
    render(PromptTemplate{PromptKind::Weighted, "only {ai_response}"}, "a", "g");
    FAIL();
  } catch (const PromptError& e) {
    EXPECT_EQ(e.code(), PromptErrc::MissingPlaceholder);
  }
  try {
    render(PromptTemplate{PromptKind::Weighted, "{ai_response}{ai_response}{gold_response}"}, "a", "g");
    FAIL();
  } catch (const PromptError& e) {
    EXPECT_EQ(e.code(), PromptErrc::DuplicatePlaceholder);
  }
  try {
    render(PromptTemplate{PromptKind::Weighted, ""}, "a", "g");
    FAIL();
  } catch (const PromptError& e) {
    EXPECT_EQ(e.code(), PromptErrc::EmptyTemplate);
  }
}

TEST(PromptValidate, ReportsEveryIssue) {
  const auto issues = validate(PromptTemplate{PromptKind::Weighted, "{gold_response} {gold_response}"});
  ASSERT_EQ(issues.size(), 2u);
  EXPECT_EQ(issues[0].kind, TemplateIssueKind::MissingPlaceholder);
  EXPECT_EQ(issues[0].placeholder, kAiResponseSlot);
  EXPECT_EQ(issues[1].kind, TemplateIssueKind::DuplicatePlaceholder);
  EXPECT_EQ(validate(PromptTemplate{PromptKind::Weighted, ""}).front().kind, TemplateIssueKind::Empty);
}

TEST(PromptFile, LoadNormalizesLineEndings) {
  testsupport::TempDir dir;
  testsupport::write_file(dir / "t.txt", "Judge:\r\nA: {ai_response}\r\nG: {gold_response}\r\n");
  const PromptTemplate t = load_template_file(dir / "t.txt", PromptKind::Weighted);
  EXPECT_EQ(t.body, "Judge:\nA: {ai_response}\nG: {gold_response}\n");
  testsupport::write_file(dir / "bad.txt", "no slots");
  EXPECT_THROW(load_template_file(dir / "bad.txt", PromptKind::Weighted), PromptError);
  EXPECT_THROW(load_template_file(dir / "missing.txt", PromptKind::Weighted), PromptError);
}
