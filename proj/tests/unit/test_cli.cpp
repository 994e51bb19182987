#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "factjudge/cli.hpp"
#include "markdown_check.hpp"
#include "test_support.hpp"

using namespace factjudge::cli;
using testsupport::fixture;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "factjudge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::filesystem::path& p) { return p.string(); }

}  // namespace

TEST(Cli, ValidatePrintsStats) {
  const auto r = run({"validate", "--dataset", path(fixture("small/dataset.csv"))});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("| Total Count | 4 | 4 |"), std::string::npos) << r.out;
  EXPECT_TRUE(testsupport::valid_pipe_tables(r.out));
}

TEST(Cli, TwoStepRunWritesRunFilesAndSummary) {
  testsupport::TempDir dir;
  const auto r = run({"run", "--dataset", path(fixture("small/dataset.jsonl")), "--labels",
                      path(fixture("small/labels.csv")), "--providers", path(fixture("small/providers.json")),
                      "--prompt", "two-step", "--out", path(dir / "out"), "--cache", path(dir / "cache.jsonl")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "out/baseline-mock_baseline.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out/weighted-mock.json"));
  const auto summary = nlohmann::json::parse(testsupport::read_file(dir / "out/summary.json"));
  EXPECT_EQ(summary.at("runs").size(), 2u);
  EXPECT_EQ(summary.at("average_improvement_pp"), 75.0);
  EXPECT_NE(r.out.find("average improvement 75.0 pp over baseline"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("unparsed"), std::string::npos);

  const auto run_doc = nlohmann::json::parse(testsupport::read_file(dir / "out/weighted-mock.json"));
  for (const char* key : {"version", "config", "records", "har_percent", "final_scores", "failures"}) {
    EXPECT_TRUE(run_doc.contains(key)) << key;
  }
  EXPECT_EQ(run_doc.at("har_display"), "75.0");

  const auto stats = run({"stats", "--runs", path(dir / "out/baseline-mock_baseline.json"),
                          path(dir / "out/weighted-mock.json"), "--out", path(dir / "stats/stats.json")});
  EXPECT_EQ(stats.code, kOk) << stats.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "stats/stats.md"));

  const auto report = run({"report", "--runs", path(dir / "out/baseline-mock_baseline.json"),
                           path(dir / "out/weighted-mock.json"), "--out", path(dir / "report")});
  EXPECT_EQ(report.code, kOk) << report.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "report/violin_data.json"));
  EXPECT_TRUE(testsupport::valid_pipe_tables(testsupport::read_file(dir / "report/report.md")));
}

TEST(Cli, WarmRunsAreByteIdenticalAcrossParallelism) {
  testsupport::TempDir dir;
  auto args = [&](const std::string& out, const std::string& par) {
    return std::vector<std::string>{"run", "--dataset", path(fixture("mock_run/dataset.jsonl")), "--providers",
                                    path(fixture("mock_run/providers.json")), "--cache", path(dir / "cache.jsonl"),
                                    "--parallel", par, "--out", path(dir / out)};
  };
  ASSERT_EQ(run(args("a", "8")).code, kOk);
  ASSERT_EQ(run(args("b", "1")).code, kOk);
  ASSERT_EQ(run(args("c", "5")).code, kOk);
  for (const char* file : {"mock-judge.json", "summary.json", "summary.md"}) {
    const std::string a = testsupport::read_file(dir / "a" / file);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, testsupport::read_file(dir / "b" / file)) << file;
    EXPECT_EQ(a, testsupport::read_file(dir / "c" / file)) << file;
  }
}

TEST(Cli, ExitCodesPerErrorClass) {
  testsupport::TempDir dir;
  EXPECT_EQ(run({"validate", "--dataset", path(dir / "none.jsonl")}).code, kIoError);

  testsupport::write_file(dir / "bad.jsonl", "{\"request_id\":\"x\"}\n");
  EXPECT_EQ(run({"validate", "--dataset", path(dir / "bad.jsonl")}).code, kDataError);

  testsupport::write_file(dir / "remote.json",
                          R"({"providers":[{"name":"r","endpoint_url":"http://127.0.0.1:1/v1","api_key_env":"FACTJUDGE_CLI_ABSENT_KEY"}]})");
  ::unsetenv("FACTJUDGE_CLI_ABSENT_KEY");
  const auto key = run({"--errors-json", "run", "--dataset", path(fixture("small/dataset.jsonl")), "--providers",
                        path(dir / "remote.json"), "--out", path(dir / "o")});
  EXPECT_EQ(key.code, kConfigError);
  const auto err = nlohmann::json::parse(key.err);
  EXPECT_EQ(err.at("error"), "MissingApiKey");
  EXPECT_EQ(err.at("exit_code"), 3);

  testsupport::write_file(dir / "cache.jsonl", "not json\n");
  EXPECT_EQ(run({"run", "--dataset", path(fixture("small/dataset.jsonl")), "--providers",
                 path(fixture("small/providers.json")), "--cache", path(dir / "cache.jsonl"), "--out", path(dir / "o")})
                .code,
            kCacheError);

  EXPECT_EQ(run({"stats", "--runs", path(fixture("har_runs/0_Baseline_Model.json"))}).code, kStatsError);
  EXPECT_EQ(run({"validate", "--bogus"}).code, kUsageError);
  EXPECT_EQ(run({}).code, kUsageError);
  EXPECT_EQ(run({"run", "--dataset", path(fixture("small/dataset.jsonl")), "--providers",
                 path(fixture("small/providers.json")), "--policy", "lenient", "--out", path(dir / "o")})
                .code,
            kUsageError);
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Cli, ExitCodesAreDistinct) {
  const std::vector<int> codes{kOk, kIoError, kDataError, kConfigError, kCacheError, kStatsError, kUsageError,
                               kInternalError};
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = i + 1; j < codes.size(); ++j) EXPECT_NE(codes[i], codes[j]);
}

TEST(Cli, LabelSlug) {
  EXPECT_EQ(label_slug("GPT-4o (baseline)"), "GPT-4o_baseline");
  EXPECT_EQ(label_slug("Llama 3.1 70B"), "Llama_3.1_70B");
  EXPECT_EQ(label_slug("///"), "run");
}
