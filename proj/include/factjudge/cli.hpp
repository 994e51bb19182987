#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace factjudge::cli {

// Process exit codes; one per error class.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kDataError = 2,
  kConfigError = 3,
  kCacheError = 4,
  kStatsError = 5,
  kUsageError = 64,
  kInternalError = 70,
};

struct RunOptions {
  std::filesystem::path dataset;
  std::optional<std::string> format;  // jsonl | csv, default from extension
  std::filesystem::path providers;
  std::optional<std::filesystem::path> labels;
  std::string prompt = "weighted";  // weighted | baseline | two-step
  std::optional<std::filesystem::path> template_file;
  std::string policy = "strict";
  std::string range_handling = "clamp";
  int parallel = 1;
  std::optional<std::filesystem::path> cache;
  std::filesystem::path out;
  bool errors_json = false;
};

struct StatsOptions {
  std::vector<std::filesystem::path> runs;
  double alpha = 0.05;
  std::optional<std::filesystem::path> out;
  bool errors_json = false;
};

struct ReportOptions {
  std::vector<std::filesystem::path> runs;
  std::filesystem::path out;
  int bins = 10;
  bool errors_json = false;
};

int cmd_validate(const std::filesystem::path& dataset, const std::optional<std::string>& format,
                 std::ostream& out, std::ostream& err, bool errors_json = false);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// File name for a run label: alphanumerics kept, runs of anything else
// collapsed to '_'.
std::string label_slug(const std::string& label);

}  // namespace factjudge::cli
