#include "factjudge/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "factjudge/dataset_io.hpp"
#include "factjudge/error.hpp"
#include "factjudge/judge_pipeline.hpp"
#include "factjudge/report.hpp"

namespace factjudge::cli {

using json = nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

Failure classify(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const DatasetError& e) {
    return {e.code() == DatasetErrc::Io ? kIoError : kDataError, e.kind(), e.what()};
  } catch (const PromptError& e) {
    if (e.code() == PromptErrc::Io) return {kIoError, e.kind(), e.what()};
    return {e.code() == PromptErrc::EmptyInput ? kDataError : kConfigError, e.kind(), e.what()};
  } catch (const CacheError& e) {
    return {e.code() == CacheErrc::Io ? kIoError : kCacheError, e.kind(), e.what()};
  } catch (const GatewayError& e) {
    return {kConfigError, e.kind(), e.what()};
  } catch (const PipelineError& e) {
    return {e.code() == PipelineErrc::NoProviders ? kConfigError : kDataError, e.kind(), e.what()};
  } catch (const StatsError& e) {
    return {kStatsError, e.kind(), e.what()};
  } catch (const MetricsError& e) {
    return {kStatsError, e.kind(), e.what()};
  } catch (const ParseError& e) {
    return {kDataError, e.kind(), e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    return {kIoError, "IoError", e.what()};
  } catch (const std::invalid_argument& e) {
    return {kUsageError, "UsageError", e.what()};
  } catch (const std::exception& e) {
    return {kInternalError, "InternalError", e.what()};
  }
}

int guarded(std::ostream& err, bool errors_json, const std::function<int()>& body) {
  try {
    return body();
  } catch (...) {
    const Failure f = classify(std::current_exception());
    if (errors_json) {
      err << json{{"error", f.kind}, {"message", f.message}, {"exit_code", f.code}}.dump() << "\n";
    } else {
      err << "error (" << f.kind << "): " << f.message << "\n";
    }
    return f.code;
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(DatasetErrc::Io, 0, "", "cannot write " + path.string());
  out << content;
  if (!out) throw DatasetError(DatasetErrc::Io, 0, "", "failed writing " + path.string());
}

DatasetFormat resolve_format(const std::filesystem::path& path, const std::optional<std::string>& format) {
  return format ? dataset_format_from_string(*format) : dataset_format_for_path(path);
}

void require_api_keys(const std::vector<ProviderConfig>& providers) {
  for (const auto& p : providers) {
    if (p.is_mock() || p.api_key_env.empty()) continue;
    const char* key = std::getenv(p.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw GatewayError(GatewayErrc::MissingApiKey,
                         "environment variable " + p.api_key_env + " is not set for provider " + p.name);
    }
  }
}

std::vector<RunSummary> load_runs(const std::vector<std::filesystem::path>& paths) {
  std::vector<RunSummary> runs;
  for (const auto& p : paths) runs.push_back(load_run_file(p));
  return runs;
}

}  // namespace

std::string label_slug(const std::string& label) {
  std::string out;
  bool pending = false;
  for (unsigned char c : label) {
    if (std::isalnum(c) || c == '-' || c == '.') {
      if (pending && !out.empty()) out.push_back('_');
      pending = false;
      out.push_back(static_cast<char>(c));
    } else {
      pending = true;
    }
  }
  return out.empty() ? "run" : out;
}

int cmd_validate(const std::filesystem::path& dataset, const std::optional<std::string>& format,
                 std::ostream& out, std::ostream& err, bool errors_json) {
  return guarded(err, errors_json, [&] {
    const auto records = load_eval_set(dataset, resolve_format(dataset, format));
    out << format_dataset_stats(summarize_dataset(records));
    std::size_t labeled = 0;
    for (const auto& r : records) labeled += r.human_label.has_value();
    out << "\n" << records.size() << " records, " << labeled << " with human labels\n";
    return static_cast<int>(kOk);
  });
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, options.errors_json, [&] {
    if (options.parallel < 1) throw std::invalid_argument("--parallel must be >= 1");
    if (options.prompt != "weighted" && options.prompt != "baseline" && options.prompt != "two-step") {
      throw std::invalid_argument("--prompt must be weighted, baseline or two-step");
    }
    JudgePolicies policies;
    policies.decision = DecisionPolicy::parse(options.policy);
    if (options.range_handling == "reject") {
      policies.validation.range_handling = RangeHandling::Reject;
    } else if (options.range_handling != "clamp") {
      throw std::invalid_argument("--range must be clamp or reject");
    }

    std::vector<EvalRecord> records = load_eval_set(options.dataset, resolve_format(options.dataset, options.format));
    if (options.labels) {
      const std::size_t unmatched = apply_human_labels(records, load_human_labels(*options.labels));
      if (unmatched > 0) err << "warning: " << unmatched << " label ids match no dataset record\n";
    }
    const std::vector<ProviderConfig> providers = load_provider_configs(options.providers);
    if (providers.empty()) throw PipelineError(PipelineErrc::NoProviders, "provider config lists no providers");
    require_api_keys(providers);

    std::unique_ptr<CallCache> cache =
        options.cache ? std::make_unique<CallCache>(*options.cache) : std::make_unique<CallCache>();
    LlmGateway gateway;

    struct Job {
      const ProviderConfig* provider;
      PromptTemplate tmpl;
    };
    std::vector<Job> jobs;
    auto template_for = [&](PromptKind kind) {
      return options.template_file ? load_template_file(*options.template_file, kind) : builtin_template(kind);
    };
    if (options.prompt == "two-step") {
      const ProviderConfig* baseline = nullptr;
      for (const auto& p : providers) {
        if (p.role == "baseline" && baseline == nullptr) baseline = &p;
      }
      if (baseline == nullptr) {
        throw GatewayError(GatewayErrc::InvalidConfig, "two-step run needs a provider with \"role\": \"baseline\"");
      }
      jobs.push_back({baseline, builtin_baseline_template()});
      for (const auto& p : providers) {
        if (&p != baseline) jobs.push_back({&p, builtin_weighted_template()});
      }
      if (jobs.size() < 2) throw PipelineError(PipelineErrc::NoProviders, "two-step run needs at least one judge");
    } else {
      const PromptKind kind = prompt_kind_from_string(options.prompt);
      const PromptTemplate tmpl = template_for(kind);
      for (const auto& p : providers) jobs.push_back({&p, tmpl});
    }

    std::filesystem::create_directories(options.out);
    std::vector<RunSummary> summaries;
    for (const auto& job : jobs) {
      const RunResult run =
          run_evaluation(records, job.tmpl, *job.provider, policies, options.parallel, gateway, *cache);
      const RunConfigEcho echo =
          make_config_echo(*job.provider, job.tmpl.body, job.tmpl.kind, policies.decision, policies.validation);
      const auto path = options.out / (label_slug(run.label) + ".json");
      write_file(path, serialize_run(run, echo));
      summaries.push_back(summarize_run(run));
      if (run.failures > 0) err << "warning: " << run.label << ": " << run.failures << " unparsed verdicts\n";
    }

    disambiguate_labels(summaries);
    write_file(options.out / "summary.json", run_set_summary_json(summaries).dump(2) + "\n");
    std::string table = har_table_markdown(summaries);
    if (const auto delta = average_improvement(summaries)) {
      table += "\naverage improvement " + format_fixed(*delta, 1) + " pp over baseline\n";
    }
    write_file(options.out / "summary.md", table);
    out << table;
    return static_cast<int>(kOk);
  });
}

int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, options.errors_json, [&] {
    if (options.runs.size() < 2) throw StatsError(StatsErrc::TooFewRuns, "stats need at least two run files");
    const StatsReport report = compute_stats(load_runs(options.runs), options.alpha);
    const std::string markdown = stats_to_markdown(report);
    if (options.out) {
      if (options.out->has_parent_path()) std::filesystem::create_directories(options.out->parent_path());
      write_file(*options.out, stats_to_json(report).dump(2) + "\n");
      auto md_path = *options.out;
      md_path.replace_extension(".md");
      write_file(md_path, markdown);
    }
    out << markdown;
    return static_cast<int>(kOk);
  });
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, options.errors_json, [&] {
    if (options.runs.empty()) throw std::invalid_argument("report needs at least one --runs file");
    if (options.bins < 1) throw std::invalid_argument("--bins must be >= 1");
    std::vector<RunSummary> runs = load_runs(options.runs);
    disambiguate_labels(runs);
    for (const auto& r : runs) {
      if (r.final_scores.empty()) err << "warning: " << r.label << " has no parsed scores (n=0)\n";
    }
    std::filesystem::create_directories(options.out);
    const std::string markdown = report_markdown(runs);
    write_file(options.out / "report.md", markdown);
    write_file(options.out / "violin_data.json",
               violin_data_json(runs, static_cast<std::size_t>(options.bins)).dump(2) + "\n");
    out << markdown;
    return static_cast<int>(kOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-step LLM-as-a-judge harness: weighted fact-taxonomy judging, HAR, ANOVA/Tukey", "factjudge"};
  app.require_subcommand(1);
  app.fallthrough();
  bool errors_json = false;
  app.add_flag("--errors-json", errors_json, "Print errors as a JSON object on stderr");

  std::filesystem::path validate_dataset;
  std::optional<std::string> validate_format;
  auto* validate = app.add_subcommand("validate", "Load a dataset and print its statistics");
  validate->add_option("--dataset", validate_dataset, "JSONL or CSV evaluation set")->required();
  validate->add_option("--format", validate_format, "jsonl|csv (default: from extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Judge a dataset with every configured provider");
  run->add_option("--dataset", run_opts.dataset, "JSONL or CSV evaluation set")->required();
  run->add_option("--format", run_opts.format, "jsonl|csv")->check(CLI::IsMember({"jsonl", "csv"}));
  run->add_option("--providers", run_opts.providers, "Provider config (JSON)")->required();
  run->add_option("--labels", run_opts.labels, "CSV of request_id,human_label");
  run->add_option("--prompt", run_opts.prompt, "weighted|baseline|two-step")->capture_default_str();
  run->add_option("--template", run_opts.template_file, "Custom prompt template file");
  run->add_option("--policy", run_opts.policy, "strict|threshold:T|hybrid:T")->capture_default_str();
  run->add_option("--range", run_opts.range_handling, "Out-of-range verdict reals: clamp|reject")
      ->capture_default_str();
  run->add_option("--parallel", run_opts.parallel, "Concurrent judge calls")->capture_default_str();
  run->add_option("--cache", run_opts.cache, "JSONL call cache");
  run->add_option("--out", run_opts.out, "Output directory")->required();

  StatsOptions stats_opts;
  auto* stats = app.add_subcommand("stats", "One-way ANOVA and Tukey HSD over run final scores");
  stats->add_option("--runs", stats_opts.runs, "Run JSON files")->required()->expected(1, -1);
  stats->add_option("--alpha", stats_opts.alpha, "Significance level")->capture_default_str();
  stats->add_option("--out", stats_opts.out, "Stats JSON path (Markdown written alongside)");

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "HAR comparison report and violin plot data");
  report->add_option("--runs", report_opts.runs, "Run JSON files")->required()->expected(1, -1);
  report->add_option("--out", report_opts.out, "Output directory")->required();
  report->add_option("--bins", report_opts.bins, "Histogram bins over [0,1]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  if (*validate) return cmd_validate(validate_dataset, validate_format, out, err, errors_json);
  if (*run) {
    run_opts.errors_json = errors_json;
    return cmd_run(run_opts, out, err);
  }
  if (*stats) {
    stats_opts.errors_json = errors_json;
    return cmd_stats(stats_opts, out, err);
  }
  report_opts.errors_json = errors_json;
  return cmd_report(report_opts, out, err);
}

}  // namespace factjudge::cli
