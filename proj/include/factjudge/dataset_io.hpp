#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factjudge/core_model.hpp"

namespace factjudge {

enum class DatasetFormat { Jsonl, Csv };

// "jsonl" or "csv"; throws std::invalid_argument otherwise.
DatasetFormat dataset_format_from_string(std::string_view text);
// Guesses from the file extension (.csv, anything else is JSONL).
DatasetFormat dataset_format_for_path(const std::filesystem::path& path);

// Accepts true/false/1/0/pass/fail, case-insensitive, surrounding blanks
// ignored. Returns nullopt for any other token.
std::optional<bool> parse_label_token(std::string_view token);

// Loads an evaluation set. Rows are 1-based: the physical line for JSONL,
// the record after the header for CSV. Throws DatasetError (Io, Schema,
// DuplicateId, BadLabel).
std::vector<EvalRecord> load_eval_set(const std::filesystem::path& path, DatasetFormat format);

std::vector<EvalRecord> parse_eval_set(std::string_view text, DatasetFormat format);

void save_eval_set(std::span<const EvalRecord> records, const std::filesystem::path& path, DatasetFormat format);

std::string serialize_eval_set(std::span<const EvalRecord> records, DatasetFormat format);

// CSV with header request_id,human_label. Throws DatasetError (Io, Schema,
// BadLabel, DuplicateId).
std::map<std::string, bool> load_human_labels(const std::filesystem::path& path);

std::map<std::string, bool> parse_human_labels(std::string_view text);

// Overwrites human_label on records whose id appears in `labels`. Returns how
// many label ids did not match any record.
std::size_t apply_human_labels(std::vector<EvalRecord>& records, const std::map<std::string, bool>& labels);

struct TextStats {
  double avg_len_chars = 0.0;
  std::size_t min_len_chars = 0;
  std::size_t max_len_chars = 0;
  double avg_word_count = 0.0;
};

struct DatasetStats {
  std::size_t total_count = 0;
  TextStats request;
  TextStats response;
};

// Unicode scalar values in a UTF-8 string.
std::size_t count_chars(std::string_view utf8);
// Maximal runs of non-whitespace.
std::size_t count_words(std::string_view text);

// Throws DatasetError(Empty).
DatasetStats summarize_dataset(std::span<const EvalRecord> records);

// Statistic / Request / Response table with two-decimal averages.
std::string format_dataset_stats(const DatasetStats& stats);

}  // namespace factjudge
