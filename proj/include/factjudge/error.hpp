#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace factjudge {

// Base for every error the library throws. `kind()` is a stable
// machine-readable name ("MissingField", "AuthError", ...) that the CLI
// emits in --errors-json output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

enum class PromptErrc { MissingPlaceholder, DuplicatePlaceholder, EmptyInput, EmptyTemplate, Io };

class PromptError : public Error {
 public:
  PromptError(PromptErrc code, const std::string& message);
  PromptErrc code() const noexcept { return code_; }

 private:
  PromptErrc code_;
};

enum class ParseErrc {
  NoJsonFound,
  UnbalancedJson,
  InvalidJson,
  MissingField,
  WrongType,
  OutOfRange,
  NegativeCount,
  EmptyField,
  UnexpectedField,
};

class ParseError : public Error {
 public:
  ParseError(ParseErrc code, std::string field, const std::string& message);
  ParseErrc code() const noexcept { return code_; }
  // Offending verdict field; empty for extraction errors.
  const std::string& field() const noexcept { return field_; }

 private:
  ParseErrc code_;
  std::string field_;
};

enum class GatewayErrc {
  AuthError,
  RateLimited,
  Timeout,
  MalformedProviderResponse,
  HttpError,
  TransportError,
  MissingApiKey,
  InvalidConfig,
};

class GatewayError : public Error {
 public:
  GatewayError(GatewayErrc code, const std::string& message, int attempts = 0);
  GatewayErrc code() const noexcept { return code_; }
  int attempts() const noexcept { return attempts_; }

 private:
  GatewayErrc code_;
  int attempts_;
};

enum class CacheErrc { CacheCorrupt, Io };

class CacheError : public Error {
 public:
  CacheError(CacheErrc code, std::size_t line, const std::string& message);
  CacheErrc code() const noexcept { return code_; }
  // 1-based line number for CacheCorrupt, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

 private:
  CacheErrc code_;
  std::size_t line_;
};

enum class DatasetErrc { Io, Schema, DuplicateId, BadLabel, Empty };

class DatasetError : public Error {
 public:
  DatasetError(DatasetErrc code, std::size_t row, std::string field, const std::string& message);
  DatasetErrc code() const noexcept { return code_; }
  // 1-based data row (header excluded), 0 when not row-specific.
  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  DatasetErrc code_;
  std::size_t row_;
  std::string field_;
};

enum class MetricsErrc { Empty, LengthMismatch, OutOfRange, InvalidArgument };

class MetricsError : public Error {
 public:
  MetricsError(MetricsErrc code, const std::string& message);
  MetricsErrc code() const noexcept { return code_; }

 private:
  MetricsErrc code_;
};

enum class StatsErrc { TooFewGroups, TooFewObservations, DegenerateVariance, InvalidArgument, TooFewRuns };

class StatsError : public Error {
 public:
  StatsError(StatsErrc code, const std::string& message);
  StatsErrc code() const noexcept { return code_; }

 private:
  StatsErrc code_;
};

enum class PipelineErrc { EmptyDataset, NoProviders, InvalidArgument };

class PipelineError : public Error {
 public:
  PipelineError(PipelineErrc code, const std::string& message);
  PipelineErrc code() const noexcept { return code_; }

 private:
  PipelineErrc code_;
};

const char* to_string(PromptErrc code) noexcept;
const char* to_string(ParseErrc code) noexcept;
const char* to_string(GatewayErrc code) noexcept;
const char* to_string(CacheErrc code) noexcept;
const char* to_string(DatasetErrc code) noexcept;
const char* to_string(MetricsErrc code) noexcept;
const char* to_string(StatsErrc code) noexcept;
const char* to_string(PipelineErrc code) noexcept;

}  // namespace factjudge
