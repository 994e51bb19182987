#include "factjudge/error.hpp"

namespace factjudge {

PromptError::PromptError(PromptErrc code, const std::string& message)
    : Error(to_string(code), message), code_(code) {}

ParseError::ParseError(ParseErrc code, std::string field, const std::string& message)
    : Error(to_string(code), message), code_(code), field_(std::move(field)) {}

GatewayError::GatewayError(GatewayErrc code, const std::string& message, int attempts)
    : Error(to_string(code), message), code_(code), attempts_(attempts) {}

CacheError::CacheError(CacheErrc code, std::size_t line, const std::string& message)
    : Error(to_string(code), message), code_(code), line_(line) {}

DatasetError::DatasetError(DatasetErrc code, std::size_t row, std::string field,
                           const std::string& message)
    : Error(to_string(code), message), code_(code), row_(row), field_(std::move(field)) {}

MetricsError::MetricsError(MetricsErrc code, const std::string& message)
    : Error(to_string(code), message), code_(code) {}

StatsError::StatsError(StatsErrc code, const std::string& message)
    : Error(to_string(code), message), code_(code) {}

PipelineError::PipelineError(PipelineErrc code, const std::string& message)
    : Error(to_string(code), message), code_(code) {}

const char* to_string(PromptErrc code) noexcept {
  switch (code) {
    case PromptErrc::MissingPlaceholder: return "MissingPlaceholder";
    case PromptErrc::DuplicatePlaceholder: return "DuplicatePlaceholder";
    case PromptErrc::EmptyInput: return "EmptyInput";
    case PromptErrc::EmptyTemplate: return "EmptyTemplate";
    case PromptErrc::Io: return "IoError";
  }
  return "PromptError";
}

const char* to_string(ParseErrc code) noexcept {
  switch (code) {
    case ParseErrc::NoJsonFound: return "NoJsonFound";
    case ParseErrc::UnbalancedJson: return "UnbalancedJson";
    case ParseErrc::InvalidJson: return "InvalidJson";
    case ParseErrc::MissingField: return "MissingField";
    case ParseErrc::WrongType: return "WrongType";
    case ParseErrc::OutOfRange: return "OutOfRange";
    case ParseErrc::NegativeCount: return "NegativeCount";
    case ParseErrc::EmptyField: return "EmptyField";
    case ParseErrc::UnexpectedField: return "UnexpectedField";
  }
  return "ParseError";
}

const char* to_string(GatewayErrc code) noexcept {
  switch (code) {
    case GatewayErrc::AuthError: return "AuthError";
    case GatewayErrc::RateLimited: return "RateLimited";
    case GatewayErrc::Timeout: return "Timeout";
    case GatewayErrc::MalformedProviderResponse: return "MalformedProviderResponse";
    case GatewayErrc::HttpError: return "HttpError";
    case GatewayErrc::TransportError: return "TransportError";
    case GatewayErrc::MissingApiKey: return "MissingApiKey";
    case GatewayErrc::InvalidConfig: return "InvalidConfig";
  }
  return "GatewayError";
}

const char* to_string(CacheErrc code) noexcept {
  switch (code) {
    case CacheErrc::CacheCorrupt: return "CacheCorrupt";
    case CacheErrc::Io: return "IoError";
  }
  return "CacheError";
}

const char* to_string(DatasetErrc code) noexcept {
  switch (code) {
    case DatasetErrc::Io: return "IoError";
    case DatasetErrc::Schema: return "SchemaError";
    case DatasetErrc::DuplicateId: return "DuplicateId";
    case DatasetErrc::BadLabel: return "BadLabel";
    case DatasetErrc::Empty: return "Empty";
  }
  return "DatasetError";
}

const char* to_string(MetricsErrc code) noexcept {
  switch (code) {
    case MetricsErrc::Empty: return "Empty";
    case MetricsErrc::LengthMismatch: return "LengthMismatch";
    case MetricsErrc::OutOfRange: return "OutOfRange";
    case MetricsErrc::InvalidArgument: return "InvalidArgument";
  }
  return "MetricsError";
}

const char* to_string(StatsErrc code) noexcept {
  switch (code) {
    case StatsErrc::TooFewGroups: return "TooFewGroups";
    case StatsErrc::TooFewObservations: return "TooFewObservations";
    case StatsErrc::DegenerateVariance: return "DegenerateVariance";
    case StatsErrc::InvalidArgument: return "InvalidArgument";
    case StatsErrc::TooFewRuns: return "TooFewRuns";
  }
  return "StatsError";
}

const char* to_string(PipelineErrc code) noexcept {
  switch (code) {
    case PipelineErrc::EmptyDataset: return "EmptyDataset";
    case PipelineErrc::NoProviders: return "NoProviders";
    case PipelineErrc::InvalidArgument: return "InvalidArgument";
  }
  return "PipelineError";
}

}  // namespace factjudge
