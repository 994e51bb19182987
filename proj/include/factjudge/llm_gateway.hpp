#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factjudge/call_cache.hpp"

namespace factjudge {

// Canned replies for the offline provider. The first rule whose `contains`
// is a substring of the prompt wins.
struct MockRule {
  std::string contains;
  std::string reply;
};

struct MockScript {
  std::vector<MockRule> rules;
  std::optional<std::string> default_reply;
  // HTTP statuses returned on the first attempts of every distinct request.
  std::vector<int> fail_first;
  // When set every attempt fails with this status.
  std::optional<int> always_status;
};

struct ProviderConfig {
  std::string name;
  std::string endpoint_url;
  std::string model;
  std::string api_key_env;  // environment variable holding the bearer token
  double temperature = 0.0;
  int max_tokens = 1024;
  double timeout_s = 60.0;
  int max_retries = 3;
  std::optional<int> requests_per_minute;
  // "baseline" marks the provider that runs the first, unweighted step.
  std::string role;
  std::optional<MockScript> mock;

  bool is_mock() const noexcept { return name == "mock" || mock.has_value(); }
};

// Throws GatewayError(InvalidConfig).
void validate(const ProviderConfig& config);

// Reads {"providers": [...]} or a bare array of provider objects.
std::vector<ProviderConfig> load_provider_configs(const std::filesystem::path& path);

struct JudgeRequest {
  std::string prompt;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
};

JudgeRequest make_request(std::string prompt, const ProviderConfig& config);

struct CompletionResult {
  std::string text;
  std::int64_t latency_ms = 0;
  int attempts = 1;
  bool cache_hit = false;
};

std::string sha256_hex(std::string_view data);

// Hex SHA-256 over (provider, model, temperature, max_tokens, prompt).
std::string cache_key(const JudgeRequest& request, const std::string& provider_name);

// Chat-completions wire body: {model, messages:[{role:"user",content}], temperature, max_tokens}.
std::string chat_request_body(const JudgeRequest& request);

// Returns choices[0].message.content; throws GatewayError(MalformedProviderResponse).
std::string chat_response_content(const std::string& body);

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  double timeout_s = 60.0;
};

enum class TransportFailure { None, Timeout, Connection };

struct HttpReply {
  int status = 0;
  std::string body;
  TransportFailure failure = TransportFailure::None;
  std::string error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Must be safe to call concurrently.
  virtual HttpReply post(const HttpRequest& request) = 0;
};

// cpp-httplib client, one connection per call.
class HttpTransport final : public Transport {
 public:
  HttpReply post(const HttpRequest& request) override;
};

// Emulates a chat-completions endpoint from a MockScript.
class MockTransport final : public Transport {
 public:
  explicit MockTransport(MockScript script) : script_(std::move(script)) {}
  HttpReply post(const HttpRequest& request) override;

 private:
  MockScript script_;
  std::mutex mutex_;
  std::map<std::string, std::size_t> attempts_by_body_;
};

class CallbackTransport final : public Transport {
 public:
  explicit CallbackTransport(std::function<HttpReply(const HttpRequest&)> fn) : fn_(std::move(fn)) {}
  HttpReply post(const HttpRequest& request) override { return fn_(request); }

 private:
  std::function<HttpReply(const HttpRequest&)> fn_;
};

struct RetryPolicy {
  std::chrono::milliseconds base{1000};
  double factor = 2.0;
};

// Upper bound of the full-jitter delay before retry number `retry_index`
// (0-based): base * factor^retry_index.
std::chrono::milliseconds backoff_ceiling(int retry_index, const RetryPolicy& policy);

// Token bucket refilled at `rate_per_second` up to `capacity` tokens.
// reserve() takes one token and returns how long the caller must wait for it.
class TokenBucket {
 public:
  using clock = std::chrono::steady_clock;

  TokenBucket(double rate_per_second, double capacity, clock::time_point start);
  clock::duration reserve(clock::time_point now);

 private:
  double rate_;
  double capacity_;
  double tokens_;
  clock::time_point last_;
};

struct GatewayOptions {
  // Replaces the per-provider transport (HTTP or mock) for every call.
  std::shared_ptr<Transport> transport;
  std::function<void(std::chrono::milliseconds)> sleep;
  RetryPolicy retry;
  std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ULL;
};

// Thread-safe judge client. Shared state is the limiter table, the jitter
// RNG and the mock transports, each behind its own lock.
class LlmGateway {
 public:
  explicit LlmGateway(GatewayOptions options = {});

  // Retries transport failures, 5xx and 429 with full-jitter exponential
  // backoff. Throws GatewayError: AuthError (401/403, no retry), RateLimited,
  // Timeout, HttpError, TransportError, MalformedProviderResponse,
  // MissingApiKey, InvalidConfig.
  CompletionResult complete(const JudgeRequest& request, const ProviderConfig& config);

  // Serves from the cache when the key is present; otherwise calls complete()
  // and records the reply.
  CompletionResult cached_complete(const JudgeRequest& request, const ProviderConfig& config,
                                   CallCache& cache);

  // Number of transport posts issued so far.
  std::size_t network_calls() const;

 private:
  Transport& transport_for(const ProviderConfig& config);
  void throttle(const ProviderConfig& config);
  std::chrono::milliseconds jittered(int retry_index);

  GatewayOptions options_;
  std::shared_ptr<Transport> http_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<MockTransport>> mocks_;
  std::map<std::string, TokenBucket> limiters_;
  std::mt19937_64 rng_;
  std::size_t network_calls_ = 0;
};

}  // namespace factjudge
