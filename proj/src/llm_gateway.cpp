#include "factjudge/llm_gateway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "factjudge/error.hpp"

namespace factjudge {

using json = nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

namespace {

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MockScript mock_script_from_json(const json& j) {
  MockScript script;
  for (const auto& rule : j.value("rules", json::array())) {
    script.rules.push_back({rule.at("contains").get<std::string>(), rule.at("reply").get<std::string>()});
  }
  if (j.contains("default")) script.default_reply = j.at("default").get<std::string>();
  script.fail_first = j.value("fail_first", std::vector<int>{});
  if (j.contains("always_status")) script.always_status = j.at("always_status").get<int>();
  return script;
}

ProviderConfig provider_from_json(const json& j) {
  ProviderConfig c;
  c.name = j.at("name").get<std::string>();
  c.endpoint_url = j.value("endpoint_url", "");
  c.model = j.value("model", c.name);
  c.api_key_env = j.value("api_key_env", "");
  c.temperature = j.value("temperature", 0.0);
  c.max_tokens = j.value("max_tokens", 1024);
  c.timeout_s = j.value("timeout_s", 60.0);
  c.max_retries = j.value("max_retries", 3);
  if (j.contains("requests_per_minute") && !j.at("requests_per_minute").is_null()) {
    c.requests_per_minute = j.at("requests_per_minute").get<int>();
  }
  c.role = j.value("role", "");
  if (j.contains("mock")) c.mock = mock_script_from_json(j.at("mock"));
  return c;
}

GatewayError classify_status(int status, const std::string& body, int attempts) {
  const std::string msg = "HTTP " + std::to_string(status) + ": " + body.substr(0, 200);
  if (status == 401 || status == 403) return GatewayError(GatewayErrc::AuthError, msg, attempts);
  if (status == 429) return GatewayError(GatewayErrc::RateLimited, msg, attempts);
  return GatewayError(GatewayErrc::HttpError, msg, attempts);
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

void validate(const ProviderConfig& config) {
  auto fail = [&](const std::string& why) {
    throw GatewayError(GatewayErrc::InvalidConfig, "provider '" + config.name + "': " + why);
  };
  if (config.name.empty()) fail("name is empty");
  if (!config.is_mock() && config.endpoint_url.empty()) fail("endpoint_url is empty");
  if (!(config.temperature >= 0.0)) fail("temperature must be >= 0");
  if (config.max_tokens <= 0) fail("max_tokens must be positive");
  if (!(config.timeout_s > 0.0)) fail("timeout_s must be positive");
  if (config.max_retries < 0) fail("max_retries must be nonnegative");
  if (config.requests_per_minute && *config.requests_per_minute <= 0) fail("requests_per_minute must be positive");
  if (!config.role.empty() && config.role != "baseline") fail("role must be empty or \"baseline\"");
}

std::vector<ProviderConfig> load_provider_configs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GatewayError(GatewayErrc::InvalidConfig, "cannot open provider config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw GatewayError(GatewayErrc::InvalidConfig, path.string() + ": " + e.what());
  }
  const json& list = doc.is_object() ? doc.at("providers") : doc;
  std::vector<ProviderConfig> out;
  try {
    for (const auto& item : list) out.push_back(provider_from_json(item));
  } catch (const json::exception& e) {
    throw GatewayError(GatewayErrc::InvalidConfig, path.string() + ": " + e.what());
  }
  for (const auto& c : out) validate(c);
  return out;
}

JudgeRequest make_request(std::string prompt, const ProviderConfig& config) {
  return {std::move(prompt), config.model, config.temperature, config.max_tokens};
}

std::string cache_key(const JudgeRequest& request, const std::string& provider_name) {
  // A JSON array is an unambiguous, length-delimited encoding of the fields.
  const json fields = {provider_name, request.model, request.temperature, request.max_tokens, request.prompt};
  return sha256_hex(fields.dump());
}

std::string chat_request_body(const JudgeRequest& request) {
  json body = {{"model", request.model},
               {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  return body.dump();
}

std::string chat_response_content(const std::string& body) {
  try {
    const json doc = json::parse(body);
    const json& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::invalid_argument("content is not a string");
    return content.get<std::string>();
  } catch (const std::exception& e) {
    throw GatewayError(GatewayErrc::MalformedProviderResponse,
                       std::string("provider reply lacks choices[0].message.content: ") + e.what());
  }
}

std::chrono::milliseconds backoff_ceiling(int retry_index, const RetryPolicy& policy) {
  const double scale = std::pow(policy.factor, std::max(0, retry_index));
  const double ms = std::min(static_cast<double>(policy.base.count()) * scale, 3.6e6);
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

TokenBucket::TokenBucket(double rate_per_second, double capacity, clock::time_point start)
    : rate_(rate_per_second), capacity_(capacity), tokens_(capacity), last_(start) {}

TokenBucket::clock::duration TokenBucket::reserve(clock::time_point now) {
  if (now > last_) {
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
    last_ = now;
  }
  tokens_ -= 1.0;
  if (tokens_ >= 0.0) return clock::duration::zero();
  return std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(-tokens_ / rate_));
}

LlmGateway::LlmGateway(GatewayOptions options)
    : options_(std::move(options)), http_(std::make_shared<HttpTransport>()), rng_(options_.jitter_seed) {
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::size_t LlmGateway::network_calls() const {
  std::lock_guard lock(mutex_);
  return network_calls_;
}

Transport& LlmGateway::transport_for(const ProviderConfig& config) {
  if (options_.transport) return *options_.transport;
  if (!config.is_mock()) return *http_;
  std::lock_guard lock(mutex_);
  auto& slot = mocks_[config.name];
  if (!slot) slot = std::make_shared<MockTransport>(config.mock.value_or(MockScript{}));
  return *slot;
}

void LlmGateway::throttle(const ProviderConfig& config) {
  if (!config.requests_per_minute) return;
  TokenBucket::clock::duration wait{};
  {
    std::lock_guard lock(mutex_);
    const auto now = TokenBucket::clock::now();
    auto it = limiters_.find(config.name);
    if (it == limiters_.end()) {
      it = limiters_.emplace(config.name, TokenBucket(*config.requests_per_minute / 60.0, 1.0, now)).first;
    }
    wait = it->second.reserve(now);
  }
  if (wait > TokenBucket::clock::duration::zero()) {
    options_.sleep(std::chrono::ceil<std::chrono::milliseconds>(wait));
  }
}

std::chrono::milliseconds LlmGateway::jittered(int retry_index) {
  const auto ceiling = backoff_ceiling(retry_index, options_.retry);
  std::lock_guard lock(mutex_);
  std::uniform_int_distribution<std::int64_t> dist(0, ceiling.count());
  return std::chrono::milliseconds(dist(rng_));
}

CompletionResult LlmGateway::complete(const JudgeRequest& request, const ProviderConfig& config) {
  validate(config);
  if (request.prompt.empty()) throw GatewayError(GatewayErrc::InvalidConfig, "judge request prompt is empty");

  HttpRequest http;
  http.url = config.endpoint_url;
  http.body = chat_request_body(request);
  http.timeout_s = config.timeout_s;
  http.headers.emplace_back("Content-Type", "application/json");
  if (!config.is_mock() && !config.api_key_env.empty()) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw GatewayError(GatewayErrc::MissingApiKey,
                         "environment variable " + config.api_key_env + " is not set for provider " + config.name);
    }
    http.headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }

  Transport& transport = transport_for(config);
  const auto started = std::chrono::steady_clock::now();
  std::optional<GatewayError> last_error;
  const int max_attempts = config.max_retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    throttle(config);
    HttpReply reply = transport.post(http);
    {
      std::lock_guard lock(mutex_);
      ++network_calls_;
    }

    if (reply.failure == TransportFailure::None && reply.status >= 200 && reply.status < 300) {
      CompletionResult result;
      result.text = chat_response_content(reply.body);
      result.attempts = attempt;
      result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started)
                              .count();
      return result;
    }

    if (reply.failure == TransportFailure::Timeout) {
      last_error.emplace(GatewayErrc::Timeout, "request timed out: " + reply.error, attempt);
    } else if (reply.failure == TransportFailure::Connection) {
      last_error.emplace(GatewayErrc::TransportError, "transport failure: " + reply.error, attempt);
    } else {
      GatewayError err = classify_status(reply.status, reply.body, attempt);
      if (!retryable_status(reply.status)) throw err;
      last_error.emplace(std::move(err));
    }
    if (attempt < max_attempts) options_.sleep(jittered(attempt - 1));
  }
  throw *last_error;
}

CompletionResult LlmGateway::cached_complete(const JudgeRequest& request, const ProviderConfig& config,
                                             CallCache& cache) {
  const std::string key = cache_key(request, config.name);
  if (auto hit = cache.lookup(key)) {
    CompletionResult result;
    result.text = std::move(*hit);
    result.attempts = 1;
    result.cache_hit = true;
    return result;
  }
  CompletionResult result = complete(request, config);
  result.text = cache.insert({key, config.name, request.model, result.text, utc_now_iso8601()});
  return result;
}

}  // namespace factjudge
