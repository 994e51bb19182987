#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "factjudge/error.hpp"
#include "factjudge/llm_gateway.hpp"

using namespace factjudge;

namespace {

// Local chat-completions endpoint on an ephemeral port.
class LocalServer {
 public:
  LocalServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = ++hits_;
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      const auto prompt = nlohmann::json::parse(req.body).at("messages").at(0).at("content").get<std::string>();
      if (prompt == "flaky" && n == 1) {
        res.status = 429;
        res.set_header("Retry-After", "0");
        return;
      }
      if (prompt == "unauthorized") {
        res.status = 401;
        res.set_content(R"({"error":"bad key"})", "application/json");
        return;
      }
      if (prompt == "garbled") {
        res.set_content("<html>gateway</html>", "text/html");
        return;
      }
      if (prompt == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "echo:" + prompt}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  ProviderConfig provider() const {
    ProviderConfig p;
    p.name = "local";
    p.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
    p.model = "local-model";
    p.api_key_env = "FACTJUDGE_LOCAL_KEY";
    p.timeout_s = 5.0;
    return p;
  }

  int hits() const { return hits_; }
  std::string last_auth() const { return last_auth_; }
  std::string last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_auth_;
  std::string last_body_;
};

GatewayOptions no_sleep() {
  GatewayOptions o;
  o.sleep = [](std::chrono::milliseconds) {};
  return o;
}

}  // namespace

TEST(HttpWire, PostsChatCompletionWithBearer) {
  ::setenv("FACTJUDGE_LOCAL_KEY", "tok-123", 1);
  LocalServer server;
  LlmGateway gw(no_sleep());
  const auto p = server.provider();
  const auto r = gw.complete(make_request("hello", p), p);
  EXPECT_EQ(r.text, "echo:hello");
  EXPECT_EQ(server.last_auth(), "Bearer tok-123");
  const auto body = nlohmann::json::parse(server.last_body());
  EXPECT_EQ(body.at("model"), "local-model");
  EXPECT_EQ(body.at("max_tokens"), 1024);
}

TEST(HttpWire, RetriesAfter429) {
  ::setenv("FACTJUDGE_LOCAL_KEY", "tok", 1);
  LocalServer server;
  LlmGateway gw(no_sleep());
  const auto p = server.provider();
  const auto r = gw.complete(make_request("flaky", p), p);
  EXPECT_EQ(r.text, "echo:flaky");
  EXPECT_EQ(r.attempts, 2);
  EXPECT_EQ(server.hits(), 2);
}

TEST(HttpWire, UnauthorizedStopsImmediately) {
  ::setenv("FACTJUDGE_LOCAL_KEY", "tok", 1);
  LocalServer server;
  LlmGateway gw(no_sleep());
  const auto p = server.provider();
  try {
    gw.complete(make_request("unauthorized", p), p);
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::AuthError);
  }
  EXPECT_EQ(server.hits(), 1);
}

TEST(HttpWire, NonJsonReplyIsMalformed) {
  ::setenv("FACTJUDGE_LOCAL_KEY", "tok", 1);
  LocalServer server;
  LlmGateway gw(no_sleep());
  const auto p = server.provider();
  try {
    gw.complete(make_request("garbled", p), p);
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::MalformedProviderResponse);
  }
}

TEST(HttpWire, ReadTimeoutIsRetriedAsTimeout) {
  ::setenv("FACTJUDGE_LOCAL_KEY", "tok", 1);
  LocalServer server;
  LlmGateway gw(no_sleep());
  auto p = server.provider();
  p.timeout_s = 0.2;
  p.max_retries = 1;
  try {
    gw.complete(make_request("slow", p), p);
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::Timeout);
    EXPECT_EQ(e.attempts(), 2);
  }
}

TEST(HttpWire, RefusedConnectionIsTransportError) {
  ProviderConfig p;
  p.name = "nowhere";
  p.endpoint_url = "http://127.0.0.1:1/v1/chat/completions";
  p.model = "m";
  p.max_retries = 0;
  p.timeout_s = 1.0;
  LlmGateway gw(no_sleep());
  try {
    gw.complete(make_request("x", p), p);
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::TransportError);
  }
}
