#include <nlohmann/json.hpp>

#include "factjudge/llm_gateway.hpp"

namespace factjudge {

using json = nlohmann::json;

HttpReply MockTransport::post(const HttpRequest& request) {
  HttpReply reply;
  if (script_.always_status) {
    reply.status = *script_.always_status;
    reply.body = R"({"error":{"message":"scripted failure"}})";
    return reply;
  }
  if (!script_.fail_first.empty()) {
    std::size_t attempt = 0;
    {
      std::lock_guard lock(mutex_);
      attempt = attempts_by_body_[request.body]++;
    }
    if (attempt < script_.fail_first.size()) {
      reply.status = script_.fail_first[attempt];
      reply.body = R"({"error":{"message":"scripted failure"}})";
      return reply;
    }
  }

  std::string prompt;
  try {
    prompt = json::parse(request.body).at("messages").at(0).at("content").get<std::string>();
  } catch (const json::exception& e) {
    reply.status = 400;
    reply.body = std::string("malformed chat request: ") + e.what();
    return reply;
  }

  const std::string* text = nullptr;
  for (const auto& rule : script_.rules) {
    if (prompt.find(rule.contains) != std::string::npos) {
      text = &rule.reply;
      break;
    }
  }
  if (text == nullptr && script_.default_reply) text = &*script_.default_reply;
  if (text == nullptr) {
    reply.status = 404;
    reply.body = R"({"error":{"message":"no mock rule matched the prompt"}})";
    return reply;
  }

  json body = {{"id", "mock"},
               {"object", "chat.completion"},
               {"choices", json::array({{{"index", 0},
                                         {"message", {{"role", "assistant"}, {"content", *text}}},
                                         {"finish_reason", "stop"}}})}};
  reply.status = 200;
  reply.body = body.dump();
  return reply;
}

}  // namespace factjudge
