#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>
#include <regex>

#include "execbench/llm.hpp"

namespace execbench::llm {

using nlohmann::json;

HttpChatModel::HttpChatModel(ModelConfig config) : config_(std::move(config)) {
  if (config_.model.empty()) throw std::invalid_argument("model id is empty");
}

ModelResponse HttpChatModel::sample(const std::vector<Message>& messages, int) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url))
    throw std::invalid_argument("bad endpoint URL: " + config_.endpoint);
  const std::string base = m[1];
  const std::string path = m[2].matched ? std::string(m[2]) : "/v1/chat/completions";

  httplib::Client cli(base);
  const auto timeout = static_cast<time_t>(config_.request_timeout.count());
  cli.set_connection_timeout(30);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  const auto start = std::chrono::steady_clock::now();
  auto res = cli.Post(path, headers, config_.request_body(messages).dump(), "application/json");
  if (!res) throw TransientError("HTTP request failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw TransientError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  if (res->status != 200)
    throw std::runtime_error("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));

  json j = json::parse(res->body);
  ModelResponse r;
  r.ok = true;
  const auto& choice = j.at("choices").at(0);
  const auto& content = choice.at("message").at("content");
  r.text = content.is_string() ? content.get<std::string>() : "";
  r.finish_reason = choice.value("finish_reason", "");
  if (j.contains("usage") && j["usage"].is_object()) {
    r.prompt_tokens = j["usage"].value("prompt_tokens", 0);
    r.completion_tokens = j["usage"].value("completion_tokens", 0);
  }
  r.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace execbench::llm
