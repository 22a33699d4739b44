#include <openssl/evp.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "execbench/llm.hpp"

namespace execbench::llm {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return s.str();
}

json ModelConfig::request_body(const std::vector<Message>& messages) const {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  json body = {{"model", model}, {"messages", msgs}};
  if (temperature) body["temperature"] = *temperature;
  if (top_p) body["top_p"] = *top_p;
  if (max_tokens) body["max_tokens"] = *max_tokens;
  if (reasoning_effort) body["reasoning_effort"] = *reasoning_effort;
  return body;
}

json ModelConfig::to_json() const {
  json j = {{"profile", profile},
            {"endpoint", endpoint},
            {"model", model},
            {"n_samples", n_samples},
            {"request_timeout_s", request_timeout.count()},
            {"max_retries", max_retries},
            {"parallelism", parallelism}};
  j["temperature"] = temperature ? json(*temperature) : json(nullptr);
  j["top_p"] = top_p ? json(*top_p) : json(nullptr);
  j["max_tokens"] = max_tokens ? json(*max_tokens) : json(nullptr);
  j["reasoning_effort"] = reasoning_effort ? json(*reasoning_effort) : json(nullptr);
  return j;
}

std::string ModelConfig::hash() const { return sha256_hex(to_json().dump()); }

ModelConfig profile(const std::string& name) {
  ModelConfig c;
  c.profile = name;
  if (name == "traditional") {
    c.temperature = 0.2;
    c.top_p = 0.95;
    c.max_tokens = 4096;
  } else if (name == "reasoning") {
    c.temperature = 0.6;
    c.top_p = 0.95;
  } else if (name == "effort-based") {
    c.reasoning_effort = "high";
  } else {
    throw std::invalid_argument("unknown model profile '" + name + "'");
  }
  return c;
}

std::string request_key(const std::vector<Message>& messages, int sample_index) {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return sha256_hex(msgs.dump()) + "#" + std::to_string(sample_index);
}

ModelResponse FixedModel::sample(const std::vector<Message>&, int) {
  ModelResponse r;
  r.ok = true;
  r.text = text_;
  r.finish_reason = "stop";
  return r;
}

Client::Client(std::shared_ptr<Model> model, ModelConfig config, ClientOptions options)
    : model_(std::move(model)),
      config_(std::move(config)),
      options_(std::move(options)),
      slots_(std::max(1, std::min(config_.parallelism, 1024))) {
  if (!options_.clock) {
    const auto start = std::chrono::steady_clock::now();
    options_.clock = [start] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
  }
  if (!options_.sleep)
    options_.sleep = [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
}

void Client::log(json entry) {
  if (options_.transcript_path.empty()) return;
  append_jsonl(options_.transcript_path, entry);
}

ModelResponse Client::complete_one(const std::vector<Message>& messages, int sample_index,
                                   const std::string& tag) {
  slots_.acquire();
  long long id;
  {
    std::lock_guard lock(mu_);
    id = next_id_++;
    ++in_flight_;
    max_in_flight_ = std::max(max_in_flight_, in_flight_);
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    log({{"event", "request"},
         {"id", id},
         {"tag", tag},
         {"sample", sample_index},
         {"model", model_->name()},
         {"key", request_key(messages, sample_index)},
         {"messages", msgs},
         {"in_flight", in_flight_},
         {"t", options_.clock()}});
  }
  ModelResponse r;
  const double t0 = options_.clock();
  int attempt = 0;
  for (;;) {
    ++attempt;
    try {
      r = model_->sample(messages, sample_index);
      r.ok = true;
      break;
    } catch (const TransientError& e) {
      if (attempt > config_.max_retries) {
        r = {};
        r.error = std::string("transport error after retries: ") + e.what();
        break;
      }
      {
        std::lock_guard lock(mu_);
        log({{"event", "retry"}, {"id", id}, {"attempt", attempt}, {"error", e.what()}, {"t", options_.clock()}});
      }
      options_.sleep(options_.backoff_base_s * std::pow(2.0, attempt - 1));
    } catch (const std::exception& e) {
      r = {};
      r.error = e.what();
      break;
    }
  }
  r.attempts = attempt;
  if (r.latency_s == 0) r.latency_s = options_.clock() - t0;
  {
    std::lock_guard lock(mu_);
    json entry = {{"event", r.ok ? "response" : "error"},
                  {"id", id},
                  {"tag", tag},
                  {"sample", sample_index},
                  {"key", request_key(messages, sample_index)},
                  {"attempts", attempt},
                  {"t", options_.clock()}};
    if (r.ok) {
      entry["text"] = r.text;
      entry["finish_reason"] = r.finish_reason;
      entry["usage"] = {{"prompt_tokens", r.prompt_tokens}, {"completion_tokens", r.completion_tokens}};
    } else {
      entry["error"] = r.error;
    }
    log(entry);
    --in_flight_;
  }
  slots_.release();
  return r;
}

std::vector<ModelResponse> Client::complete(const std::vector<Message>& messages, int n,
                                            const std::string& tag, int first_sample) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<ModelResponse> out(static_cast<std::size_t>(n));
  if (n == 1 || config_.parallelism <= 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = complete_one(messages, first_sample + i, tag);
    return out;
  }
  std::vector<std::thread> workers;
  for (int i = 0; i < n; ++i)
    workers.emplace_back([&, i] { out[static_cast<std::size_t>(i)] = complete_one(messages, first_sample + i, tag); });
  for (auto& w : workers) w.join();
  return out;
}

}  // namespace execbench::llm
