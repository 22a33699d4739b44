#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "doctest.h"
#include "execbench/llm.hpp"

using namespace execbench;
using namespace execbench::llm;

namespace {

class FlakyModel : public Model {
 public:
  explicit FlakyModel(int failures) : failures_(failures) {}
  ModelResponse sample(const std::vector<Message>& messages, int index) override {
    if (calls++ < failures_) throw TransientError("429 rate limited");
    ModelResponse r;
    r.text = messages.back().content + "#" + std::to_string(index);
    return r;
  }
  std::string name() const override { return "flaky"; }
  std::atomic<int> calls{0};

 private:
  int failures_;
};

class SlowModel : public Model {
 public:
  ModelResponse sample(const std::vector<Message>&, int index) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    ModelResponse r;
    r.text = std::to_string(index);
    return r;
  }
  std::string name() const override { return "slow"; }
};

std::string temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("execbench_" + name);
  std::filesystem::remove(p);
  return p.string();
}

}  // namespace

TEST_CASE("model profiles") {
  auto t = profile("traditional");
  CHECK(*t.temperature == 0.2);
  CHECK(*t.top_p == 0.95);
  CHECK(*t.max_tokens == 4096);
  auto r = profile("reasoning");
  CHECK(*r.temperature == 0.6);
  CHECK_FALSE(r.max_tokens);
  auto e = profile("effort-based");
  CHECK(*e.reasoning_effort == "high");
  CHECK_FALSE(e.temperature);
  CHECK_THROWS(profile("bogus"));

  t.model = "gpt-x";
  auto body = t.request_body({{"user", "hi"}});
  CHECK(body["model"] == "gpt-x");
  CHECK(body["messages"][0]["content"] == "hi");
  CHECK(body["temperature"] == 0.2);
  CHECK_FALSE(body.contains("reasoning_effort"));
  CHECK(e.request_body({})["reasoning_effort"] == "high");
  CHECK(t.hash() != profile("traditional").hash());
  CHECK(t.hash().size() == 64);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("transient errors are retried with exponential backoff") {
  std::vector<double> sleeps;
  ModelConfig cfg = profile("traditional");
  cfg.max_retries = 5;
  ClientOptions opt;
  opt.sleep = [&](double s) { sleeps.push_back(s); };
  Client client(std::make_shared<FlakyModel>(3), cfg, opt);
  auto r = client.complete_one({{"user", "q"}}, 2);
  CHECK(r.ok);
  CHECK(r.text == "q#2");
  CHECK(r.attempts == 4);
  CHECK(sleeps == std::vector<double>{1, 2, 4});

  sleeps.clear();
  cfg.max_retries = 2;
  Client gives_up(std::make_shared<FlakyModel>(10), cfg, opt);
  auto f = gives_up.complete_one({{"user", "q"}}, 0);
  CHECK_FALSE(f.ok);
  CHECK(f.attempts == 3);
  CHECK(f.error.find("429") != std::string::npos);
  CHECK(sleeps.size() == 2);
}

TEST_CASE("transcripts log requests and replay") {
  const auto path = temp_path("transcript.jsonl");
  ModelConfig cfg = profile("traditional");
  {
    ClientOptions opt;
    opt.transcript_path = path;
    opt.sleep = [](double) {};
    Client client(std::make_shared<FlakyModel>(1), cfg, opt);
    auto rs = client.complete({{"user", "hello"}}, 3, "t");
    REQUIRE(rs.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(rs[i].text == "hello#" + std::to_string(i));
  }
  auto lines = read_jsonl(path);
  int requests = 0, responses = 0, retries = 0;
  for (const auto& l : lines) {
    requests += l["event"] == "request";
    responses += l["event"] == "response";
    retries += l["event"] == "retry";
  }
  CHECK(requests == 3);
  CHECK(responses == 3);
  CHECK(retries == 1);

  ScriptedModel replay(path);
  CHECK(replay.size() == 3);
  CHECK(replay.sample({{"user", "hello"}}, 1).text == "hello#1");
  CHECK_THROWS(replay.sample({{"user", "other"}}, 0));
  CHECK(request_key({{"user", "hello"}}, 1) != request_key({{"user", "hello"}}, 2));
  std::filesystem::remove(path);
}

TEST_CASE("concurrency is bounded by parallelism") {
  ModelConfig cfg = profile("traditional");
  cfg.parallelism = 3;
  Client client(std::make_shared<SlowModel>(), cfg);
  auto rs = client.complete({{"user", "x"}}, 8);
  CHECK(client.max_in_flight() <= 3);
  CHECK(client.max_in_flight() >= 1);
  for (int i = 0; i < 8; ++i) CHECK(rs[i].text == std::to_string(i));
}

TEST_CASE("fixed model") {
  Client client(std::make_shared<FixedModel>("same"), profile("reasoning"));
  for (const auto& r : client.complete({{"user", "x"}}, 5)) {
    CHECK(r.ok);
    CHECK(r.text == "same");
  }
  CHECK(make_model("mock:fixed:hi", profile("reasoning"))->sample({}, 0).text == "hi");
}

TEST_CASE("http chat model against a local server") {
  httplib::Server server;
  std::atomic<int> hits{0};
  nlohmann::json last_body;
  std::mutex mu;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits++ == 0) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    {
      std::lock_guard lock(mu);
      last_body = nlohmann::json::parse(req.body);
    }
    nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "[ANSWER]x[/ANSWER]"}}},
                                          {"finish_reason", "stop"}}}},
                            {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 3}}}};
    res.set_content(reply.dump(), "application/json");
  });
  server.Post("/bad", [](const httplib::Request&, httplib::Response& res) { res.status = 400; });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });

  ModelConfig cfg = profile("reasoning");
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.api_key_env = "EXECBENCH_TEST_UNSET_KEY";
  ClientOptions opt;
  opt.sleep = [](double) {};
  Client client(make_model("test-model", cfg), cfg, opt);
  auto r = client.complete_one({{"user", "hi"}}, 0);
  CHECK(r.ok);
  CHECK(r.text == "[ANSWER]x[/ANSWER]");
  CHECK(r.attempts == 2);
  CHECK(r.prompt_tokens == 12);
  CHECK(last_body["model"] == "test-model");
  CHECK(last_body["temperature"] == 0.6);

  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/bad";
  Client bad(make_model("test-model", cfg), cfg, opt);
  auto e = bad.complete_one({{"user", "hi"}}, 0);
  CHECK_FALSE(e.ok);
  CHECK(e.attempts == 1);
  CHECK(e.error.find("HTTP 400") != std::string::npos);

  server.stop();
  t.join();
}
