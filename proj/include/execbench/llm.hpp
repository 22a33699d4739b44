#pragma once

// Chat-completion client for OpenAI-compatible endpoints, plus mock models.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "execbench/problem.hpp"

namespace execbench::llm {

struct Message {
  std::string role;
  std::string content;
};

struct ModelConfig {
  std::string profile;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::optional<std::string> reasoning_effort;
  int n_samples = 5;
  std::chrono::seconds request_timeout{600};
  int max_retries = 5;
  int parallelism = 4;
  std::string api_key_env = "OPENAI_API_KEY";

  /// Chat-completions request body for one sample.
  nlohmann::json request_body(const std::vector<Message>& messages) const;
  nlohmann::json to_json() const;
  /// SHA-256 of the serialized config.
  std::string hash() const;
};

/// `traditional`, `reasoning` or `effort-based`.
ModelConfig profile(const std::string& name);

struct ModelResponse {
  bool ok = false;
  std::string text;
  std::string finish_reason;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double latency_s = 0;
  int attempts = 0;
  std::string error;
};

/// Retryable failure (rate limit, 5xx, connection reset).
class TransientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Model {
 public:
  virtual ~Model() = default;
  /// One sample. Throws TransientError on retryable failures and any other
  /// exception on permanent ones.
  virtual ModelResponse sample(const std::vector<Message>& messages, int sample_index) = 0;
  virtual std::string name() const = 0;
};

class HttpChatModel : public Model {
 public:
  explicit HttpChatModel(ModelConfig config);
  ModelResponse sample(const std::vector<Message>& messages, int sample_index) override;
  std::string name() const override { return config_.model; }

 private:
  ModelConfig config_;
};

class FixedModel : public Model {
 public:
  explicit FixedModel(std::string text) : text_(std::move(text)) {}
  ModelResponse sample(const std::vector<Message>&, int) override;
  std::string name() const override { return "mock:fixed"; }

 private:
  std::string text_;
};

/// Replays responses from a transcript written by Client, keyed by the
/// request messages and sample index.
class ScriptedModel : public Model {
 public:
  explicit ScriptedModel(const std::string& transcript_path);
  ModelResponse sample(const std::vector<Message>& messages, int sample_index) override;
  std::string name() const override { return "mock:scripted"; }
  std::size_t size() const { return replies_.size(); }

 private:
  std::map<std::string, std::string> replies_;
};

/// Answers prediction and choice prompts from the paired dataset.
/// `given`: the true output of the program shown (choice: of the program it
/// picks). `original`: always the original program's output.
class GroundTruthModel : public Model {
 public:
  enum class Mode { Given, Original };
  GroundTruthModel(Mode mode, const std::vector<Problem>& originals,
                   const std::vector<Problem>& mutated, char choice_letter = 'A');
  ModelResponse sample(const std::vector<Message>& messages, int sample_index) override;
  std::string name() const override;

 private:
  struct Entry {
    std::string function_name;
    std::string original_output;
    std::string own_output;
  };
  Mode mode_;
  char letter_;
  std::map<std::pair<std::string, std::string>, Entry> by_source_input_;
};

/// Builds a model from a spec: `mock:ground-truth-given`,
/// `mock:ground-truth-original`, `mock:fixed:<text>`,
/// `mock:scripted:<transcript>`, or an endpoint model id.
/// Choice letter for ground-truth mocks: append `@B`.
std::shared_ptr<Model> make_model(const std::string& spec, const ModelConfig& config,
                                  const std::vector<Problem>& originals = {},
                                  const std::vector<Problem>& mutated = {});

struct ClientOptions {
  std::string transcript_path;  // empty: no transcript
  std::function<double()> clock;  // seconds; defaults to steady clock
  std::function<void(double)> sleep;  // seconds; defaults to real sleep
  double backoff_base_s = 1.0;
};

/// Issues samples with retries, bounded concurrency and a transcript.
class Client {
 public:
  Client(std::shared_ptr<Model> model, ModelConfig config, ClientOptions options = {});

  /// `n` samples (indices first_sample..first_sample+n-1), ordered by index.
  std::vector<ModelResponse> complete(const std::vector<Message>& messages, int n,
                                      const std::string& tag = "", int first_sample = 0);
  /// Single sample with a given index.
  ModelResponse complete_one(const std::vector<Message>& messages, int sample_index,
                             const std::string& tag = "");

  const ModelConfig& config() const { return config_; }
  std::string model_name() const { return model_->name(); }
  int max_in_flight() const { return max_in_flight_; }

 private:
  void log(nlohmann::json entry);

  std::shared_ptr<Model> model_;
  ModelConfig config_;
  ClientOptions options_;
  std::counting_semaphore<1024> slots_;
  std::mutex mu_;
  int in_flight_ = 0;
  int max_in_flight_ = 0;
  long long next_id_ = 0;
};

/// Key used to match a request in a transcript.
std::string request_key(const std::vector<Message>& messages, int sample_index);

std::string sha256_hex(std::string_view data);

}  // namespace execbench::llm
