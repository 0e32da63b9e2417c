#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "candist/error.hpp"

namespace candist::annotate {

/// A replay fixture cannot answer a request; retrying will not help.
class ReplayMiss : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

struct LlmClientConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo-0125";
  /// Name of the environment variable holding the bearer token.
  std::string token_env = "OPENAI_API_KEY";
  double temperature = 0.3;
  std::size_t n_samples = 1;
  std::size_t max_concurrency = 4;
  std::chrono::milliseconds timeout{60000};
  std::size_t retry = 3;

  static constexpr double kAnnotationTemperature = 0.3;
  static constexpr double kSelfConsistencyTemperature = 0.5;
};

struct ChatRequest {
  std::string sample_id;
  std::string prompt;
  double temperature = LlmClientConfig::kAnnotationTemperature;
  std::size_t n = 1;
};

/// A chat-completion backend. Implementations must be safe to call from
/// several threads at once.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Returns the sampled completions; throws RuntimeFailure on transport
  /// or protocol errors.
  virtual std::vector<std::string> complete(const ChatRequest& request) = 0;
};

/// OpenAI-style /chat/completions body: model, one user message,
/// temperature and n.
nlohmann::json make_chat_body(const ChatRequest& request, const std::string& model);
/// choices[*].message.content, in order.
std::vector<std::string> parse_chat_response(const std::string& body);

class HttpChatClient final : public ChatClient {
 public:
  /// Reads the token from `config.token_env`; an unset variable means no
  /// Authorization header.
  explicit HttpChatClient(LlmClientConfig config);
  std::vector<std::string> complete(const ChatRequest& request) override;

 private:
  LlmClientConfig config_;
  std::string origin_;
  std::string path_;
  std::string token_;
};

/// Test double driven by a callable.
class ScriptedClient final : public ChatClient {
 public:
  using Script = std::function<std::vector<std::string>(const ChatRequest&)>;
  explicit ScriptedClient(Script script) : script_(std::move(script)) {}
  std::vector<std::string> complete(const ChatRequest& request) override {
    return script_(request);
  }

 private:
  Script script_;
};

/// One logged call: {"sample_id", "prompt", "responses": [...]}.
struct ReplayEntry {
  std::string sample_id;
  std::string prompt;
  std::vector<std::string> responses;
};

nlohmann::ordered_json to_json(const ReplayEntry& entry);

/// Appends calls to a replay log, one line each, under a mutex.
class ReplayRecorder {
 public:
  explicit ReplayRecorder(const std::filesystem::path& path);
  void append(const ReplayEntry& entry);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

/// Serves responses from a replay log keyed by sample id. A missing id or
/// a prompt that differs from the recorded one is a RuntimeFailure.
class ReplayClient final : public ChatClient {
 public:
  explicit ReplayClient(const std::filesystem::path& path);
  explicit ReplayClient(std::vector<ReplayEntry> entries);
  std::vector<std::string> complete(const ChatRequest& request) override;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, ReplayEntry> entries_;
};

}  // namespace candist::annotate
