#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <set>
#include <string>
#include <vector>

namespace comptra {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

/// One chat completion. Decoding is always greedy.
struct ChatRequest {
  std::vector<ChatMessage> messages;
  int max_new_tokens = 500;
  std::vector<std::string> stop;

  static constexpr double temperature = 0.0;

  static ChatRequest single_user(std::string prompt, int max_new_tokens);

  /// Throws Error(InvalidRequest) unless the last message is from the user
  /// and max_new_tokens > 0.
  void validate() const;
  /// The user prompt (content of the last message).
  const std::string& prompt() const { return messages.back().content; }
};

/// Stable key-sorted JSON of messages, max_new_tokens and stop. Endpoint and
/// model are deliberately left out so cassettes replay against any backend.
std::string canonical_json(const ChatRequest& request);
std::string request_digest(const ChatRequest& request);

enum class BackendKind { Http, Mock, Cassette };

BackendKind backend_kind_from_string(const std::string& name);
std::string_view to_string(BackendKind kind);

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string endpoint_url;
  std::string model_name;
  std::string auth_env_var = "LLM_API_KEY";
  double timeout_s = 120.0;
  int max_retries = 3;
  int max_concurrency = 8;
  /// First retry delay; doubles each attempt (1s, 2s, 4s by default).
  double backoff_base_s = 1.0;
  /// Cassette to replay (kind == Cassette) or to append to (any other kind).
  std::string cassette_path;
  /// JSON rule file for kind == Mock.
  std::string mock_script_path;

  void validate() const;
};

/// Something that turns a request into the assistant's reply.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

/// Scripted test double. Rules are tried in order; the first whose pattern
/// matches the prompt wins.
class MockBackend : public ChatBackend {
 public:
  struct Rule {
    enum class Match { Contains, Regex } match = Match::Contains;
    std::string pattern;
    std::string response;
  };

  MockBackend() = default;
  explicit MockBackend(std::vector<Rule> rules, std::optional<std::string> fallback = std::nullopt);

  /// {"rules": [{"contains"|"regex": "...", "response": "..."}], "default": "..."}
  static MockBackend from_json(const std::string& json_text);
  static MockBackend load(const std::string& path);

  MockBackend& on(std::string substring, std::string response);
  MockBackend& on_regex(std::string pattern, std::string response);
  MockBackend& otherwise(std::string response);

  std::string complete(const ChatRequest& request) override;

 private:
  std::vector<Rule> rules_;
  std::optional<std::string> fallback_;
};

/// Replays a recorded cassette by request digest.
class CassetteBackend : public ChatBackend {
 public:
  static CassetteBackend load(const std::string& path);
  static CassetteBackend parse(const std::string& jsonl);

  std::string complete(const ChatRequest& request) override;
  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

/// OpenAI-compatible POST {endpoint}/chat/completions with retry on
/// 429/5xx/transport failures.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(BackendConfig config);
  std::string complete(const ChatRequest& request) override;

 private:
  BackendConfig config_;
};

/// Forwards to an inner backend and appends one JSONL record per distinct
/// request digest to a cassette file.
class RecordingBackend : public ChatBackend {
 public:
  RecordingBackend(std::unique_ptr<ChatBackend> inner, std::string cassette_path);
  std::string complete(const ChatRequest& request) override;

 private:
  std::unique_ptr<ChatBackend> inner_;
  std::string path_;
  std::mutex mutex_;
  std::set<std::string> recorded_;
};

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config);

/// Thread-safe entry point used by the pipeline: validates requests, bounds
/// in-flight calls to max_concurrency and strips one trailing newline.
class LlmClient {
 public:
  LlmClient(std::unique_ptr<ChatBackend> backend, int max_concurrency);
  explicit LlmClient(const BackendConfig& config);

  std::string complete(const ChatRequest& request);

  std::size_t calls() const { return calls_.load(); }

 private:
  std::unique_ptr<ChatBackend> backend_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
  std::atomic<std::size_t> calls_{0};
};

/// One-shot convenience wrapper around LlmClient.
std::string complete_chat(const BackendConfig& backend, const ChatRequest& request);

/// Sends every request through an http backend and records the cassette.
void record_cassette(const BackendConfig& http_backend, const std::vector<ChatRequest>& requests,
                     const std::string& cassette_path);

}  // namespace comptra
