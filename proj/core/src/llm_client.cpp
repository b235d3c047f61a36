#include "comptra/llm_client.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "comptra/digest.hpp"
#include "comptra/error.hpp"
#include "http_util.hpp"

namespace comptra {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

ChatRequest ChatRequest::single_user(std::string prompt, int max_new_tokens) {
  ChatRequest req;
  req.messages.push_back({Role::User, std::move(prompt)});
  req.max_new_tokens = max_new_tokens;
  return req;
}

void ChatRequest::validate() const {
  if (messages.empty() || messages.back().role != Role::User)
    throw Error(ErrorKind::InvalidRequest, "the last message must come from the user");
  if (max_new_tokens <= 0) throw Error(ErrorKind::InvalidRequest, "max_new_tokens must be positive");
}

namespace {

json messages_json(const ChatRequest& request) {
  json msgs = json::array();
  for (const auto& m : request.messages)
    msgs.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  return msgs;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string canonical_json(const ChatRequest& request) {
  // nlohmann::json objects are key-sorted, so the dump is canonical.
  json j = {{"messages", messages_json(request)},
            {"max_new_tokens", request.max_new_tokens},
            {"stop", request.stop}};
  return j.dump();
}

std::string request_digest(const ChatRequest& request) { return sha256_hex(canonical_json(request)); }

BackendKind backend_kind_from_string(const std::string& name) {
  if (name == "http") return BackendKind::Http;
  if (name == "mock") return BackendKind::Mock;
  if (name == "cassette") return BackendKind::Cassette;
  throw Error(ErrorKind::InvalidConfig, "unknown backend '" + name + "'");
}

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Http: return "http";
    case BackendKind::Mock: return "mock";
    case BackendKind::Cassette: return "cassette";
  }
  return "mock";
}

void BackendConfig::validate() const {
  if (kind == BackendKind::Http && (endpoint_url.empty() || model_name.empty()))
    throw Error(ErrorKind::InvalidConfig, "http backend requires an endpoint URL and a model name");
  if (kind == BackendKind::Cassette && cassette_path.empty())
    throw Error(ErrorKind::InvalidConfig, "cassette backend requires a cassette path");
  if (max_concurrency < 1) throw Error(ErrorKind::InvalidConfig, "max_concurrency must be >= 1");
  if (max_retries < 0) throw Error(ErrorKind::InvalidConfig, "max_retries must be >= 0");
  if (timeout_s <= 0) throw Error(ErrorKind::InvalidConfig, "timeout must be positive");
}

// --- mock -----------------------------------------------------------------

MockBackend::MockBackend(std::vector<Rule> rules, std::optional<std::string> fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

MockBackend& MockBackend::on(std::string substring, std::string response) {
  rules_.push_back({Rule::Match::Contains, std::move(substring), std::move(response)});
  return *this;
}

MockBackend& MockBackend::on_regex(std::string pattern, std::string response) {
  rules_.push_back({Rule::Match::Regex, std::move(pattern), std::move(response)});
  return *this;
}

MockBackend& MockBackend::otherwise(std::string response) {
  fallback_ = std::move(response);
  return *this;
}

MockBackend MockBackend::from_json(const std::string& json_text) {
  MockBackend mock;
  try {
    auto j = json::parse(json_text);
    for (const auto& r : j.value("rules", json::array())) {
      if (r.contains("contains"))
        mock.on(r.at("contains").get<std::string>(), r.at("response").get<std::string>());
      else
        mock.on_regex(r.at("regex").get<std::string>(), r.at("response").get<std::string>());
    }
    if (j.contains("default")) mock.otherwise(j.at("default").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("mock script: ") + e.what());
  }
  return mock;
}

MockBackend MockBackend::load(const std::string& path) { return from_json(read_file(path)); }

std::string MockBackend::complete(const ChatRequest& request) {
  const auto& prompt = request.prompt();
  for (const auto& rule : rules_) {
    bool hit = rule.match == Rule::Match::Contains
                   ? prompt.find(rule.pattern) != std::string::npos
                   : std::regex_search(prompt, std::regex(rule.pattern, std::regex::ECMAScript));
    if (hit) return rule.response;
  }
  if (fallback_) return *fallback_;
  throw Error(ErrorKind::TransportError, "mock backend has no rule for request " + request_digest(request));
}

// --- cassette -------------------------------------------------------------

CassetteBackend CassetteBackend::parse(const std::string& jsonl) {
  CassetteBackend cassette;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto rec = json::parse(line);
      cassette.responses_[rec.at("digest").get<std::string>()] = rec.at("response").get<std::string>();
    } catch (const json::exception&) {
      throw Error(ErrorKind::MalformedRecord, "cassette line " + std::to_string(line_no));
    }
  }
  return cassette;
}

CassetteBackend CassetteBackend::load(const std::string& path) { return parse(read_file(path)); }

std::string CassetteBackend::complete(const ChatRequest& request) {
  auto digest = request_digest(request);
  auto it = responses_.find(digest);
  if (it == responses_.end()) throw Error(ErrorKind::CassetteMiss, digest);
  return it->second;
}

// --- http -----------------------------------------------------------------

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) { config_.validate(); }

std::string HttpBackend::complete(const ChatRequest& request) {
  json body = {{"model", config_.model_name},
               {"messages", messages_json(request)},
               {"max_tokens", request.max_new_tokens},
               {"temperature", ChatRequest::temperature}};
  if (!request.stop.empty()) body["stop"] = request.stop;

  detail::HttpPostOptions opts;
  opts.timeout_s = config_.timeout_s;
  opts.max_retries = config_.max_retries;
  opts.backoff_base_s = config_.backoff_base_s;
  if (!config_.auth_env_var.empty()) {
    if (const char* token = std::getenv(config_.auth_env_var.c_str())) opts.bearer_token = token;
  }

  std::string url = config_.endpoint_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  auto res = detail::post_json(url + "/chat/completions", body, opts);

  const json* content = nullptr;
  if (res.is_object() && res.contains("choices") && res["choices"].is_array() && !res["choices"].empty()) {
    const auto& choice = res["choices"][0];
    if (choice.is_object() && choice.contains("message") && choice["message"].is_object() &&
        choice["message"].contains("content"))
      content = &choice["message"]["content"];
  }
  if (content == nullptr || !content->is_string())
    throw Error(ErrorKind::MalformedResponse, "missing choices[0].message.content");
  return content->get<std::string>();
}

// --- recording ------------------------------------------------------------

RecordingBackend::RecordingBackend(std::unique_ptr<ChatBackend> inner, std::string cassette_path)
    : inner_(std::move(inner)), path_(std::move(cassette_path)) {
  // Appending to an existing cassette must not duplicate its records.
  std::ifstream in(path_, std::ios::binary);
  std::string line;
  while (in && std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      recorded_.insert(json::parse(line).at("digest").get<std::string>());
    } catch (const json::exception&) {
      throw Error(ErrorKind::MalformedRecord, "existing cassette " + path_);
    }
  }
}

std::string RecordingBackend::complete(const ChatRequest& request) {
  auto response = inner_->complete(request);
  auto digest = request_digest(request);
  std::lock_guard lock(mutex_);
  if (recorded_.insert(digest).second) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorKind::MissingFile, path_);
    json rec = {{"digest", digest},
                {"request", json::parse(canonical_json(request))},
                {"prompt", request.prompt()},
                {"response", response}};
    out << rec.dump() << '\n';
  }
  return response;
}

// --- client ---------------------------------------------------------------

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config) {
  config.validate();
  std::unique_ptr<ChatBackend> backend;
  switch (config.kind) {
    case BackendKind::Http:
      backend = std::make_unique<HttpBackend>(config);
      break;
    case BackendKind::Mock:
      backend = std::make_unique<MockBackend>(
          config.mock_script_path.empty() ? MockBackend{} : MockBackend::load(config.mock_script_path));
      break;
    case BackendKind::Cassette:
      return std::make_unique<CassetteBackend>(CassetteBackend::load(config.cassette_path));
  }
  if (!config.cassette_path.empty())
    backend = std::make_unique<RecordingBackend>(std::move(backend), config.cassette_path);
  return backend;
}

LlmClient::LlmClient(std::unique_ptr<ChatBackend> backend, int max_concurrency)
    : backend_(std::move(backend)),
      slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, max_concurrency))) {}

LlmClient::LlmClient(const BackendConfig& config) : LlmClient(make_backend(config), config.max_concurrency) {}

std::string LlmClient::complete(const ChatRequest& request) {
  request.validate();
  slots_->acquire();
  std::string out;
  try {
    out = backend_->complete(request);
  } catch (...) {
    slots_->release();
    throw;
  }
  slots_->release();
  ++calls_;
  if (!out.empty() && out.back() == '\n') {
    out.pop_back();
    if (!out.empty() && out.back() == '\r') out.pop_back();
  }
  return out;
}

std::string complete_chat(const BackendConfig& backend, const ChatRequest& request) {
  LlmClient client(backend);
  return client.complete(request);
}

void record_cassette(const BackendConfig& http_backend, const std::vector<ChatRequest>& requests,
                     const std::string& cassette_path) {
  auto config = http_backend;
  config.cassette_path = cassette_path;
  LlmClient client(config);
  for (const auto& r : requests) client.complete(r);
}

}  // namespace comptra
