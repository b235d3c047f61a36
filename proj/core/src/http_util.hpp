#pragma once

// JSON-over-HTTP POST shared by the chat, embedding, MT and scorer clients.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace comptra::detail {

struct HttpPostOptions {
  double timeout_s = 120.0;
  int max_retries = 3;
  double backoff_base_s = 1.0;
  std::string bearer_token;
};

/// POSTs `body` to `url` (scheme://host[:port][/path]). Retries 429, 5xx and
/// connection/timeout failures with delays base, 2*base, 4*base, ... Throws
/// Error(TransportError) once retries are exhausted or on any other non-200
/// status, and Error(MalformedResponse) when the body is not JSON.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const HttpPostOptions& options);

/// Splits "http://host:8080/v1" into {"http://host:8080", "/v1"}.
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace comptra::detail
