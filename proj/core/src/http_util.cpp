#include "http_util.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>

#include "comptra/error.hpp"

namespace comptra::detail {

std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorKind::InvalidConfig, "URL needs a scheme: '" + url + "'");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  auto path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const HttpPostOptions& options) {
  auto [base, path] = split_url(url);
  if (path.empty()) path = "/";

  httplib::Client client(base);
  auto secs = std::chrono::duration<double>(options.timeout_s);
  auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(secs);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!options.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + options.bearer_token);

  const std::string payload = body.dump();
  std::string last_failure;
  for (int attempt = 0;; ++attempt) {
    auto res = client.Post(path, headers, payload, "application/json");
    bool retryable = false;
    if (!res) {
      last_failure = "request to " + url + " failed: " + httplib::to_string(res.error());
      retryable = true;
    } else if (res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::MalformedResponse, "response from " + url + " is not JSON");
      }
    } else {
      last_failure = "HTTP " + std::to_string(res->status) + " from " + url;
      retryable = res->status == 429 || res->status >= 500;
    }
    if (!retryable || attempt >= options.max_retries) throw Error(ErrorKind::TransportError, last_failure);
    auto delay = options.backoff_base_s * std::pow(2.0, attempt);
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  }
}

}  // namespace comptra::detail
