#include "eas/backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "eas/chunker.hpp"

namespace eas {

using json = nlohmann::json;

FixtureMap parse_fixtures(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
  if (blank) return {};

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FixtureParseError(std::string("fixture file: ") + e.what());
  }
  if (!doc.is_array()) throw FixtureParseError("fixture file must be a JSON array");

  FixtureMap map;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("ot") || !entry.contains("response") ||
        !entry["ot"].is_string() || !entry["response"].is_string()) {
      throw FixtureParseError("fixture entries need string \"ot\" and \"response\"");
    }
    std::string key = normalize_sentence(entry["ot"].get<std::string>());
    auto [it, inserted] = map.emplace(std::move(key), entry["response"].get<std::string>());
    if (!inserted) throw DuplicateFixtureKey(it->first);
  }
  return map;
}

FixtureMap load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureParseError("cannot open fixture file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fixtures(buffer.str());
}

CompletionClient::CompletionClient(BackendConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) {
    throw InvalidBackendConfig("max_attempts must be at least 1");
  }
  if (config_.kind == BackendKind::Http) {
    if (config_.base_url.empty() || config_.model.empty() || config_.api_key_env.empty()) {
      throw InvalidBackendConfig("http backend needs base_url, model and api_key_env");
    }
  } else {
    if (config_.fixture_path.empty()) {
      throw InvalidBackendConfig("fixture backend needs fixture_path");
    }
    fixtures_ = load_fixtures(config_.fixture_path);
  }
}

CompletionResult CompletionClient::complete(const CompletionRequest& request) const {
  if (request.timeout.count() <= 0) {
    throw InvalidBackendConfig("request timeout must be positive");
  }
  return config_.kind == BackendKind::Http ? complete_http(request)
                                           : complete_fixture(request);
}

CompletionResult CompletionClient::complete_fixture(const CompletionRequest& request) const {
  auto chunk_text = extract_chunk_text(request.prompt.user_text);
  if (!chunk_text) throw FixtureMiss("<no text markers in prompt>");
  const std::string key = normalize_sentence(*chunk_text);
  auto it = fixtures_.find(key);
  if (it == fixtures_.end()) throw FixtureMiss(key);
  return CompletionResult{it->second, "fixture", 1};
}

namespace {

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidBackendConfig("base_url needs a scheme: " + url);
  }
  auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

bool transient_status(int status) { return status == 429 || (status >= 500 && status < 600); }

std::string extract_message_text(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw BackendError("response body is not JSON");
  }
  // Chat-completion shape.
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& first = doc["choices"][0];
    if (first.contains("message") && first["message"].contains("content") &&
        first["message"]["content"].is_string()) {
      return first["message"]["content"].get<std::string>();
    }
  }
  // Content-blocks shape.
  if (doc.contains("content") && doc["content"].is_array() && !doc["content"].empty() &&
      doc["content"][0].contains("text") && doc["content"][0]["text"].is_string()) {
    return doc["content"][0]["text"].get<std::string>();
  }
  throw BackendError("response JSON has no message text");
}

}  // namespace

CompletionResult CompletionClient::complete_http(const CompletionRequest& request) const {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') throw MissingApiKey(config_.api_key_env);

  const auto [host, path] = split_url(config_.base_url);
  const std::string model = request.prompt.model_hint.value_or(config_.model);

  json body;
  body["model"] = model;
  body["temperature"] = request.prompt.temperature;
  body["messages"] = json::array({
      json{{"role", "system"}, {"content", request.prompt.system_text}},
      json{{"role", "user"}, {"content", request.prompt.user_text}},
  });
  const std::string payload = body.dump();

  const auto timeout =
      std::chrono::duration_cast<std::chrono::milliseconds>(request.timeout);
  std::string last_failure = "no attempt made";

  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client client(host);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_bearer_token_auth(key);

    auto res = client.Post(path, payload, "application/json");
    if (res) {
      if (res->status == 401 || res->status == 403) throw AuthError(res->status);
      if (!transient_status(res->status)) {
        if (res->status >= 200 && res->status < 300) {
          return CompletionResult{extract_message_text(res->body), "http:" + model, attempt};
        }
        throw BackendError("HTTP " + std::to_string(res->status) + " from backend");
      }
      last_failure = "HTTP " + std::to_string(res->status);
    } else {
      last_failure = httplib::to_string(res.error());
    }
    if (attempt < config_.max_attempts) {
      const auto delay = config_.backoff_base * (1LL << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
  }
  throw TransientExhausted(config_.max_attempts, last_failure);
}

CompletionResult complete(const BackendConfig& config, const CompletionRequest& request) {
  return CompletionClient(config).complete(request);
}

}  // namespace eas
