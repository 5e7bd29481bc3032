#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "eas/prompting.hpp"

namespace eas {

enum class BackendKind { Http, Fixture };

struct BackendConfig {
  BackendKind kind{BackendKind::Fixture};
  std::string base_url;                  // Http: full endpoint URL
  std::string model;                     // Http
  std::string api_key_env{"EAS_API_KEY"};  // name of the env var holding the key
  int max_attempts{3};
  std::chrono::milliseconds backoff_base{1000};
  std::filesystem::path fixture_path;    // Fixture
};

struct CompletionRequest {
  PromptPair prompt;
  int chunk_index{0};
  std::chrono::duration<double> timeout{30.0};  // seconds
};

struct CompletionResult {
  std::string raw_text;  // verbatim, no trimming
  std::string backend_id;
  int attempt_count{1};
};

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidBackendConfig : BackendError {
  using BackendError::BackendError;
};
struct MissingApiKey : BackendError {
  std::string env_name;
  explicit MissingApiKey(std::string env_name_)
      : BackendError("API key environment variable not set: " + env_name_),
        env_name(std::move(env_name_)) {}
};
struct AuthError : BackendError {
  int status;
  explicit AuthError(int status_)
      : BackendError("authentication rejected (HTTP " + std::to_string(status_) + ")"),
        status(status_) {}
};
struct TransientExhausted : BackendError {
  int attempts;
  explicit TransientExhausted(int attempts_, const std::string& detail)
      : BackendError("gave up after " + std::to_string(attempts_) +
                     " attempts: " + detail),
        attempts(attempts_) {}
};
struct FixtureMiss : BackendError {
  std::string key;
  explicit FixtureMiss(std::string key_)
      : BackendError("no fixture entry for: \"" + key_ + "\""), key(std::move(key_)) {}
};
struct FixtureParseError : BackendError {
  using BackendError::BackendError;
};
struct DuplicateFixtureKey : BackendError {
  std::string key;
  explicit DuplicateFixtureKey(std::string key_)
      : BackendError("duplicate fixture key: \"" + key_ + "\""),
        key(std::move(key_)) {}
};

// normalize_sentence(ot) -> canned raw response block.
using FixtureMap = std::map<std::string, std::string>;

// Parses a fixture document: a JSON array of {"ot": ..., "response": ...}.
// Empty input yields an empty map; duplicate keys are rejected.
FixtureMap parse_fixtures(const std::string& text);
FixtureMap load_fixtures(const std::filesystem::path& path);

// Pluggable completion client. Safe for concurrent complete() calls; each
// call owns its request state.
class CompletionClient {
 public:
  explicit CompletionClient(BackendConfig config);

  CompletionResult complete(const CompletionRequest& request) const;

  const BackendConfig& config() const { return config_; }

 private:
  CompletionResult complete_http(const CompletionRequest& request) const;
  CompletionResult complete_fixture(const CompletionRequest& request) const;

  BackendConfig config_;
  FixtureMap fixtures_;
};

// One-shot convenience over CompletionClient.
CompletionResult complete(const BackendConfig& config, const CompletionRequest& request);

}  // namespace eas
