#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace elan {

// Connection settings for one chat-completion provider. The credential is an
// environment variable NAME; the secret itself never appears in configs or
// logs.
struct ProviderConfig {
  std::string name;            // registry key, e.g. "chatgpt"
  std::string endpoint;        // absolute http(s) URL
  std::string model;
  std::string credential_env;  // environment variable holding the API key
  std::string api_flavor = "openai";  // request/response shape: openai|gemini
  double temperature = 1.0;
  int max_retries = 3;  // capped at 10
  std::chrono::seconds timeout{30};
  std::chrono::milliseconds retry_backoff{500};  // base delay, doubles per try
};

// Throws UsageError when the endpoint is not a valid absolute URL, the name
// or model is empty, temperature is negative, or max_retries exceeds 10.
void validate(const ProviderConfig& config);

// Built-in defaults for the two supported providers ("chatgpt", "gemini"),
// optionally overridden/extended by a JSON config file: an array of objects
// with fields name, endpoint, model, credential_env, api_flavor, temperature,
// max_retries, timeout_seconds. Throws UsageError for unknown names.
ProviderConfig builtin_provider(const std::string& name);
std::vector<ProviderConfig> load_providers(const std::filesystem::path& path);
ProviderConfig resolve_provider(
    const std::string& name,
    const std::optional<std::filesystem::path>& providers_file);

// One recorded provider exchange. request_digest is a SHA-256 over the
// request's semantic content (provider, model, temperature, mode, target
// turns, sequence tag, rendered prompts) and keys replay lookups.
struct ExchangeRecord {
  std::string request_digest;
  std::string response_text;
  std::string timestamp;  // ISO-8601 UTC, informational only
  std::string provider;
  std::string model;
  double temperature = 1.0;
  std::string mode;      // "oneshot" or "turns"
  std::string sequence;  // conversation tag within a batch
};

// Canonical digest for an exchange; identical inputs yield identical hex.
std::string request_digest(const ProviderConfig& config,
                           const std::string& system_prompt,
                           const std::string& user_prompt,
                           const std::string& mode, int target_turns,
                           const std::string& sequence);

// Line-delimited exchange store. Replay lookups index the whole file in
// memory (last record wins per digest); recording appends one JSON line per
// exchange.
class ExchangeLog {
 public:
  // Loads an existing log for replay. Throws MissingFileError / ParseError.
  static ExchangeLog open_replay(const std::filesystem::path& path);

  // Opens (creating if needed) a log for appending.
  static ExchangeLog open_record(const std::filesystem::path& path);

  std::optional<std::string> lookup(const std::string& digest) const;
  void append(const ExchangeRecord& record);

  std::size_t size() const { return by_digest_.size(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::unordered_map<std::string, std::string> by_digest_;
};

// Transport abstraction so harness logic can run against the real HTTP
// client, a test double, or nothing at all (pure replay).
class CompletionTransport {
 public:
  virtual ~CompletionTransport() = default;

  // Returns the assistant's raw completion text. Throws ProviderError after
  // retries are exhausted.
  virtual std::string complete(const ProviderConfig& config,
                               const std::string& system_prompt,
                               const std::string& user_prompt) = 0;
};

// Real HTTP transport: builds the provider-specific request (openai or gemini
// flavor), sends it with exponential-backoff retries on 429/5xx/transport
// errors, and extracts the completion text from the response.
class HttpCompletionTransport : public CompletionTransport {
 public:
  std::string complete(const ProviderConfig& config,
                       const std::string& system_prompt,
                       const std::string& user_prompt) override;
};

std::string iso8601_utc_now();

}  // namespace elan
