#include "elan/provider.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <json.hpp>

#include "elan/errors.hpp"
#include "elan/manifest.hpp"

namespace elan {

namespace {

using nlohmann::json;

constexpr int kMaxRetriesCap = 10;

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 0;  // 0 means scheme default
  std::string path;
};

// Minimal absolute-URL parser, enough to validate configs and split the
// endpoint for the HTTP client: scheme://host[:port][/path].
ParsedUrl parse_url(const std::string& url) {
  ParsedUrl parsed;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw UsageError("invalid endpoint URL: " + url);
  }
  parsed.scheme = url.substr(0, scheme_end);
  for (char c : parsed.scheme) {
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw UsageError("invalid endpoint URL scheme: " + url);
    }
  }
  if (parsed.scheme != "http" && parsed.scheme != "https") {
    throw UsageError("endpoint must be http or https: " + url);
  }

  const std::size_t authority_begin = scheme_end + 3;
  const std::size_t path_begin = url.find('/', authority_begin);
  std::string authority =
      (path_begin == std::string::npos)
          ? url.substr(authority_begin)
          : url.substr(authority_begin, path_begin - authority_begin);
  parsed.path = (path_begin == std::string::npos) ? "/"
                                                  : url.substr(path_begin);

  const std::size_t colon = authority.rfind(':');
  if (colon != std::string::npos) {
    const std::string port_text = authority.substr(colon + 1);
    if (port_text.empty()) {
      throw UsageError("invalid endpoint port: " + url);
    }
    int port = 0;
    for (char c : port_text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw UsageError("invalid endpoint port: " + url);
      }
      port = port * 10 + (c - '0');
      if (port > 65535) {
        throw UsageError("invalid endpoint port: " + url);
      }
    }
    parsed.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw UsageError("endpoint URL has no host: " + url);
  }
  parsed.host = authority;
  return parsed;
}

std::string format_temperature(double temperature) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", temperature);
  return buffer;
}

bool status_is_retryable(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

json openai_request_body(const ProviderConfig& config,
                         const std::string& system_prompt,
                         const std::string& user_prompt) {
  return json{{"model", config.model},
              {"messages",
               json::array({json{{"role", "system"}, {"content", system_prompt}},
                            json{{"role", "user"}, {"content", user_prompt}}})},
              {"temperature", config.temperature}};
}

std::string openai_extract_text(const json& body) {
  if (!body.contains("choices") || !body["choices"].is_array() ||
      body["choices"].empty()) {
    throw ProviderError("response has no choices");
  }
  const json& message = body["choices"][0].value("message", json::object());
  if (!message.contains("content") || !message["content"].is_string()) {
    throw ProviderError("response choice has no message content");
  }
  return message["content"].get<std::string>();
}

json gemini_request_body(const ProviderConfig& config,
                         const std::string& system_prompt,
                         const std::string& user_prompt) {
  return json{
      {"system_instruction",
       json{{"parts", json::array({json{{"text", system_prompt}}})}}},
      {"contents",
       json::array({json{{"role", "user"},
                         {"parts", json::array({json{{"text", user_prompt}}})}}})},
      {"generationConfig", json{{"temperature", config.temperature}}}};
}

std::string gemini_extract_text(const json& body) {
  if (!body.contains("candidates") || !body["candidates"].is_array() ||
      body["candidates"].empty()) {
    throw ProviderError("response has no candidates");
  }
  const json& content = body["candidates"][0].value("content", json::object());
  if (!content.contains("parts") || !content["parts"].is_array() ||
      content["parts"].empty() || !content["parts"][0].contains("text")) {
    throw ProviderError("response candidate has no text part");
  }
  return content["parts"][0]["text"].get<std::string>();
}

ExchangeRecord record_from_json(const json& parsed,
                                const std::string& locator) {
  ExchangeRecord record;
  if (!parsed.is_object() || !parsed.contains("request_digest") ||
      !parsed.contains("response_text")) {
    throw ParseError(locator,
                     "exchange record needs request_digest and response_text");
  }
  record.request_digest = parsed["request_digest"].get<std::string>();
  record.response_text = parsed["response_text"].get<std::string>();
  record.timestamp = parsed.value("timestamp", "");
  record.provider = parsed.value("provider", "");
  record.model = parsed.value("model", "");
  record.temperature = parsed.value("temperature", 1.0);
  record.mode = parsed.value("mode", "");
  record.sequence = parsed.value("sequence", "");
  return record;
}

json record_to_json(const ExchangeRecord& record) {
  return json{{"request_digest", record.request_digest},
              {"response_text", record.response_text},
              {"timestamp", record.timestamp},
              {"provider", record.provider},
              {"model", record.model},
              {"temperature", record.temperature},
              {"mode", record.mode},
              {"sequence", record.sequence}};
}

}  // namespace

void validate(const ProviderConfig& config) {
  if (config.name.empty()) {
    throw UsageError("provider name must be non-empty");
  }
  if (config.model.empty()) {
    throw UsageError("provider model must be non-empty");
  }
  parse_url(config.endpoint);
  if (config.temperature < 0.0) {
    throw UsageError("temperature must be >= 0");
  }
  if (config.max_retries < 0 || config.max_retries > kMaxRetriesCap) {
    throw UsageError("max_retries must be between 0 and " +
                     std::to_string(kMaxRetriesCap));
  }
  if (config.api_flavor != "openai" && config.api_flavor != "gemini") {
    throw UsageError("unknown api_flavor: " + config.api_flavor);
  }
}

ProviderConfig builtin_provider(const std::string& name) {
  if (name == "chatgpt") {
    ProviderConfig config;
    config.name = "chatgpt";
    config.endpoint = "https://api.openai.com/v1/chat/completions";
    config.model = "gpt-3.5-turbo";
    config.credential_env = "OPENAI_API_KEY";
    config.api_flavor = "openai";
    return config;
  }
  if (name == "gemini") {
    ProviderConfig config;
    config.name = "gemini";
    config.endpoint =
        "https://generativelanguage.googleapis.com/v1beta/models";
    config.model = "gemini-1.5-pro";
    config.credential_env = "GEMINI_API_KEY";
    config.api_flavor = "gemini";
    return config;
  }
  throw UsageError("unknown provider: " + name +
                   " (built-ins: chatgpt, gemini)");
}

std::vector<ProviderConfig> load_providers(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }
  json parsed;
  try {
    parsed = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  if (!parsed.is_array()) {
    throw ParseError(path.string(), "provider file must be a JSON array");
  }

  std::vector<ProviderConfig> configs;
  for (const json& entry : parsed) {
    ProviderConfig config;
    config.name = entry.value("name", "");
    config.endpoint = entry.value("endpoint", "");
    config.model = entry.value("model", "");
    config.credential_env = entry.value("credential_env", "");
    config.api_flavor = entry.value("api_flavor", "openai");
    config.temperature = entry.value("temperature", 1.0);
    config.max_retries = entry.value("max_retries", 3);
    config.timeout = std::chrono::seconds(entry.value("timeout_seconds", 30));
    config.retry_backoff =
        std::chrono::milliseconds(entry.value("retry_backoff_ms", 500));
    validate(config);
    configs.push_back(std::move(config));
  }
  return configs;
}

ProviderConfig resolve_provider(
    const std::string& name,
    const std::optional<std::filesystem::path>& providers_file) {
  if (providers_file) {
    for (ProviderConfig& config : load_providers(*providers_file)) {
      if (config.name == name) return std::move(config);
    }
  }
  return builtin_provider(name);
}

std::string request_digest(const ProviderConfig& config,
                           const std::string& system_prompt,
                           const std::string& user_prompt,
                           const std::string& mode, int target_turns,
                           const std::string& sequence) {
  std::string canonical;
  canonical.reserve(system_prompt.size() + user_prompt.size() + 128);
  canonical += "exchange-v1\n";
  canonical += config.name;
  canonical += '\n';
  canonical += config.model;
  canonical += '\n';
  canonical += config.api_flavor;
  canonical += '\n';
  canonical += format_temperature(config.temperature);
  canonical += '\n';
  canonical += mode;
  canonical += '\n';
  canonical += std::to_string(target_turns);
  canonical += '\n';
  canonical += sequence;
  canonical += '\n';
  canonical += system_prompt;
  canonical += "\n---\n";
  canonical += user_prompt;
  return sha256_hex(canonical);
}

ExchangeLog ExchangeLog::open_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }

  ExchangeLog log;
  log.path_ = path;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string locator =
        path.string() + ":" + std::to_string(line_number);
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(locator, e.what());
    }
    ExchangeRecord record = record_from_json(parsed, locator);
    // Later records win, so a corrected exchange can be appended.
    log.by_digest_[record.request_digest] = record.response_text;
  }
  return log;
}

ExchangeLog ExchangeLog::open_record(const std::filesystem::path& path) {
  ExchangeLog log;
  log.path_ = path;
  if (std::filesystem::exists(path)) {
    log = open_replay(path);
  }
  return log;
}

std::optional<std::string> ExchangeLog::lookup(
    const std::string& digest) const {
  auto it = by_digest_.find(digest);
  if (it == by_digest_.end()) return std::nullopt;
  return it->second;
}

void ExchangeLog::append(const ExchangeRecord& record) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw MissingFileError(path_.string());
  }
  out << record_to_json(record).dump() << '\n';
  out.flush();
  if (!out) {
    throw MissingFileError(path_.string());
  }
  by_digest_[record.request_digest] = record.response_text;
}

std::string HttpCompletionTransport::complete(
    const ProviderConfig& config, const std::string& system_prompt,
    const std::string& user_prompt) {
  validate(config);
  const char* credential = nullptr;
  if (!config.credential_env.empty()) {
    credential = std::getenv(config.credential_env.c_str());
  }
  if (credential == nullptr || *credential == '\0') {
    throw ProviderError("credential environment variable not set: " +
                        config.credential_env);
  }

  const ParsedUrl url = parse_url(config.endpoint);
  std::string base = url.scheme + "://" + url.host;
  if (url.port != 0) base += ":" + std::to_string(url.port);

  std::string path = url.path;
  httplib::Headers headers;
  json body;
  if (config.api_flavor == "gemini") {
    if (path.back() == '/') path.pop_back();
    path += "/" + config.model + ":generateContent";
    headers.emplace("x-goog-api-key", credential);
    body = gemini_request_body(config, system_prompt, user_prompt);
  } else {
    headers.emplace("Authorization", std::string("Bearer ") + credential);
    body = openai_request_body(config, system_prompt, user_prompt);
  }
  const std::string payload = body.dump();

  httplib::Client client(base);
  client.set_connection_timeout(config.timeout.count(), 0);
  client.set_read_timeout(config.timeout.count(), 0);
  client.set_write_timeout(config.timeout.count(), 0);

  int last_status = 0;
  std::string last_detail = "no attempt made";
  const int attempts_allowed = config.max_retries + 1;
  for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config.retry_backoff * (1 << (attempt - 1)));
    }
    httplib::Result result =
        client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_status = 0;
      last_detail = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    last_status = result->status;
    if (result->status == 200) {
      json parsed;
      try {
        parsed = json::parse(result->body);
      } catch (const json::parse_error& e) {
        throw ProviderError(std::string("unparseable response body: ") +
                                e.what(),
                            result->status, attempt + 1);
      }
      return (config.api_flavor == "gemini") ? gemini_extract_text(parsed)
                                             : openai_extract_text(parsed);
    }
    last_detail = "HTTP " + std::to_string(result->status);
    if (!status_is_retryable(result->status)) {
      throw ProviderError("provider rejected request: " + last_detail,
                          result->status, attempt + 1);
    }
  }
  throw ProviderError("provider unavailable: " + last_detail, last_status,
                      attempts_allowed);
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[80];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour,
                utc.tm_min, utc.tm_sec);
  return buffer;
}

}  // namespace elan
