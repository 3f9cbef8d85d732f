#include "elan/provider.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <json.hpp>

#include "elan/errors.hpp"
#include "test_support.hpp"

namespace elan {
namespace {

using nlohmann::json;

ProviderConfig valid_config() {
  ProviderConfig config;
  config.name = "local";
  config.endpoint = "https://example.test/v1/chat/completions";
  config.model = "test-model";
  config.credential_env = "ELAN_TEST_KEY";
  return config;
}

bool is_lower_hex(const std::string& text) {
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && !(c >= 'a' && c <= 'f'))
      return false;
  }
  return true;
}

// In-process HTTP endpoint for exercising the real transport without leaving
// the loopback interface.
class LocalServer {
 public:
  LocalServer() = default;
  ~LocalServer() { stop(); }
  LocalServer(const LocalServer&) = delete;
  LocalServer& operator=(const LocalServer&) = delete;

  httplib::Server& handlers() { return server_; }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

ProviderConfig local_provider(const std::string& endpoint,
                              const std::string& flavor = "openai") {
  ProviderConfig config;
  config.name = "local";
  config.endpoint = endpoint;
  config.model = "test-model";
  config.credential_env = "ELAN_TEST_KEY";
  config.api_flavor = flavor;
  config.max_retries = 1;
  config.timeout = std::chrono::seconds(5);
  config.retry_backoff = std::chrono::milliseconds(1);
  return config;
}

class TransportTest : public ::testing::Test {
 protected:
  void SetUp() override { setenv("ELAN_TEST_KEY", "test-key", 1); }
  void TearDown() override { unsetenv("ELAN_TEST_KEY"); }
};

TEST(ValidateConfigTest, AcceptsCompleteConfig) {
  EXPECT_NO_THROW(validate(valid_config()));

  ProviderConfig with_port = valid_config();
  with_port.endpoint = "http://localhost:8080/api";
  EXPECT_NO_THROW(validate(with_port));
}

TEST(ValidateConfigTest, RejectsBadEndpoints) {
  ProviderConfig config = valid_config();

  config.endpoint = "api.openai.com/v1/chat";
  EXPECT_THROW(validate(config), UsageError);

  config.endpoint = "ftp://example.test/v1";
  EXPECT_THROW(validate(config), UsageError);

  config.endpoint = "https:///v1/chat";
  EXPECT_THROW(validate(config), UsageError);

  config.endpoint = "http://example.test:99999/v1";
  EXPECT_THROW(validate(config), UsageError);

  config.endpoint = "http://example.test:/v1";
  EXPECT_THROW(validate(config), UsageError);

  config.endpoint = "";
  EXPECT_THROW(validate(config), UsageError);
}

TEST(ValidateConfigTest, RejectsBadFields) {
  ProviderConfig config = valid_config();
  config.name = "";
  EXPECT_THROW(validate(config), UsageError);

  config = valid_config();
  config.model = "";
  EXPECT_THROW(validate(config), UsageError);

  config = valid_config();
  config.temperature = -0.1;
  EXPECT_THROW(validate(config), UsageError);

  config = valid_config();
  config.max_retries = 11;
  EXPECT_THROW(validate(config), UsageError);

  config = valid_config();
  config.max_retries = -1;
  EXPECT_THROW(validate(config), UsageError);

  config = valid_config();
  config.api_flavor = "grpc";
  EXPECT_THROW(validate(config), UsageError);
}

TEST(BuiltinProviderTest, KnowsBothChatProviders) {
  const ProviderConfig chatgpt = builtin_provider("chatgpt");
  EXPECT_EQ(chatgpt.name, "chatgpt");
  EXPECT_EQ(chatgpt.endpoint, "https://api.openai.com/v1/chat/completions");
  EXPECT_EQ(chatgpt.model, "gpt-3.5-turbo");
  EXPECT_EQ(chatgpt.credential_env, "OPENAI_API_KEY");
  EXPECT_EQ(chatgpt.api_flavor, "openai");
  EXPECT_NO_THROW(validate(chatgpt));

  const ProviderConfig gemini = builtin_provider("gemini");
  EXPECT_EQ(gemini.name, "gemini");
  EXPECT_EQ(gemini.endpoint,
            "https://generativelanguage.googleapis.com/v1beta/models");
  EXPECT_EQ(gemini.model, "gemini-1.5-pro");
  EXPECT_EQ(gemini.credential_env, "GEMINI_API_KEY");
  EXPECT_EQ(gemini.api_flavor, "gemini");
  EXPECT_NO_THROW(validate(gemini));
}

TEST(BuiltinProviderTest, UnknownNameThrows) {
  EXPECT_THROW(builtin_provider("claude"), UsageError);
  EXPECT_THROW(builtin_provider(""), UsageError);
}

TEST(LoadProvidersTest, ParsesConfigFile) {
  test::TempDir dir;
  const auto path = dir.file("providers.json");
  test::write_file(path, R"([
    {
      "name": "staging",
      "endpoint": "http://127.0.0.1:9999/v1/chat/completions",
      "model": "stub-1",
      "credential_env": "STAGING_KEY",
      "temperature": 0.25,
      "max_retries": 2,
      "timeout_seconds": 7,
      "retry_backoff_ms": 50
    }
  ])");

  const std::vector<ProviderConfig> configs = load_providers(path);
  ASSERT_EQ(configs.size(), 1u);
  EXPECT_EQ(configs[0].name, "staging");
  EXPECT_EQ(configs[0].model, "stub-1");
  EXPECT_EQ(configs[0].credential_env, "STAGING_KEY");
  EXPECT_EQ(configs[0].api_flavor, "openai");
  EXPECT_DOUBLE_EQ(configs[0].temperature, 0.25);
  EXPECT_EQ(configs[0].max_retries, 2);
  EXPECT_EQ(configs[0].timeout, std::chrono::seconds(7));
  EXPECT_EQ(configs[0].retry_backoff, std::chrono::milliseconds(50));
}

TEST(LoadProvidersTest, ReportsFileProblems) {
  test::TempDir dir;
  EXPECT_THROW(load_providers(dir.file("absent.json")), MissingFileError);

  const auto malformed = dir.file("malformed.json");
  test::write_file(malformed, "{not json");
  EXPECT_THROW(load_providers(malformed), ParseError);

  const auto object = dir.file("object.json");
  test::write_file(object, R"({"name": "x"})");
  EXPECT_THROW(load_providers(object), ParseError);

  const auto invalid = dir.file("invalid.json");
  test::write_file(invalid, R"([{"name": "x", "endpoint": "nope",
                                 "model": "m", "credential_env": "K"}])");
  EXPECT_THROW(load_providers(invalid), UsageError);
}

TEST(ResolveProviderTest, FileEntriesShadowBuiltins) {
  test::TempDir dir;
  const auto path = dir.file("providers.json");
  test::write_file(path, R"([
    {
      "name": "chatgpt",
      "endpoint": "http://127.0.0.1:9999/v1/chat/completions",
      "model": "local-proxy",
      "credential_env": "PROXY_KEY"
    }
  ])");

  const ProviderConfig shadowed = resolve_provider("chatgpt", path);
  EXPECT_EQ(shadowed.model, "local-proxy");
  EXPECT_EQ(shadowed.credential_env, "PROXY_KEY");

  // Names absent from the file fall back to the built-in registry.
  const ProviderConfig fallback = resolve_provider("gemini", path);
  EXPECT_EQ(fallback.model, "gemini-1.5-pro");

  const ProviderConfig builtin = resolve_provider("chatgpt", std::nullopt);
  EXPECT_EQ(builtin.model, "gpt-3.5-turbo");

  EXPECT_THROW(resolve_provider("claude", path), UsageError);
}

TEST(RequestDigestTest, IsStableHex) {
  const ProviderConfig config = valid_config();
  const std::string digest =
      request_digest(config, "system", "user", "oneshot", 12, "seq-1");
  EXPECT_EQ(digest.size(), 64u);
  EXPECT_TRUE(is_lower_hex(digest));
  EXPECT_EQ(digest,
            request_digest(config, "system", "user", "oneshot", 12, "seq-1"));
}

TEST(RequestDigestTest, EveryFieldFeedsTheDigest) {
  const ProviderConfig base = valid_config();
  const std::string baseline =
      request_digest(base, "system", "user", "oneshot", 12, "seq-1");

  ProviderConfig changed = base;
  changed.name = "other";
  EXPECT_NE(request_digest(changed, "system", "user", "oneshot", 12, "seq-1"),
            baseline);

  changed = base;
  changed.model = "other-model";
  EXPECT_NE(request_digest(changed, "system", "user", "oneshot", 12, "seq-1"),
            baseline);

  changed = base;
  changed.api_flavor = "gemini";
  EXPECT_NE(request_digest(changed, "system", "user", "oneshot", 12, "seq-1"),
            baseline);

  changed = base;
  changed.temperature = 0.5;
  EXPECT_NE(request_digest(changed, "system", "user", "oneshot", 12, "seq-1"),
            baseline);

  EXPECT_NE(request_digest(base, "SYSTEM", "user", "oneshot", 12, "seq-1"),
            baseline);
  EXPECT_NE(request_digest(base, "system", "USER", "oneshot", 12, "seq-1"),
            baseline);
  EXPECT_NE(request_digest(base, "system", "user", "turns", 12, "seq-1"),
            baseline);
  EXPECT_NE(request_digest(base, "system", "user", "oneshot", 11, "seq-1"),
            baseline);
  EXPECT_NE(request_digest(base, "system", "user", "oneshot", 12, "seq-2"),
            baseline);

  // Endpoint and retry policy are delivery details, not request content.
  changed = base;
  changed.endpoint = "http://127.0.0.1:9/other";
  changed.max_retries = 9;
  EXPECT_EQ(request_digest(changed, "system", "user", "oneshot", 12, "seq-1"),
            baseline);
}

TEST(ExchangeLogTest, RecordsAndReplays) {
  test::TempDir dir;
  const auto path = dir.file("log.jsonl");

  ExchangeLog recorder = ExchangeLog::open_record(path);
  EXPECT_EQ(recorder.size(), 0u);

  ExchangeRecord record;
  record.request_digest = std::string(64, 'a');
  record.response_text = "Listener: I hear you.";
  record.timestamp = "2025-01-15T09:30:00Z";
  record.provider = "chatgpt";
  record.model = "gpt-3.5-turbo";
  record.temperature = 1.0;
  record.mode = "oneshot";
  record.sequence = "exp-001";
  recorder.append(record);

  ExchangeRecord other = record;
  other.request_digest = std::string(64, 'b');
  other.response_text = "Listener: Tell me more.";
  recorder.append(other);
  EXPECT_EQ(recorder.size(), 2u);

  const ExchangeLog replay = ExchangeLog::open_replay(path);
  EXPECT_EQ(replay.size(), 2u);
  ASSERT_TRUE(replay.lookup(record.request_digest).has_value());
  EXPECT_EQ(*replay.lookup(record.request_digest), "Listener: I hear you.");
  EXPECT_EQ(*replay.lookup(other.request_digest), "Listener: Tell me more.");
  EXPECT_FALSE(replay.lookup(std::string(64, 'c')).has_value());
}

TEST(ExchangeLogTest, LaterRecordsWinOnReplay) {
  test::TempDir dir;
  const auto path = dir.file("log.jsonl");

  ExchangeLog recorder = ExchangeLog::open_record(path);
  ExchangeRecord record;
  record.request_digest = std::string(64, 'a');
  record.response_text = "first draft";
  recorder.append(record);
  record.response_text = "corrected";
  recorder.append(record);

  const ExchangeLog replay = ExchangeLog::open_replay(path);
  EXPECT_EQ(replay.size(), 1u);
  EXPECT_EQ(*replay.lookup(record.request_digest), "corrected");
}

TEST(ExchangeLogTest, OpenRecordExtendsExistingLog) {
  test::TempDir dir;
  const auto path = dir.file("log.jsonl");

  {
    ExchangeLog recorder = ExchangeLog::open_record(path);
    ExchangeRecord record;
    record.request_digest = std::string(64, 'a');
    record.response_text = "kept";
    recorder.append(record);
  }

  ExchangeLog reopened = ExchangeLog::open_record(path);
  EXPECT_EQ(reopened.size(), 1u);
  EXPECT_EQ(*reopened.lookup(std::string(64, 'a')), "kept");
}

TEST(ExchangeLogTest, ReportsMissingAndMalformedInput) {
  test::TempDir dir;
  EXPECT_THROW(ExchangeLog::open_replay(dir.file("absent.jsonl")),
               MissingFileError);

  const auto path = dir.file("log.jsonl");
  test::write_file(
      path,
      R"({"request_digest":"aa","response_text":"ok"})" "\n"
      "this is not json\n");
  try {
    ExchangeLog::open_replay(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& error) {
    EXPECT_NE(error.locator().find(":2"), std::string::npos);
  }

  test::write_file(path, R"({"response_text":"missing digest"})" "\n");
  EXPECT_THROW(ExchangeLog::open_replay(path), ParseError);
}

TEST(ExchangeLogTest, SkipsBlankLines) {
  test::TempDir dir;
  const auto path = dir.file("log.jsonl");
  test::write_file(
      path,
      "\n   \n"
      R"({"request_digest":"aa","response_text":"ok"})" "\n\n");
  const ExchangeLog replay = ExchangeLog::open_replay(path);
  EXPECT_EQ(replay.size(), 1u);
}

TEST_F(TransportTest, CompletesAgainstOpenAiShapedEndpoint) {
  LocalServer server;
  std::string seen_auth;
  json seen_body;
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request& request, httplib::Response& response) {
        seen_auth = request.get_header_value("Authorization");
        seen_body = json::parse(request.body);
        response.set_content(
            json{{"choices",
                  json::array({json{
                      {"message", json{{"role", "assistant"},
                                       {"content", "Listener: I hear you."}}}}})}}
                .dump(),
            "application/json");
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  const std::string completion =
      transport.complete(config, "Be gentle.", "Continue the chat.");

  EXPECT_EQ(completion, "Listener: I hear you.");
  EXPECT_EQ(seen_auth, "Bearer test-key");
  EXPECT_EQ(seen_body["model"], "test-model");
  ASSERT_EQ(seen_body["messages"].size(), 2u);
  EXPECT_EQ(seen_body["messages"][0]["role"], "system");
  EXPECT_EQ(seen_body["messages"][0]["content"], "Be gentle.");
  EXPECT_EQ(seen_body["messages"][1]["role"], "user");
  EXPECT_EQ(seen_body["messages"][1]["content"], "Continue the chat.");
  EXPECT_DOUBLE_EQ(seen_body["temperature"].get<double>(), 1.0);
}

TEST_F(TransportTest, CompletesAgainstGeminiShapedEndpoint) {
  LocalServer server;
  std::string seen_key;
  json seen_body;
  server.handlers().Post(
      "/v1beta/models/test-model:generateContent",
      [&](const httplib::Request& request, httplib::Response& response) {
        seen_key = request.get_header_value("x-goog-api-key");
        seen_body = json::parse(request.body);
        response.set_content(
            json{{"candidates",
                  json::array({json{
                      {"content",
                       json{{"parts", json::array({json{
                                          {"text", "Listener: Go on."}}})}}}}})}}
                .dump(),
            "application/json");
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1beta/models"), "gemini");
  const std::string completion =
      transport.complete(config, "Be gentle.", "Continue the chat.");

  EXPECT_EQ(completion, "Listener: Go on.");
  EXPECT_EQ(seen_key, "test-key");
  EXPECT_EQ(seen_body["system_instruction"]["parts"][0]["text"], "Be gentle.");
  ASSERT_EQ(seen_body["contents"].size(), 1u);
  EXPECT_EQ(seen_body["contents"][0]["role"], "user");
  EXPECT_EQ(seen_body["contents"][0]["parts"][0]["text"],
            "Continue the chat.");
}

TEST_F(TransportTest, RetriesRateLimitedRequests) {
  LocalServer server;
  std::atomic<int> hits{0};
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request&, httplib::Response& response) {
        if (hits.fetch_add(1) == 0) {
          response.status = 429;
          response.set_content("slow down", "text/plain");
          return;
        }
        response.set_content(
            json{{"choices",
                  json::array({json{{"message",
                                     json{{"content", "recovered"}}}}})}}
                .dump(),
            "application/json");
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  EXPECT_EQ(transport.complete(config, "s", "u"), "recovered");
  EXPECT_EQ(hits.load(), 2);
}

TEST_F(TransportTest, GivesUpAfterRetryBudget) {
  LocalServer server;
  std::atomic<int> hits{0};
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request&, httplib::Response& response) {
        hits.fetch_add(1);
        response.status = 503;
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  try {
    transport.complete(config, "s", "u");
    FAIL() << "expected ProviderError";
  } catch (const ProviderError& error) {
    EXPECT_EQ(error.status(), 503);
    EXPECT_EQ(error.attempts(), 2);
    EXPECT_EQ(error.exit_code(), ExitCode::kProvider);
  }
  EXPECT_EQ(hits.load(), 2);
}

TEST_F(TransportTest, ClientErrorsAreNotRetried) {
  LocalServer server;
  std::atomic<int> hits{0};
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request&, httplib::Response& response) {
        hits.fetch_add(1);
        response.status = 400;
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  try {
    transport.complete(config, "s", "u");
    FAIL() << "expected ProviderError";
  } catch (const ProviderError& error) {
    EXPECT_EQ(error.status(), 400);
    EXPECT_EQ(error.attempts(), 1);
  }
  EXPECT_EQ(hits.load(), 1);
}

TEST_F(TransportTest, MissingCredentialFailsBeforeAnyRequest) {
  unsetenv("ELAN_TEST_KEY");
  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider("http://127.0.0.1:9/v1/chat/completions");
  EXPECT_THROW(transport.complete(config, "s", "u"), ProviderError);

  setenv("ELAN_TEST_KEY", "", 1);
  EXPECT_THROW(transport.complete(config, "s", "u"), ProviderError);
}

TEST_F(TransportTest, UnparseableSuccessBodyIsAProviderError) {
  LocalServer server;
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request&, httplib::Response& response) {
        response.set_content("definitely not json", "text/plain");
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  EXPECT_THROW(transport.complete(config, "s", "u"), ProviderError);
}

TEST_F(TransportTest, EmptyChoicesIsAProviderError) {
  LocalServer server;
  server.handlers().Post(
      "/v1/chat/completions",
      [&](const httplib::Request&, httplib::Response& response) {
        response.set_content(json{{"choices", json::array()}}.dump(),
                             "application/json");
      });
  server.start();

  HttpCompletionTransport transport;
  const ProviderConfig config =
      local_provider(server.endpoint("/v1/chat/completions"));
  EXPECT_THROW(transport.complete(config, "s", "u"), ProviderError);
}

TEST(TimestampTest, LooksLikeIso8601Utc) {
  const std::string stamp = iso8601_utc_now();
  ASSERT_EQ(stamp.size(), 20u);
  EXPECT_EQ(stamp[4], '-');
  EXPECT_EQ(stamp[7], '-');
  EXPECT_EQ(stamp[10], 'T');
  EXPECT_EQ(stamp[13], ':');
  EXPECT_EQ(stamp[16], ':');
  EXPECT_EQ(stamp.back(), 'Z');
}

}  // namespace
}  // namespace elan
