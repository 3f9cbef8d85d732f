// Regenerates the bundled replay log from the fixture corpora: for each
// provider, one recorded exchange whose completion reproduces the extended
// fixture from the expert seed, plus one for the control fixture. Run as
//   make_replay_log <data dir> <output log>
// The output is deterministic (fixed timestamp) so the log can be committed.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "elan/corpus.hpp"
#include "elan/errors.hpp"
#include "elan/harness.hpp"
#include "elan/prompt.hpp"
#include "elan/provider.hpp"

namespace {

constexpr const char* kFixedTimestamp = "2025-01-15T09:30:00Z";

elan::Conversation single_conversation(const std::filesystem::path& path) {
  const elan::CorpusSet corpus = elan::load_corpus(path);
  if (corpus.conversations.size() != 1) {
    throw elan::ParseError(path.string(), "expected exactly one conversation");
  }
  return corpus.conversations.front();
}

// The completion a provider would have returned: the labeled turns that are
// not part of the prefix.
std::string completion_for(const elan::Conversation& conversation,
                           std::size_t prefix_turns) {
  const std::vector<elan::Turn> continuation(
      conversation.turns.begin() +
          static_cast<std::ptrdiff_t>(prefix_turns),
      conversation.turns.end());
  return elan::format_conversation(continuation);
}

void append_exchange(elan::ExchangeLog& log,
                     const elan::ProviderConfig& provider,
                     const elan::PromptTemplate& prompt_template,
                     const std::string& conversation_so_far, int target_turns,
                     const std::string& sequence,
                     const std::string& response_text) {
  const std::string user_prompt =
      prompt_template.render(conversation_so_far, target_turns);
  elan::ExchangeRecord record;
  record.request_digest =
      elan::request_digest(provider, prompt_template.system_instruction,
                           user_prompt, "oneshot", target_turns, sequence);
  record.response_text = response_text;
  record.timestamp = kFixedTimestamp;
  record.provider = provider.name;
  record.model = provider.model;
  record.temperature = provider.temperature;
  record.mode = "oneshot";
  record.sequence = sequence;
  log.append(record);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: make_replay_log <data dir> <output log>\n";
    return 2;
  }
  const std::filesystem::path data_dir = argv[1];
  const std::filesystem::path out_path = argv[2];

  try {
    const elan::Conversation seed =
        single_conversation(data_dir / "fixtures" / "expert.jsonl");
    const elan::PromptTemplate empathetic = elan::PromptTemplate::load(
        data_dir / "templates" / "empathetic_listener.txt");
    const elan::PromptTemplate casual = elan::PromptTemplate::load(
        data_dir / "templates" / "casual_control.txt");

    std::filesystem::remove(out_path);
    elan::ExchangeLog log = elan::ExchangeLog::open_record(out_path);

    for (const std::string& provider_name : {"chatgpt", "gemini"}) {
      const elan::ProviderConfig provider =
          elan::builtin_provider(provider_name);

      const elan::Conversation extended = single_conversation(
          data_dir / "fixtures" / ("extended_" + provider_name + ".jsonl"));
      append_exchange(log, provider, empathetic,
                      elan::format_conversation(seed.turns), elan::kMaxTurns,
                      seed.id,
                      completion_for(extended, seed.turns.size()));

      const elan::Conversation control = single_conversation(
          data_dir / "fixtures" / ("control_" + provider_name + ".jsonl"));
      append_exchange(log, provider, casual, "", elan::kMaxTurns,
                      "control-001", completion_for(control, 0));
    }

    std::cout << "wrote " << log.size() << " exchange(s) to "
              << out_path.string() << "\n";
  } catch (const elan::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return static_cast<int>(error.exit_code());
  }
  return 0;
}
