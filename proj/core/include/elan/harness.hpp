#pragma once

#include <string>
#include <vector>

#include "elan/corpus.hpp"
#include "elan/prompt.hpp"
#include "elan/provider.hpp"

namespace elan {

enum class GenerationMode { kOneShot, kTurnByTurn };

std::string_view to_string(GenerationMode mode);

struct HarnessOptions {
  int target_turns = kMaxTurns;
  GenerationMode mode = GenerationMode::kOneShot;
  ExchangeLog* replay = nullptr;        // resolve responses from this log
  ExchangeLog* record = nullptr;        // append live exchanges here
  CompletionTransport* transport = nullptr;  // required when replay is null
};

// Continues a validated 5-turn expert conversation to target_turns, starting
// with a listener turn. The seed turns are preserved byte-identically; the
// result carries Extended(provider) kind and passes full validation before
// being returned. Throws ProviderError/ReplayMissError,
// MalformedCompletionError, StructureViolationError.
Conversation extend_conversation(const Conversation& seed,
                                 const ProviderConfig& provider,
                                 const PromptTemplate& prompt_template,
                                 const HarnessOptions& options = {});

// Generates `count` fresh conversations (ids control-001, control-002, ...)
// under the given template; no seed, speaker starts. Throws UsageError for
// count < 1, otherwise as extend_conversation.
CorpusSet generate_control(const ProviderConfig& provider,
                           const PromptTemplate& prompt_template, int count,
                           const HarnessOptions& options = {});

// Splits raw completion text into alternating turns. Accepts "Speaker:" /
// "Listener:" labels (case-insensitive; continuation lines are joined into
// the current turn, text before the first label is ignored) or, when no
// labels are present, treats each non-empty line as one turn starting from
// expected_first_role. Positions are left at 0 for the caller to assign.
// Throws MalformedCompletionError with a diagnostic excerpt.
std::vector<Turn> parse_completion(const std::string& raw,
                                   Role expected_first_role);

// Renders turns as "Speaker: ...\n" / "Listener: ...\n" lines, the textual
// conversation form used inside prompts and expected back from providers.
std::string format_conversation(const std::vector<Turn>& turns);

}  // namespace elan
