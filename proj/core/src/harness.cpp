#include "elan/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "elan/errors.hpp"

namespace elan {

namespace {

std::string trim_spaces(const std::string& text) {
  const std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Detects a leading "Speaker:"/"Listener:" label, case-insensitively.
std::optional<Role> parse_label(const std::string& line,
                                std::string* rest_out) {
  static constexpr std::string_view kSpeaker = "speaker:";
  static constexpr std::string_view kListener = "listener:";
  std::string lowered;
  lowered.reserve(line.size());
  for (char c : line) {
    lowered.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::optional<Role> role;
  std::size_t label_len = 0;
  if (lowered.rfind(kSpeaker, 0) == 0) {
    role = Role::kSpeaker;
    label_len = kSpeaker.size();
  } else if (lowered.rfind(kListener, 0) == 0) {
    role = Role::kListener;
    label_len = kListener.size();
  }
  if (role && rest_out != nullptr) {
    *rest_out = trim_spaces(line.substr(label_len));
  }
  return role;
}

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const std::size_t eol = raw.find('\n', pos);
    if (eol == std::string::npos) {
      lines.push_back(raw.substr(pos));
      break;
    }
    lines.push_back(raw.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

std::string excerpt(const std::string& raw) {
  const std::string trimmed = trim_spaces(raw);
  if (trimmed.size() <= 80) return trimmed;
  return trimmed.substr(0, 77) + "...";
}

Role opposite(Role role) {
  return role == Role::kSpeaker ? Role::kListener : Role::kSpeaker;
}

// Resolves one provider exchange: replay log first, then the live transport,
// recording live responses when a record log is attached.
std::string resolve_exchange(const ProviderConfig& provider,
                             const PromptTemplate& prompt_template,
                             const std::string& conversation_so_far,
                             const HarnessOptions& options,
                             const std::string& sequence) {
  const std::string user_prompt =
      prompt_template.render(conversation_so_far, options.target_turns);
  const std::string digest = request_digest(
      provider, prompt_template.system_instruction, user_prompt,
      std::string(to_string(options.mode)), options.target_turns, sequence);

  if (options.replay != nullptr) {
    if (auto response = options.replay->lookup(digest)) {
      return *response;
    }
    if (options.transport == nullptr) {
      throw ReplayMissError(digest);
    }
  }
  if (options.transport == nullptr) {
    throw ProviderError(
        "no transport configured: pass a replay log or a live transport");
  }

  const std::string response = options.transport->complete(
      provider, prompt_template.system_instruction, user_prompt);
  if (options.record != nullptr) {
    ExchangeRecord record;
    record.request_digest = digest;
    record.response_text = response;
    record.timestamp = iso8601_utc_now();
    record.provider = provider.name;
    record.model = provider.model;
    record.temperature = provider.temperature;
    record.mode = std::string(to_string(options.mode));
    record.sequence = sequence;
    options.record->append(record);
  }
  return response;
}

// Grows `turns` with parsed completion turns until target count, preserving
// alternation; stops early if the model produced extra turns beyond target.
void append_parsed_turns(std::vector<Turn>& turns,
                         const std::vector<Turn>& parsed, int target_turns) {
  for (const Turn& parsed_turn : parsed) {
    if (static_cast<int>(turns.size()) >= target_turns) break;
    Turn turn = parsed_turn;
    turn.position = static_cast<int>(turns.size()) + 1;
    turns.push_back(std::move(turn));
  }
}

Conversation finish_conversation(std::string id, DatasetKind kind,
                                 std::vector<Turn> turns, int target_turns) {
  Conversation conversation;
  conversation.id = std::move(id);
  conversation.kind = std::move(kind);
  conversation.turns = std::move(turns);
  conversation = truncate(std::move(conversation), target_turns);
  validate_conversation(conversation);
  return conversation;
}

std::vector<Turn> generate_turns(const ProviderConfig& provider,
                                 const PromptTemplate& prompt_template,
                                 const HarnessOptions& options,
                                 const std::string& sequence,
                                 std::vector<Turn> turns) {
  if (options.mode == GenerationMode::kOneShot) {
    const std::string response =
        resolve_exchange(provider, prompt_template,
                         format_conversation(turns), options, sequence);
    const Role next_role = turns.empty()
                               ? Role::kSpeaker
                               : opposite(turns.back().role);
    append_parsed_turns(turns, parse_completion(response, next_role),
                        options.target_turns);
    return turns;
  }

  // Turn-by-turn: one exchange per missing turn; each response is a single
  // utterance (an optional role label is tolerated and stripped).
  int round = 0;
  while (static_cast<int>(turns.size()) < options.target_turns) {
    const Role next_role = turns.empty()
                               ? Role::kSpeaker
                               : opposite(turns.back().role);
    const std::string turn_sequence =
        sequence + "#" + std::to_string(++round);
    const std::string response =
        resolve_exchange(provider, prompt_template,
                         format_conversation(turns), options, turn_sequence);

    std::string text = trim_spaces(response);
    std::string rest;
    if (auto labeled = parse_label(text, &rest)) {
      if (*labeled != next_role) {
        throw MalformedCompletionError("expected a " +
                                       std::string(to_string(next_role)) +
                                       " turn, got: " + excerpt(response));
      }
      text = rest;
    }
    // Collapse a multi-line utterance into one line.
    std::string flat;
    for (const std::string& line : split_lines(text)) {
      const std::string piece = trim_spaces(line);
      if (piece.empty()) continue;
      if (!flat.empty()) flat += ' ';
      flat += piece;
    }
    if (flat.empty()) {
      throw MalformedCompletionError("empty turn in: " + excerpt(response));
    }
    Turn turn;
    turn.position = static_cast<int>(turns.size()) + 1;
    turn.role = next_role;
    turn.text = std::move(flat);
    turns.push_back(std::move(turn));
  }
  return turns;
}

}  // namespace

std::string_view to_string(GenerationMode mode) {
  return mode == GenerationMode::kOneShot ? "oneshot" : "turns";
}

std::string format_conversation(const std::vector<Turn>& turns) {
  std::string out;
  for (const Turn& turn : turns) {
    out += (turn.role == Role::kSpeaker) ? "Speaker: " : "Listener: ";
    out += turn.text;
    out += '\n';
  }
  return out;
}

std::vector<Turn> parse_completion(const std::string& raw,
                                   Role expected_first_role) {
  if (trim_spaces(raw).empty()) {
    throw MalformedCompletionError("completion is empty");
  }

  const std::vector<std::string> lines = split_lines(raw);
  const bool has_labels = std::any_of(
      lines.begin(), lines.end(), [](const std::string& line) {
        return parse_label(trim_spaces(line), nullptr).has_value();
      });

  std::vector<Turn> turns;
  if (has_labels) {
    bool in_turn = false;
    for (const std::string& line : lines) {
      const std::string stripped = trim_spaces(line);
      if (stripped.empty()) continue;
      std::string rest;
      if (auto role = parse_label(stripped, &rest)) {
        if (!turns.empty() && turns.back().role == *role) {
          throw MalformedCompletionError(
              "two consecutive " + std::string(to_string(*role)) +
              " turns at: " + excerpt(stripped));
        }
        Turn turn;
        turn.role = *role;
        turn.text = rest;
        turns.push_back(std::move(turn));
        in_turn = true;
      } else if (in_turn) {
        // Continuation line of the current turn.
        if (!turns.back().text.empty()) turns.back().text += ' ';
        turns.back().text += stripped;
      }
      // Unlabeled text before the first label (preamble prose) is dropped.
    }
  } else {
    Role role = expected_first_role;
    for (const std::string& line : lines) {
      const std::string stripped = trim_spaces(line);
      if (stripped.empty()) continue;
      Turn turn;
      turn.role = role;
      turn.text = stripped;
      turns.push_back(std::move(turn));
      role = opposite(role);
    }
  }

  if (turns.empty()) {
    throw MalformedCompletionError("no turns found in: " + excerpt(raw));
  }
  if (turns.front().role != expected_first_role) {
    throw MalformedCompletionError(
        "continuation must start with a " +
        std::string(to_string(expected_first_role)) + " turn, got " +
        std::string(to_string(turns.front().role)));
  }
  for (const Turn& turn : turns) {
    if (turn.text.empty()) {
      throw MalformedCompletionError("turn with empty text in: " +
                                     excerpt(raw));
    }
  }
  return turns;
}

Conversation extend_conversation(const Conversation& seed,
                                 const ProviderConfig& provider,
                                 const PromptTemplate& prompt_template,
                                 const HarnessOptions& options) {
  validate_conversation(seed);
  if (seed.kind.tag != DatasetKind::Tag::kExpert) {
    throw StructureViolationError(seed.id, "kind",
                                  "extension seeds must be expert kind");
  }
  if (options.target_turns <= kExpertTurnCount ||
      options.target_turns > kMaxTurns) {
    throw UsageError("target turns must be in (" +
                     std::to_string(kExpertTurnCount) + ", " +
                     std::to_string(kMaxTurns) + "]");
  }

  std::vector<Turn> turns =
      generate_turns(provider, prompt_template, options, seed.id, seed.turns);
  if (static_cast<int>(turns.size()) < options.target_turns) {
    throw MalformedCompletionError(
        "continuation stopped at " + std::to_string(turns.size()) +
        " turns, wanted " + std::to_string(options.target_turns));
  }

  Conversation extended =
      finish_conversation(seed.id, DatasetKind::extended(provider.name),
                          std::move(turns), options.target_turns);
  // The seed must survive byte-identically.
  for (int i = 0; i < kExpertTurnCount; ++i) {
    if (extended.turns[i].text != seed.turns[i].text ||
        extended.turns[i].role != seed.turns[i].role) {
      throw StructureViolationError(seed.id, "seed-preservation",
                                    "turn " + std::to_string(i + 1) +
                                        " was altered during extension");
    }
  }
  return extended;
}

CorpusSet generate_control(const ProviderConfig& provider,
                           const PromptTemplate& prompt_template, int count,
                           const HarnessOptions& options) {
  if (count < 1) {
    throw UsageError("control generation needs count >= 1");
  }
  if (options.target_turns < 1 || options.target_turns > kMaxTurns) {
    throw UsageError("target turns must be in [1, " +
                     std::to_string(kMaxTurns) + "]");
  }

  CorpusSet corpus;
  corpus.kind = DatasetKind::control(provider.name);
  for (int i = 1; i <= count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "control-%03d", i);
    std::vector<Turn> turns =
        generate_turns(provider, prompt_template, options, id, {});
    if (static_cast<int>(turns.size()) < options.target_turns) {
      throw MalformedCompletionError(
          "generation for " + std::string(id) + " stopped at " +
          std::to_string(turns.size()) + " turns, wanted " +
          std::to_string(options.target_turns));
    }
    corpus.conversations.push_back(finish_conversation(
        id, corpus.kind, std::move(turns), options.target_turns));
  }
  return corpus;
}

}  // namespace elan
