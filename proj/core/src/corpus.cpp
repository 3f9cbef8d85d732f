#include "elan/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "elan/errors.hpp"

namespace elan {

namespace {

using nlohmann::json;

bool text_is_blank(const std::string& text) {
  return text.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

Conversation conversation_from_json(const json& record,
                                    const std::string& locator) {
  if (!record.is_object()) {
    throw ParseError(locator, "record is not an object");
  }
  for (const char* field : {"id", "kind", "provider", "turns"}) {
    if (!record.contains(field)) {
      throw ParseError(locator, std::string("missing field: ") + field);
    }
  }
  if (!record["id"].is_string() || !record["kind"].is_string() ||
      !record["provider"].is_string() || !record["turns"].is_array()) {
    throw ParseError(locator, "wrong field type");
  }

  Conversation conversation;
  conversation.id = record["id"].get<std::string>();
  conversation.kind.tag =
      kind_tag_from_string(record["kind"].get<std::string>());
  conversation.kind.provider = record["provider"].get<std::string>();

  int position = 0;
  for (const json& turn_json : record["turns"]) {
    if (!turn_json.is_object() || !turn_json.contains("role") ||
        !turn_json.contains("text") || !turn_json["role"].is_string() ||
        !turn_json["text"].is_string()) {
      throw ParseError(locator, "turn must be {\"role\", \"text\"}");
    }
    Turn turn;
    turn.position = ++position;
    turn.role = role_from_string(turn_json["role"].get<std::string>());
    turn.text = turn_json["text"].get<std::string>();
    conversation.turns.push_back(std::move(turn));
  }
  return conversation;
}

json conversation_to_json(const Conversation& conversation) {
  json turns = json::array();
  for (const Turn& turn : conversation.turns) {
    turns.push_back(json{{"role", std::string(to_string(turn.role))},
                         {"text", turn.text}});
  }
  return json{{"id", conversation.id},
              {"kind", std::string(to_string(conversation.kind.tag))},
              {"provider", conversation.kind.provider},
              {"turns", std::move(turns)}};
}

}  // namespace

std::string_view to_string(Role role) {
  return role == Role::kSpeaker ? "speaker" : "listener";
}

Role role_from_string(std::string_view name) {
  if (name == "speaker") return Role::kSpeaker;
  if (name == "listener") return Role::kListener;
  throw ParseError("role", "unknown role: \"" + std::string(name) + "\"");
}

std::string_view to_string(DatasetKind::Tag tag) {
  switch (tag) {
    case DatasetKind::Tag::kExpert:
      return "expert";
    case DatasetKind::Tag::kExtended:
      return "extended";
    case DatasetKind::Tag::kControl:
      return "control";
  }
  return "expert";
}

DatasetKind::Tag kind_tag_from_string(std::string_view name) {
  if (name == "expert") return DatasetKind::Tag::kExpert;
  if (name == "extended") return DatasetKind::Tag::kExtended;
  if (name == "control") return DatasetKind::Tag::kControl;
  throw ParseError("kind", "unknown dataset kind: \"" + std::string(name) +
                               "\"");
}

void validate_conversation(const Conversation& conversation) {
  const std::string& id = conversation.id;
  if (id.empty()) {
    throw StructureViolationError("<unnamed>", "id", "conversation id empty");
  }
  if (conversation.kind.tag == DatasetKind::Tag::kExpert) {
    if (!conversation.kind.provider.empty()) {
      throw StructureViolationError(id, "provider",
                                    "expert conversations have no provider");
    }
  } else if (conversation.kind.provider.empty()) {
    throw StructureViolationError(id, "provider",
                                  "provider name required for this kind");
  }

  int expected_position = 0;
  for (const Turn& turn : conversation.turns) {
    ++expected_position;
    if (turn.position != expected_position) {
      throw StructureViolationError(
          id, "position",
          "turn " + std::to_string(expected_position) + " carries position " +
              std::to_string(turn.position));
    }
    const Role expected_role =
        (expected_position % 2 == 1) ? Role::kSpeaker : Role::kListener;
    if (turn.role != expected_role) {
      throw StructureViolationError(
          id, "alternation",
          "turn " + std::to_string(turn.position) + " should be " +
              std::string(to_string(expected_role)));
    }
    if (text_is_blank(turn.text)) {
      throw StructureViolationError(
          id, "empty-text",
          "turn " + std::to_string(turn.position) + " has no content");
    }
  }

  const int count = static_cast<int>(conversation.turns.size());
  if (conversation.kind.tag == DatasetKind::Tag::kExpert) {
    if (count != kExpertTurnCount) {
      throw StructureViolationError(
          id, "turn-count",
          "expert conversations have exactly " +
              std::to_string(kExpertTurnCount) + " turns, got " +
              std::to_string(count));
    }
  } else {
    if (count < 1) {
      throw StructureViolationError(id, "turn-count", "no turns");
    }
    if (count > kMaxTurns) {
      throw StructureViolationError(
          id, "turn-count",
          "more than " + std::to_string(kMaxTurns) +
              " turns; truncate before validating");
    }
  }
}

Conversation truncate(Conversation conversation, int max_turns) {
  if (max_turns < 0) max_turns = 0;
  if (static_cast<int>(conversation.turns.size()) > max_turns) {
    conversation.turns.resize(static_cast<std::size_t>(max_turns));
  }
  return conversation;
}

std::pair<std::vector<Turn>, std::vector<Turn>> split_by_role(
    const Conversation& conversation) {
  std::vector<Turn> speaker_turns;
  std::vector<Turn> listener_turns;
  for (const Turn& turn : conversation.turns) {
    if (turn.role == Role::kSpeaker) {
      speaker_turns.push_back(turn);
    } else {
      listener_turns.push_back(turn);
    }
  }
  return {std::move(speaker_turns), std::move(listener_turns)};
}

CorpusSet corpus_from_jsonl(std::string_view content,
                            std::string_view locator_prefix,
                            std::vector<std::string>* warnings) {
  CorpusSet corpus;
  std::unordered_set<std::string> seen_ids;
  bool kind_set = false;

  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t eol = content.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? content.substr(pos)
                                : content.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? content.size() + 1 : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string locator =
        std::string(locator_prefix) + ":" + std::to_string(line_number);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(locator, e.what());
    }

    Conversation conversation = conversation_from_json(record, locator);
    if (conversation.kind.tag != DatasetKind::Tag::kExpert &&
        static_cast<int>(conversation.turns.size()) > kMaxTurns) {
      if (warnings != nullptr) {
        warnings->push_back(
            "conversation " + conversation.id + ": truncated from " +
            std::to_string(conversation.turns.size()) + " to " +
            std::to_string(kMaxTurns) + " turns");
      }
      conversation = truncate(std::move(conversation), kMaxTurns);
    }
    validate_conversation(conversation);

    if (!seen_ids.insert(conversation.id).second) {
      throw StructureViolationError(conversation.id, "unique-id",
                                    "duplicate conversation id");
    }
    if (!kind_set) {
      corpus.kind = conversation.kind;
      kind_set = true;
    } else if (!(conversation.kind == corpus.kind)) {
      throw StructureViolationError(
          conversation.id, "kind-consistency",
          "all conversations in a corpus share one kind and provider");
    }
    corpus.conversations.push_back(std::move(conversation));
  }
  return corpus;
}

CorpusSet load_corpus(const std::filesystem::path& path,
                      std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return corpus_from_jsonl(buffer.str(), path.string(), warnings);
}

std::string conversation_to_json_line(const Conversation& conversation) {
  return conversation_to_json(conversation).dump();
}

std::string corpus_to_jsonl(const CorpusSet& corpus) {
  std::string out;
  for (const Conversation& conversation : corpus.conversations) {
    out += conversation_to_json_line(conversation);
    out += '\n';
  }
  return out;
}

void write_corpus(const CorpusSet& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw MissingFileError(path.string());
  }
  out << corpus_to_jsonl(corpus);
  out.flush();
  if (!out) {
    throw MissingFileError(path.string());
  }
}

}  // namespace elan
