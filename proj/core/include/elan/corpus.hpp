#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elan {

enum class Role { kSpeaker, kListener };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);  // throws ParseError

struct DatasetKind {
  enum class Tag { kExpert, kExtended, kControl };

  Tag tag = Tag::kExpert;
  std::string provider;  // non-empty for extended and control kinds

  static DatasetKind expert() { return {Tag::kExpert, ""}; }
  static DatasetKind extended(std::string provider_name) {
    return {Tag::kExtended, std::move(provider_name)};
  }
  static DatasetKind control(std::string provider_name) {
    return {Tag::kControl, std::move(provider_name)};
  }

  bool operator==(const DatasetKind&) const = default;
};

std::string_view to_string(DatasetKind::Tag tag);
DatasetKind::Tag kind_tag_from_string(std::string_view name);  // ParseError

struct Turn {
  int position = 0;  // 1-based index within the conversation
  Role role = Role::kSpeaker;
  std::string text;

  bool operator==(const Turn&) const = default;
};

struct Conversation {
  std::string id;
  DatasetKind kind;
  std::vector<Turn> turns;

  bool operator==(const Conversation&) const = default;
};

struct CorpusSet {
  DatasetKind kind;
  std::vector<Conversation> conversations;

  bool operator==(const CorpusSet&) const = default;
};

inline constexpr int kMaxTurns = 12;
inline constexpr int kExpertTurnCount = 5;

// Checks the structural rules for a single conversation: non-empty id,
// 1-based contiguous positions, strict speaker/listener alternation starting
// with the speaker, non-empty utterances, provider naming consistent with the
// kind, and the per-kind turn-count rules (expert exactly 5, extended and
// control at most 12). Throws StructureViolationError.
void validate_conversation(const Conversation& conversation);

// Returns the first min(len, max_turns) turns; prefix-preserving, idempotent.
Conversation truncate(Conversation conversation, int max_turns = kMaxTurns);

// Partitions turns into (speaker, listener) lists preserving order.
std::pair<std::vector<Turn>, std::vector<Turn>> split_by_role(
    const Conversation& conversation);

// Reads a line-delimited corpus file: one JSON record per line with fields
// id, kind, provider, turns (array of {role, text}). Records longer than
// kMaxTurns for extended/control kinds are truncated with a warning pushed to
// `warnings` (if given). Throws MissingFileError, ParseError,
// StructureViolationError.
CorpusSet load_corpus(const std::filesystem::path& path,
                      std::vector<std::string>* warnings = nullptr);

// Serializes a CorpusSet in the exact format load_corpus reads.
std::string corpus_to_jsonl(const CorpusSet& corpus);
void write_corpus(const CorpusSet& corpus, const std::filesystem::path& path);

// Parses corpus content already in memory; locator_prefix names the source in
// error messages (typically the file path).
CorpusSet corpus_from_jsonl(std::string_view content,
                            std::string_view locator_prefix,
                            std::vector<std::string>* warnings = nullptr);

std::string conversation_to_json_line(const Conversation& conversation);

}  // namespace elan
