#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace elan {

struct LexiconEntry {
  std::string token;
  double valence = 0.0;
};

// Immutable word-to-valence table backing the sentiment engine. Safe to share
// across threads once constructed.
class Lexicon {
 public:
  // Parses a tab-separated file: token<TAB>mean_valence[<TAB>ignored...].
  // Duplicate tokens keep the last occurrence. Entries whose token contains
  // whitespace, ASCII uppercase, or non-ASCII bytes are skipped: the engine
  // only ever looks up lowercased single tokens, so such entries could never
  // match (the bundled reference lexicon contains a handful of them).
  static Lexicon load(const std::filesystem::path& path);

  static Lexicon from_entries(const std::vector<LexiconEntry>& entries);

  bool contains(const std::string& lowercase_token) const {
    return valences_.find(lowercase_token) != valences_.end();
  }

  std::optional<double> valence(const std::string& lowercase_token) const {
    auto it = valences_.find(lowercase_token);
    if (it == valences_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return valences_.size(); }
  bool empty() const { return valences_.empty(); }

 private:
  std::unordered_map<std::string, double> valences_;
};

}  // namespace elan
