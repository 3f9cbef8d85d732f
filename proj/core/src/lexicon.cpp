#include "elan/lexicon.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "elan/errors.hpp"

namespace elan {

namespace {

bool token_is_loadable(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isspace(c)) return false;
    if (c >= 'A' && c <= 'Z') return false;
    if (c > 0x7f) return false;
  }
  return !token.empty();
}

// Whitespace trim matching the loose framing of the lexicon file (it uses
// CRLF line endings).
std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

}  // namespace

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }

  Lexicon lexicon;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    const std::size_t first_tab = stripped.find('\t');
    if (first_tab == std::string::npos) {
      throw MalformedLineError(path.string(), line_number,
                               "expected token<TAB>valence");
    }
    std::string token = stripped.substr(0, first_tab);
    std::size_t second_tab = stripped.find('\t', first_tab + 1);
    if (second_tab == std::string::npos) second_tab = stripped.size();
    const std::string valence_text =
        stripped.substr(first_tab + 1, second_tab - first_tab - 1);

    char* parse_end = nullptr;
    const double valence = std::strtod(valence_text.c_str(), &parse_end);
    if (parse_end == valence_text.c_str() || *parse_end != '\0' ||
        !std::isfinite(valence)) {
      throw MalformedLineError(path.string(), line_number,
                               "non-numeric valence: \"" + valence_text +
                                   "\"");
    }

    // Entries the scorer could never match (multi-word tokens, tokens with
    // uppercase or non-ASCII characters) are dropped: lookups always use
    // lowercased single tokens.
    if (!token_is_loadable(token)) continue;

    lexicon.valences_[std::move(token)] = valence;
  }
  return lexicon;
}

Lexicon Lexicon::from_entries(const std::vector<LexiconEntry>& entries) {
  Lexicon lexicon;
  for (const LexiconEntry& entry : entries) {
    if (token_is_loadable(entry.token)) {
      lexicon.valences_[entry.token] = entry.valence;
    }
  }
  return lexicon;
}

}  // namespace elan
