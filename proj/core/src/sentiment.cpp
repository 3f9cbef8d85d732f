#include "elan/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "elan/errors.hpp"

// The scoring pass reproduces the published VADER heuristics step for step,
// including their quirks, because score compatibility with that tool is the
// correctness criterion for this module. Deviating even slightly (e.g.
// "fixing" the first-match behavior of the conjunction reweighting) changes
// scores on real sentences.

namespace elan {

namespace {

constexpr double kBoosterIncrement = 0.293;
constexpr double kBoosterDecrement = -0.293;
constexpr double kCapsIncrement = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kNeverSoBoost = 1.25;
constexpr double kExclamationStep = 0.292;
constexpr int kExclamationCap = 4;
constexpr double kQuestionStep = 0.18;
constexpr double kQuestionSaturation = 0.96;
constexpr double kBeforeConjunctionWeight = 0.5;
constexpr double kAfterConjunctionWeight = 1.5;

const std::unordered_set<std::string>& negation_words() {
  static const std::unordered_set<std::string> kWords = {
      "aint",     "arent",    "cannot",  "cant",     "couldnt", "darent",
      "didnt",    "doesnt",   "ain't",   "aren't",   "can't",   "couldn't",
      "daren't",  "didn't",   "doesn't", "dont",     "hadnt",   "hasnt",
      "havent",   "isnt",     "mightnt", "mustnt",   "neither", "don't",
      "hadn't",   "hasn't",   "haven't", "isn't",    "mightn't", "mustn't",
      "neednt",   "needn't",  "never",   "none",     "nope",    "nor",
      "not",      "nothing",  "nowhere", "oughtnt",  "shant",   "shouldnt",
      "uhuh",     "wasnt",    "werent",  "oughtn't", "shan't",  "shouldn't",
      "uh-uh",    "wasn't",   "weren't", "without",  "wont",    "wouldnt",
      "won't",    "wouldn't", "rarely",  "seldom",   "despite"};
  return kWords;
}

const std::unordered_map<std::string, double>& booster_dict() {
  static const std::unordered_map<std::string, double> kBoosters = {
      {"absolutely", kBoosterIncrement},
      {"amazingly", kBoosterIncrement},
      {"awfully", kBoosterIncrement},
      {"completely", kBoosterIncrement},
      {"considerable", kBoosterIncrement},
      {"considerably", kBoosterIncrement},
      {"decidedly", kBoosterIncrement},
      {"deeply", kBoosterIncrement},
      {"effing", kBoosterIncrement},
      {"enormous", kBoosterIncrement},
      {"enormously", kBoosterIncrement},
      {"entirely", kBoosterIncrement},
      {"especially", kBoosterIncrement},
      {"exceptional", kBoosterIncrement},
      {"exceptionally", kBoosterIncrement},
      {"extreme", kBoosterIncrement},
      {"extremely", kBoosterIncrement},
      {"fabulously", kBoosterIncrement},
      {"flipping", kBoosterIncrement},
      {"flippin", kBoosterIncrement},
      {"frackin", kBoosterIncrement},
      {"fracking", kBoosterIncrement},
      {"fricking", kBoosterIncrement},
      {"frickin", kBoosterIncrement},
      {"frigging", kBoosterIncrement},
      {"friggin", kBoosterIncrement},
      {"fully", kBoosterIncrement},
      {"fuckin", kBoosterIncrement},
      {"fucking", kBoosterIncrement},
      {"fuggin", kBoosterIncrement},
      {"fugging", kBoosterIncrement},
      {"greatly", kBoosterIncrement},
      {"hella", kBoosterIncrement},
      {"highly", kBoosterIncrement},
      {"hugely", kBoosterIncrement},
      {"incredible", kBoosterIncrement},
      {"incredibly", kBoosterIncrement},
      {"intensely", kBoosterIncrement},
      {"major", kBoosterIncrement},
      {"majorly", kBoosterIncrement},
      {"more", kBoosterIncrement},
      {"most", kBoosterIncrement},
      {"particularly", kBoosterIncrement},
      {"purely", kBoosterIncrement},
      {"quite", kBoosterIncrement},
      {"really", kBoosterIncrement},
      {"remarkably", kBoosterIncrement},
      {"so", kBoosterIncrement},
      {"substantially", kBoosterIncrement},
      {"thoroughly", kBoosterIncrement},
      {"total", kBoosterIncrement},
      {"totally", kBoosterIncrement},
      {"tremendous", kBoosterIncrement},
      {"tremendously", kBoosterIncrement},
      {"uber", kBoosterIncrement},
      {"unbelievably", kBoosterIncrement},
      {"unusually", kBoosterIncrement},
      {"utter", kBoosterIncrement},
      {"utterly", kBoosterIncrement},
      {"very", kBoosterIncrement},
      {"almost", kBoosterDecrement},
      {"barely", kBoosterDecrement},
      {"hardly", kBoosterDecrement},
      {"just enough", kBoosterDecrement},
      {"kind of", kBoosterDecrement},
      {"kinda", kBoosterDecrement},
      {"kindof", kBoosterDecrement},
      {"kind-of", kBoosterDecrement},
      {"less", kBoosterDecrement},
      {"little", kBoosterDecrement},
      {"marginal", kBoosterDecrement},
      {"marginally", kBoosterDecrement},
      {"occasional", kBoosterDecrement},
      {"occasionally", kBoosterDecrement},
      {"partly", kBoosterDecrement},
      {"scarce", kBoosterDecrement},
      {"scarcely", kBoosterDecrement},
      {"slight", kBoosterDecrement},
      {"slightly", kBoosterDecrement},
      {"somewhat", kBoosterDecrement},
      {"sort of", kBoosterDecrement},
      {"sorta", kBoosterDecrement},
      {"sortof", kBoosterDecrement},
      {"sort-of", kBoosterDecrement}};
  return kBoosters;
}

const std::unordered_map<std::string, double>& special_case_idioms() {
  static const std::unordered_map<std::string, double> kIdioms = {
      {"the shit", 3.0},       {"the bomb", 3.0},    {"bad ass", 1.5},
      {"badass", 1.5},         {"bus stop", 0.0},    {"yeah right", -2.0},
      {"kiss of death", -1.5}, {"to die for", 3.0},  {"beating heart", 3.5}};
  return kIdioms;
}

constexpr std::string_view kStripPunctuation =
    "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

std::string ascii_lower(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (is_ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Mirrors str.isupper() for the ASCII range: at least one cased character and
// no lowercase ones. (The corpus this engine targets is English text.)
bool word_is_upper(std::string_view word) {
  bool has_cased = false;
  for (char c : word) {
    if (is_ascii_lower(c)) return false;
    if (is_ascii_upper(c)) has_cased = true;
  }
  return has_cased;
}

std::size_t count_codepoints(std::string_view bytes) {
  std::size_t n = 0;
  for (unsigned char c : bytes) {
    if ((c & 0xc0) != 0x80) ++n;  // count non-continuation bytes
  }
  return n;
}

std::string strip_edge_punctuation(std::string_view word) {
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end &&
         kStripPunctuation.find(word[begin]) != std::string_view::npos) {
    ++begin;
  }
  while (end > begin &&
         kStripPunctuation.find(word[end - 1]) != std::string_view::npos) {
    --end;
  }
  return std::string(word.substr(begin, end - begin));
}

bool is_negation_token(const std::string& lower_word) {
  if (negation_words().count(lower_word) > 0) return true;
  return lower_word.find("n't") != std::string::npos;
}

// True when some, but not all, words are fully capitalized; only then do
// all-caps words carry extra emphasis.
bool has_mixed_caps(const std::vector<std::string>& words) {
  std::size_t upper = 0;
  for (const std::string& w : words) {
    if (word_is_upper(w)) ++upper;
  }
  const std::size_t lower_or_mixed = words.size() - upper;
  return lower_or_mixed > 0 && lower_or_mixed < words.size();
}

// Degree-modifier contribution of the word at distance `dist+1` before a
// valenced token. Sign follows the token's valence; an all-caps modifier in
// mixed-caps text is emphasized further.
double booster_scalar(const std::string& word, const std::string& lower_word,
                      double valence, bool mixed_caps) {
  auto it = booster_dict().find(lower_word);
  if (it == booster_dict().end()) return 0.0;
  double scalar = it->second;
  if (valence < 0) scalar = -scalar;
  if (word_is_upper(word) && mixed_caps) {
    scalar += (valence > 0) ? kCapsIncrement : -kCapsIncrement;
  }
  return scalar;
}

// Negation lookback at distance `dist+1` from token i, with the reference
// behavior preserved verbatim: "never so/this" intensifies instead of
// negating, "without doubt" cancels the negation, and at distance 3 a bare
// "so"/"this" immediately before the token also intensifies (that clause
// binds independently of "never").
double apply_negation(double valence, const std::vector<std::string>& lower,
                      std::size_t i, int dist) {
  if (dist == 0) {
    if (is_negation_token(lower[i - 1])) {
      valence *= kNegationScalar;
    }
  } else if (dist == 1) {
    if (lower[i - 2] == "never" &&
        (lower[i - 1] == "so" || lower[i - 1] == "this")) {
      valence *= kNeverSoBoost;
    } else if (lower[i - 2] == "without" && lower[i - 1] == "doubt") {
      // no change
    } else if (is_negation_token(lower[i - 2])) {
      valence *= kNegationScalar;
    }
  } else if (dist == 2) {
    if ((lower[i - 3] == "never" &&
         (lower[i - 2] == "so" || lower[i - 2] == "this")) ||
        (lower[i - 1] == "so" || lower[i - 1] == "this")) {
      valence *= kNeverSoBoost;
    } else if (lower[i - 3] == "without" &&
               (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")) {
      // no change
    } else if (is_negation_token(lower[i - 3])) {
      valence *= kNegationScalar;
    }
  }
  return valence;
}

// Multi-word idiom handling around token i (only reached when three words
// precede it). Sequence checks run in the reference's order with first-match
// priority, then forward windows may overwrite, then trailing n-grams add
// degree-modifier weight.
double apply_special_idioms(double valence,
                            const std::vector<std::string>& lower,
                            std::size_t i) {
  const auto& idioms = special_case_idioms();
  const std::string one_zero = lower[i - 1] + " " + lower[i];
  const std::string two_one_zero =
      lower[i - 2] + " " + lower[i - 1] + " " + lower[i];
  const std::string two_one = lower[i - 2] + " " + lower[i - 1];
  const std::string three_two_one =
      lower[i - 3] + " " + lower[i - 2] + " " + lower[i - 1];
  const std::string three_two = lower[i - 3] + " " + lower[i - 2];

  for (const std::string* seq :
       {&one_zero, &two_one_zero, &two_one, &three_two_one, &three_two}) {
    auto it = idioms.find(*seq);
    if (it != idioms.end()) {
      valence = it->second;
      break;
    }
  }

  const std::size_t n = lower.size();
  if (n - 1 > i) {
    const std::string zero_one = lower[i] + " " + lower[i + 1];
    auto it = idioms.find(zero_one);
    if (it != idioms.end()) valence = it->second;
  }
  if (n - 1 > i + 1) {
    const std::string zero_one_two =
        lower[i] + " " + lower[i + 1] + " " + lower[i + 2];
    auto it = idioms.find(zero_one_two);
    if (it != idioms.end()) valence = it->second;
  }

  for (const std::string* gram : {&three_two_one, &three_two, &two_one}) {
    auto it = booster_dict().find(*gram);
    if (it != booster_dict().end()) valence += it->second;
  }
  return valence;
}

// "least" before a non-lexicon word dampens it, except in "at least" /
// "very least".
double apply_least_check(double valence, const std::vector<std::string>& lower,
                         std::size_t i, const Lexicon& lexicon) {
  if (i > 1 && !lexicon.contains(lower[i - 1]) && lower[i - 1] == "least") {
    if (lower[i - 2] != "at" && lower[i - 2] != "very") {
      valence *= kNegationScalar;
    }
  } else if (i > 0 && !lexicon.contains(lower[i - 1]) &&
             lower[i - 1] == "least") {
    valence *= kNegationScalar;
  }
  return valence;
}

double token_valence(const std::vector<std::string>& words,
                     const std::vector<std::string>& lower, std::size_t i,
                     bool mixed_caps, const Lexicon& lexicon) {
  const auto hit = lexicon.valence(lower[i]);
  if (!hit) return 0.0;
  double valence = *hit;

  // "no" as a modifier: a "no" directly before a lexicon word contributes
  // nothing itself, and one up to three words back flips the sign.
  if (lower[i] == "no" && i + 1 < words.size() &&
      lexicon.contains(lower[i + 1])) {
    valence = 0.0;
  }
  if ((i >= 1 && lower[i - 1] == "no") || (i >= 2 && lower[i - 2] == "no") ||
      (i >= 3 && lower[i - 3] == "no" &&
       (lower[i - 1] == "or" || lower[i - 1] == "nor"))) {
    valence = *hit * kNegationScalar;
  }

  if (word_is_upper(words[i]) && mixed_caps) {
    valence += (valence > 0) ? kCapsIncrement : -kCapsIncrement;
  }

  for (int dist = 0; dist < 3; ++dist) {
    const std::size_t back = static_cast<std::size_t>(dist) + 1;
    if (i > static_cast<std::size_t>(dist) &&
        !lexicon.contains(lower[i - back])) {
      double scalar =
          booster_scalar(words[i - back], lower[i - back], valence, mixed_caps);
      if (scalar != 0.0) {
        if (dist == 1) scalar *= 0.95;
        if (dist == 2) scalar *= 0.9;
      }
      valence += scalar;
      valence = apply_negation(valence, lower, i, dist);
      if (dist == 2) {
        valence = apply_special_idioms(valence, lower, i);
      }
    }
  }

  return apply_least_check(valence, lower, i, lexicon);
}

// Shifts weight across the first "but": valences before it are damped,
// valences after it amplified. The reference rescales through a first-match
// value lookup rather than by position, so a repeated valence value rescales
// its first occurrence again instead of the current position; reproduced
// as-is for score compatibility.
void apply_but_reweighting(const std::vector<std::string>& lower,
                           std::vector<double>& sentiments) {
  const auto but_it = std::find(lower.begin(), lower.end(), "but");
  if (but_it == lower.end()) return;
  const std::size_t but_index =
      static_cast<std::size_t>(but_it - lower.begin());

  for (std::size_t pos = 0; pos < sentiments.size(); ++pos) {
    const double value = sentiments[pos];
    const std::size_t si = static_cast<std::size_t>(
        std::find(sentiments.begin(), sentiments.end(), value) -
        sentiments.begin());
    if (si < but_index) {
      sentiments[si] = value * kBeforeConjunctionWeight;
    } else if (si > but_index) {
      sentiments[si] = value * kAfterConjunctionWeight;
    }
  }
}

double punctuation_emphasis(std::string_view text) {
  int exclamations = 0;
  int questions = 0;
  for (char c : text) {
    if (c == '!') ++exclamations;
    if (c == '?') ++questions;
  }
  if (exclamations > kExclamationCap) exclamations = kExclamationCap;
  double amplifier = exclamations * kExclamationStep;
  if (questions > 1) {
    amplifier +=
        (questions <= 3) ? questions * kQuestionStep : kQuestionSaturation;
  }
  return amplifier;
}

SentimentScores assemble_scores(const std::vector<double>& sentiments,
                                std::string_view text) {
  SentimentScores scores;
  if (sentiments.empty()) return scores;

  double total_valence =
      std::accumulate(sentiments.begin(), sentiments.end(), 0.0);
  const double punct = punctuation_emphasis(text);
  if (total_valence > 0) {
    total_valence += punct;
  } else if (total_valence < 0) {
    total_valence -= punct;
  }
  scores.compound = normalize_valence_sum(total_valence);

  // Proportion masses: each non-neutral token contributes its valence plus
  // one unit of mass; neutral tokens contribute one unit each.
  double positive_mass = 0.0;
  double negative_mass = 0.0;
  int neutral_count = 0;
  for (double v : sentiments) {
    if (v > 0) positive_mass += v + 1.0;
    if (v < 0) negative_mass += v - 1.0;
    if (v == 0) ++neutral_count;
  }

  if (positive_mass > std::fabs(negative_mass)) {
    positive_mass += punct;
  } else if (positive_mass < std::fabs(negative_mass)) {
    negative_mass -= punct;
  }

  const double total =
      positive_mass + std::fabs(negative_mass) + neutral_count;
  scores.positive = std::fabs(positive_mass / total);
  scores.negative = std::fabs(negative_mass / total);
  scores.neutral = std::fabs(neutral_count / total);
  return scores;
}

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream stream;
  std::size_t pos = 0;
  const auto is_space = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_space(text[end])) ++end;
    if (end > pos) {
      const std::string_view word = text.substr(pos, end - pos);
      std::string stripped = strip_edge_punctuation(word);
      if (count_codepoints(stripped) <= 2) {
        // Too little left over; keep the original form (emoticons, "ok").
        stream.tokens.emplace_back(word);
      } else {
        stream.tokens.push_back(std::move(stripped));
      }
    }
    pos = end;
  }
  return stream;
}

double normalize_valence_sum(double sum, double alpha) {
  const double normalized = sum / std::sqrt(sum * sum + alpha);
  if (normalized < -1.0) return -1.0;
  if (normalized > 1.0) return 1.0;
  return normalized;
}

SentimentScores polarity_scores(std::string_view text,
                                const Lexicon& lexicon) {
  const std::vector<std::string> words = tokenize(text).tokens;
  const bool mixed_caps = has_mixed_caps(words);

  std::vector<std::string> lower;
  lower.reserve(words.size());
  for (const std::string& w : words) lower.push_back(ascii_lower(w));

  std::vector<double> sentiments;
  sentiments.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (booster_dict().count(lower[i]) > 0) {
      sentiments.push_back(0.0);
      continue;
    }
    if (i + 1 < words.size() && lower[i] == "kind" && lower[i + 1] == "of") {
      sentiments.push_back(0.0);
      continue;
    }
    sentiments.push_back(token_valence(words, lower, i, mixed_caps, lexicon));
  }

  apply_but_reweighting(lower, sentiments);
  return assemble_scores(sentiments, text);
}

double score_turn(const Turn& turn, const Lexicon& lexicon) {
  const bool only_space =
      turn.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
  if (only_space) {
    throw EmptyUtteranceError("position " + std::to_string(turn.position));
  }
  return polarity_scores(turn.text, lexicon).compound;
}

bool mostly_non_ascii(std::string_view text) {
  std::size_t non_ascii = 0;
  std::size_t considered = 0;
  for (unsigned char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if ((c & 0xc0) == 0x80) continue;  // UTF-8 continuation bytes
    ++considered;
    if (c > 0x7f) ++non_ascii;
  }
  return considered > 0 && non_ascii * 2 > considered;
}

}  // namespace elan
