#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elan/corpus.hpp"
#include "elan/lexicon.hpp"

namespace elan {

// Per-text sentiment output. Proportions cover the negative, neutral, and
// positive valence masses; compound is the normalized overall energy.
struct SentimentScores {
  double negative = 0.0;
  double neutral = 0.0;
  double positive = 0.0;
  double compound = 0.0;
};

struct TokenStream {
  std::vector<std::string> tokens;  // surface forms, case preserved
};

inline constexpr double kNormalizationAlpha = 15.0;

// Splits on whitespace and strips leading/trailing ASCII punctuation from
// each word, keeping the original form when the stripped word would be 2 or
// fewer characters (preserves emoticons like ":)" and short tokens).
TokenStream tokenize(std::string_view text);

// Maps an unbounded valence sum into (-1, 1) via S / sqrt(S^2 + alpha),
// clamped to [-1, 1]. Strictly monotone and odd; normalize(0) = 0.
double normalize_valence_sum(double sum, double alpha = kNormalizationAlpha);

// Full lexicon-and-heuristics scoring pass: per-token lookup, all-caps
// emphasis, degree-modifier scaling with distance decay, negation lookback,
// special-case idioms, "least" damping, contrastive-conjunction reweighting,
// and punctuation emphasis. Empty input yields all-zero scores; text with no
// lexicon hits yields {0, 1, 0, 0}.
SentimentScores polarity_scores(std::string_view text, const Lexicon& lexicon);

// Energy of one conversation turn: polarity_scores(...).compound.
// Throws EmptyUtteranceError when the text is empty after trimming.
double score_turn(const Turn& turn, const Lexicon& lexicon);

// True when more than half of the non-space bytes are outside ASCII; used to
// warn rather than silently mis-score text the lexicon cannot cover.
bool mostly_non_ascii(std::string_view text);

}  // namespace elan
