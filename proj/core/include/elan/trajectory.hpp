#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elan/corpus.hpp"
#include "elan/lexicon.hpp"

namespace elan {

// Energies of one role's turns within one conversation, indexed by per-role
// turn index starting at 0.
struct EnergySeries {
  Role role = Role::kSpeaker;
  std::vector<double> values;
};

enum class TrendLabel { kGrowing, kSteady, kDeclining };

std::string_view to_string(TrendLabel label);

struct TrajectorySummary {
  Role role = Role::kSpeaker;
  std::vector<double> per_index_min;
  std::vector<double> per_index_max;
  std::vector<double> per_index_mean;
  std::vector<int> n_conversations_per_index;
  TrendLabel trend = TrendLabel::kSteady;
  double slope = 0.0;  // energy units per turn index
};

struct ConversationEnergies {
  std::string conversation_id;
  EnergySeries speaker;
  EnergySeries listener;
};

inline constexpr double kDefaultTrendThreshold = 0.02;
inline constexpr double kDefaultConvergenceThreshold = 0.1;

struct HypothesisThresholds {
  double convergence = kDefaultConvergenceThreshold;
};

struct HypothesisReport {
  bool starts_negative = false;
  double first_speaker_mean = 0.0;
  double equalization_gap = 0.0;  // |listener mean[0] - speaker mean[0]|
  bool ends_positive = false;
  double convergence_gap = 0.0;  // |final speaker mean - final listener mean|
  bool converged = false;
};

// Scores every turn of every conversation, returning one speaker series and
// one listener series per conversation in id-sorted order. Propagates
// EmptyUtteranceError tagged with conversation id and turn position.
std::vector<ConversationEnergies> score_corpus(const CorpusSet& corpus,
                                               const Lexicon& lexicon);

// Index-wise min/max/mean across series of one role; ragged tails aggregate
// over whichever series reach each index, with coverage counts reported.
// Values at each index are reduced in sorted order, so the output is
// bit-identical under any permutation of the input. A mean series shorter
// than 2 entries is classified (Steady, 0.0). Throws MixedRolesError and
// EmptyInputError.
TrajectorySummary aggregate(const std::vector<EnergySeries>& series_list,
                            double trend_threshold = kDefaultTrendThreshold);

// Ordinary least-squares slope of value vs. index. Growing if slope >
// threshold, Declining if slope < -threshold, else Steady. Throws
// TooShortError for series with fewer than 2 points.
std::pair<TrendLabel, double> classify_trend(
    const std::vector<double>& mean_series,
    double threshold = kDefaultTrendThreshold);

// Evaluates the three-part shape of an empathetic conversation: the speaker
// starts below zero, both roles end above where they started, and the roles'
// final means agree within the convergence threshold. Throws EmptyInputError
// when either summary has no mean values.
HypothesisReport hypothesis_check(const TrajectorySummary& speaker_summary,
                                  const TrajectorySummary& listener_summary,
                                  const HypothesisThresholds& thresholds = {});

// Centered moving average for plotting; window must be odd and >= 1. Edges
// average over the in-range portion of the window.
std::vector<double> moving_average(const std::vector<double>& values,
                                   int window = 3);

// CSV rows `role,index,min,max,mean,n` (header included), speaker rows first,
// then listener, each ordered by index. Values printed with six decimals.
std::string summary_csv(const TrajectorySummary& speaker_summary,
                        const TrajectorySummary& listener_summary);

}  // namespace elan
