#include "elan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "elan/errors.hpp"
#include "elan/sentiment.hpp"

namespace elan {

namespace {

std::string format_real(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

void append_role_rows(std::string& csv, const TrajectorySummary& summary) {
  for (std::size_t i = 0; i < summary.per_index_mean.size(); ++i) {
    csv += to_string(summary.role);
    csv += ',';
    csv += std::to_string(i);
    csv += ',';
    csv += format_real(summary.per_index_min[i]);
    csv += ',';
    csv += format_real(summary.per_index_max[i]);
    csv += ',';
    csv += format_real(summary.per_index_mean[i]);
    csv += ',';
    csv += std::to_string(summary.n_conversations_per_index[i]);
    csv += '\n';
  }
}

}  // namespace

std::string_view to_string(TrendLabel label) {
  switch (label) {
    case TrendLabel::kGrowing:
      return "growing";
    case TrendLabel::kSteady:
      return "steady";
    case TrendLabel::kDeclining:
      return "declining";
  }
  return "steady";
}

std::vector<ConversationEnergies> score_corpus(const CorpusSet& corpus,
                                               const Lexicon& lexicon) {
  std::vector<ConversationEnergies> results;
  results.reserve(corpus.conversations.size());

  for (const Conversation& conversation : corpus.conversations) {
    ConversationEnergies energies;
    energies.conversation_id = conversation.id;
    energies.speaker.role = Role::kSpeaker;
    energies.listener.role = Role::kListener;
    for (const Turn& turn : conversation.turns) {
      double energy = 0.0;
      try {
        energy = score_turn(turn, lexicon);
      } catch (const EmptyUtteranceError&) {
        throw EmptyUtteranceError("conversation " + conversation.id +
                                  ", position " +
                                  std::to_string(turn.position));
      }
      if (turn.role == Role::kSpeaker) {
        energies.speaker.values.push_back(energy);
      } else {
        energies.listener.values.push_back(energy);
      }
    }
    results.push_back(std::move(energies));
  }

  std::sort(results.begin(), results.end(),
            [](const ConversationEnergies& a, const ConversationEnergies& b) {
              return a.conversation_id < b.conversation_id;
            });
  return results;
}

TrajectorySummary aggregate(const std::vector<EnergySeries>& series_list,
                            double trend_threshold) {
  if (series_list.empty()) {
    throw EmptyInputError("aggregate requires at least one series");
  }
  const Role role = series_list.front().role;
  std::size_t max_len = 0;
  for (const EnergySeries& series : series_list) {
    if (series.role != role) {
      throw MixedRolesError("aggregate takes series of a single role");
    }
    max_len = std::max(max_len, series.values.size());
  }

  TrajectorySummary summary;
  summary.role = role;
  summary.per_index_min.reserve(max_len);
  summary.per_index_max.reserve(max_len);
  summary.per_index_mean.reserve(max_len);
  summary.n_conversations_per_index.reserve(max_len);

  std::vector<double> at_index;
  for (std::size_t i = 0; i < max_len; ++i) {
    at_index.clear();
    for (const EnergySeries& series : series_list) {
      if (i < series.values.size()) at_index.push_back(series.values[i]);
    }
    // Reducing in sorted order makes min/max/mean independent of the order
    // conversations arrived in, down to the last bit.
    std::sort(at_index.begin(), at_index.end());
    double sum = 0.0;
    for (double v : at_index) sum += v;
    summary.per_index_min.push_back(at_index.front());
    summary.per_index_max.push_back(at_index.back());
    summary.per_index_mean.push_back(sum /
                                     static_cast<double>(at_index.size()));
    summary.n_conversations_per_index.push_back(
        static_cast<int>(at_index.size()));
  }

  if (summary.per_index_mean.size() >= 2) {
    const auto [trend, slope] =
        classify_trend(summary.per_index_mean, trend_threshold);
    summary.trend = trend;
    summary.slope = slope;
  } else {
    summary.trend = TrendLabel::kSteady;
    summary.slope = 0.0;
  }
  return summary;
}

std::pair<TrendLabel, double> classify_trend(
    const std::vector<double>& mean_series, double threshold) {
  const std::size_t n = mean_series.size();
  if (n < 2) {
    throw TooShortError("trend needs at least 2 points, got " +
                        std::to_string(n));
  }

  // OLS slope of value against index 0..n-1.
  const double count = static_cast<double>(n);
  const double x_mean = (count - 1.0) / 2.0;
  double y_mean = 0.0;
  for (double y : mean_series) y_mean += y;
  y_mean /= count;

  double covariance = 0.0;
  double x_variance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    covariance += dx * (mean_series[i] - y_mean);
    x_variance += dx * dx;
  }
  const double slope = covariance / x_variance;

  TrendLabel label = TrendLabel::kSteady;
  if (slope > threshold) {
    label = TrendLabel::kGrowing;
  } else if (slope < -threshold) {
    label = TrendLabel::kDeclining;
  }
  return {label, slope};
}

HypothesisReport hypothesis_check(const TrajectorySummary& speaker_summary,
                                  const TrajectorySummary& listener_summary,
                                  const HypothesisThresholds& thresholds) {
  if (speaker_summary.per_index_mean.empty() ||
      listener_summary.per_index_mean.empty()) {
    throw EmptyInputError("hypothesis check requires both mean series");
  }

  const std::vector<double>& speaker = speaker_summary.per_index_mean;
  const std::vector<double>& listener = listener_summary.per_index_mean;

  HypothesisReport report;
  report.first_speaker_mean = speaker.front();
  report.starts_negative = speaker.front() < 0.0;
  report.equalization_gap = std::fabs(listener.front() - speaker.front());
  report.ends_positive =
      speaker.back() > speaker.front() && listener.back() > listener.front();
  report.convergence_gap = std::fabs(speaker.back() - listener.back());
  report.converged = report.convergence_gap < thresholds.convergence;
  return report;
}

std::vector<double> moving_average(const std::vector<double>& values,
                                   int window) {
  if (window < 1 || window % 2 == 0) {
    throw UsageError("moving average window must be odd and >= 1");
  }
  const int half = window / 2;
  const int n = static_cast<int>(values.size());
  std::vector<double> smoothed;
  smoothed.reserve(values.size());
  for (int i = 0; i < n; ++i) {
    const int begin = std::max(0, i - half);
    const int end = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = begin; j <= end; ++j) sum += values[j];
    smoothed.push_back(sum / static_cast<double>(end - begin + 1));
  }
  return smoothed;
}

std::string summary_csv(const TrajectorySummary& speaker_summary,
                        const TrajectorySummary& listener_summary) {
  std::string csv = "role,index,min,max,mean,n\n";
  append_role_rows(csv, speaker_summary);
  append_role_rows(csv, listener_summary);
  return csv;
}

}  // namespace elan
