#include "elan/trajectory.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "elan/errors.hpp"
#include "test_support.hpp"

namespace elan {
namespace {

EnergySeries listener_series(std::vector<double> values) {
  EnergySeries series;
  series.role = Role::kListener;
  series.values = std::move(values);
  return series;
}

TEST(ClassifyTrendTest, MatchesHandComputedSlopes) {
  const auto [rising_label, rising_slope] =
      classify_trend({-0.4, -0.1, 0.2, 0.5});
  EXPECT_EQ(rising_label, TrendLabel::kGrowing);
  EXPECT_NEAR(rising_slope, 0.3, 1e-12);

  const auto [falling_label, falling_slope] =
      classify_trend({0.5, 0.2, -0.1});
  EXPECT_EQ(falling_label, TrendLabel::kDeclining);
  EXPECT_NEAR(falling_slope, -0.3, 1e-12);

  const auto [flat_label, flat_slope] = classify_trend({0.1, 0.1, 0.1});
  EXPECT_EQ(flat_label, TrendLabel::kSteady);
  EXPECT_NEAR(flat_slope, 0.0, 1e-12);
}

TEST(ClassifyTrendTest, ThresholdIsStrict) {
  // Slope exactly at the threshold stays steady on both sides.
  EXPECT_EQ(classify_trend({0.0, 0.02}, 0.02).first, TrendLabel::kSteady);
  EXPECT_EQ(classify_trend({0.0, -0.02}, 0.02).first, TrendLabel::kSteady);
  EXPECT_EQ(classify_trend({0.0, 0.021}, 0.02).first, TrendLabel::kGrowing);
  EXPECT_EQ(classify_trend({0.0, -0.021}, 0.02).first,
            TrendLabel::kDeclining);
}

TEST(ClassifyTrendTest, TooShortSeriesThrows) {
  EXPECT_THROW(classify_trend({0.5}), TooShortError);
  EXPECT_THROW(classify_trend({}), TooShortError);
}

TEST(ClassifyTrendTest, SignSymmetry) {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> energy(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> values(6);
    std::vector<double> negated(6);
    for (int j = 0; j < 6; ++j) {
      values[j] = energy(rng);
      negated[j] = -values[j];
    }
    EXPECT_DOUBLE_EQ(classify_trend(values).second,
                     -classify_trend(negated).second);
  }
}

TEST(AggregateTest, ComputesPerIndexExtentsAndCoverage) {
  const TrajectorySummary summary = aggregate(
      {listener_series({0.1, 0.2, 0.3}), listener_series({0.3, 0.4})});
  EXPECT_EQ(summary.role, Role::kListener);
  EXPECT_EQ(summary.per_index_min, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(summary.per_index_max, (std::vector<double>{0.3, 0.4, 0.3}));
  ASSERT_EQ(summary.per_index_mean.size(), 3u);
  EXPECT_NEAR(summary.per_index_mean[0], 0.2, 1e-12);
  EXPECT_NEAR(summary.per_index_mean[1], 0.3, 1e-12);
  EXPECT_NEAR(summary.per_index_mean[2], 0.3, 1e-12);
  EXPECT_EQ(summary.n_conversations_per_index, (std::vector<int>{2, 2, 1}));
}

TEST(AggregateTest, MinNeverExceedsMeanNorMax) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> energy(-1.0, 1.0);
  std::uniform_int_distribution<int> length(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EnergySeries> series_list;
    for (int c = 0; c < 4; ++c) {
      std::vector<double> values(length(rng));
      for (double& v : values) v = energy(rng);
      series_list.push_back(listener_series(std::move(values)));
    }
    const TrajectorySummary summary = aggregate(series_list);
    for (std::size_t i = 0; i < summary.per_index_mean.size(); ++i) {
      EXPECT_LE(summary.per_index_min[i], summary.per_index_mean[i]);
      EXPECT_LE(summary.per_index_mean[i], summary.per_index_max[i]);
    }
  }
}

TEST(AggregateTest, OutputIsPermutationInvariantBitForBit) {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> energy(-1.0, 1.0);
  std::vector<EnergySeries> series_list;
  for (int c = 0; c < 5; ++c) {
    std::vector<double> values(6);
    for (double& v : values) v = energy(rng);
    series_list.push_back(listener_series(std::move(values)));
  }
  const TrajectorySummary baseline = aggregate(series_list);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(series_list.begin(), series_list.end(), rng);
    const TrajectorySummary shuffled = aggregate(series_list);
    EXPECT_EQ(shuffled.per_index_min, baseline.per_index_min);
    EXPECT_EQ(shuffled.per_index_max, baseline.per_index_max);
    EXPECT_EQ(shuffled.per_index_mean, baseline.per_index_mean);
    EXPECT_EQ(shuffled.n_conversations_per_index,
              baseline.n_conversations_per_index);
  }
}

TEST(AggregateTest, SingleIndexSeriesIsSteady) {
  const TrajectorySummary summary = aggregate({listener_series({0.4})});
  EXPECT_EQ(summary.trend, TrendLabel::kSteady);
  EXPECT_DOUBLE_EQ(summary.slope, 0.0);
}

TEST(AggregateTest, RejectsEmptyAndMixedInput) {
  EXPECT_THROW(aggregate({}), EmptyInputError);

  EnergySeries speaker;
  speaker.role = Role::kSpeaker;
  speaker.values = {0.1};
  EXPECT_THROW(aggregate({speaker, listener_series({0.2})}),
               MixedRolesError);
}

TEST(ScoreCorpusTest, ReproducesExpertFixtureEnergies) {
  const CorpusSet corpus = load_corpus(test::fixture_dir() / "expert.jsonl");
  const std::vector<ConversationEnergies> energies =
      score_corpus(corpus, test::shared_lexicon());
  ASSERT_EQ(energies.size(), 1u);
  EXPECT_EQ(energies[0].conversation_id, "exp-001");

  ASSERT_EQ(energies[0].speaker.values.size(), 3u);
  EXPECT_NEAR(energies[0].speaker.values[0], -0.7056, 1e-4);
  EXPECT_NEAR(energies[0].speaker.values[1], 0.5859, 1e-4);
  EXPECT_NEAR(energies[0].speaker.values[2], 0.2732, 1e-4);

  ASSERT_EQ(energies[0].listener.values.size(), 2u);
  EXPECT_NEAR(energies[0].listener.values[0], -0.7783, 1e-4);
  EXPECT_NEAR(energies[0].listener.values[1], 0.4767, 1e-4);
}

TEST(ScoreCorpusTest, ExpertSpeakerSeriesGrows) {
  const CorpusSet corpus = load_corpus(test::fixture_dir() / "expert.jsonl");
  const std::vector<ConversationEnergies> energies =
      score_corpus(corpus, test::shared_lexicon());
  const TrajectorySummary summary = aggregate({energies[0].speaker});
  EXPECT_EQ(summary.trend, TrendLabel::kGrowing);
  EXPECT_NEAR(summary.slope, 0.4894, 1e-3);
  // The conversation ends above where it started.
  EXPECT_GE(summary.per_index_mean.back(), summary.per_index_mean.front());
}

TEST(ScoreCorpusTest, ResultsAreIdSorted) {
  CorpusSet corpus;
  corpus.kind = DatasetKind::control("chatgpt");
  for (const char* id : {"c-2", "c-1", "c-3"}) {
    Conversation conversation;
    conversation.id = id;
    conversation.kind = corpus.kind;
    conversation.turns = {{1, Role::kSpeaker, "fine"}};
    corpus.conversations.push_back(std::move(conversation));
  }
  const std::vector<ConversationEnergies> energies =
      score_corpus(corpus, test::shared_lexicon());
  ASSERT_EQ(energies.size(), 3u);
  EXPECT_EQ(energies[0].conversation_id, "c-1");
  EXPECT_EQ(energies[1].conversation_id, "c-2");
  EXPECT_EQ(energies[2].conversation_id, "c-3");
}

TEST(ScoreCorpusTest, TagsEmptyUtterancesWithLocation) {
  CorpusSet corpus;
  corpus.kind = DatasetKind::control("chatgpt");
  Conversation conversation;
  conversation.id = "c-err";
  conversation.kind = corpus.kind;
  conversation.turns = {{1, Role::kSpeaker, "ok"},
                        {2, Role::kListener, "\t "}};
  corpus.conversations.push_back(std::move(conversation));
  try {
    score_corpus(corpus, test::shared_lexicon());
    FAIL() << "expected EmptyUtteranceError";
  } catch (const EmptyUtteranceError& error) {
    const std::string message = error.what();
    EXPECT_NE(message.find("c-err"), std::string::npos);
    EXPECT_NE(message.find("2"), std::string::npos);
  }
}

TEST(HypothesisCheckTest, AllThreePartsHold) {
  TrajectorySummary speaker;
  speaker.role = Role::kSpeaker;
  speaker.per_index_mean = {-0.3, 0.2, 0.5};
  TrajectorySummary listener;
  listener.role = Role::kListener;
  listener.per_index_mean = {-0.1, 0.45};

  const HypothesisReport report = hypothesis_check(speaker, listener);
  EXPECT_TRUE(report.starts_negative);
  EXPECT_DOUBLE_EQ(report.first_speaker_mean, -0.3);
  EXPECT_TRUE(report.ends_positive);
  EXPECT_TRUE(report.converged);
  EXPECT_NEAR(report.convergence_gap, 0.05, 1e-12);
  EXPECT_NEAR(report.equalization_gap, 0.2, 1e-12);
}

TEST(HypothesisCheckTest, EachViolationFlipsExactlyItsFlag) {
  TrajectorySummary speaker;
  speaker.role = Role::kSpeaker;
  TrajectorySummary listener;
  listener.role = Role::kListener;

  // Speaker starts at ease rather than in distress.
  speaker.per_index_mean = {0.1, 0.3, 0.5};
  listener.per_index_mean = {-0.1, 0.45};
  HypothesisReport report = hypothesis_check(speaker, listener);
  EXPECT_FALSE(report.starts_negative);
  EXPECT_TRUE(report.ends_positive);
  EXPECT_TRUE(report.converged);

  // Speaker sinks instead of recovering.
  speaker.per_index_mean = {-0.3, -0.35, -0.4};
  listener.per_index_mean = {-0.5, -0.45};
  report = hypothesis_check(speaker, listener);
  EXPECT_TRUE(report.starts_negative);
  EXPECT_FALSE(report.ends_positive);
  EXPECT_TRUE(report.converged);

  // Roles end far apart.
  speaker.per_index_mean = {-0.3, 0.2, 0.6};
  listener.per_index_mean = {-0.1, 0.2};
  report = hypothesis_check(speaker, listener);
  EXPECT_TRUE(report.starts_negative);
  EXPECT_TRUE(report.ends_positive);
  EXPECT_FALSE(report.converged);
}

TEST(HypothesisCheckTest, ConvergenceThresholdIsStrict) {
  TrajectorySummary speaker;
  speaker.role = Role::kSpeaker;
  speaker.per_index_mean = {-0.5, 0.5};
  TrajectorySummary listener;
  listener.role = Role::kListener;
  listener.per_index_mean = {-0.25, 0.25};

  // Gap is exactly 0.25; a gap equal to the threshold does not converge.
  EXPECT_FALSE(hypothesis_check(speaker, listener, {0.25}).converged);
  EXPECT_TRUE(hypothesis_check(speaker, listener, {0.2500001}).converged);
}

TEST(HypothesisCheckTest, EmptySummaryThrows) {
  TrajectorySummary speaker;
  speaker.role = Role::kSpeaker;
  TrajectorySummary listener;
  listener.role = Role::kListener;
  listener.per_index_mean = {0.1};
  EXPECT_THROW(hypothesis_check(speaker, listener), EmptyInputError);
}

TEST(MovingAverageTest, CentersWindowAndTruncatesEdges) {
  const std::vector<double> smoothed =
      moving_average({1.0, 2.0, 3.0, 4.0, 5.0}, 3);
  ASSERT_EQ(smoothed.size(), 5u);
  EXPECT_DOUBLE_EQ(smoothed[0], 1.5);
  EXPECT_DOUBLE_EQ(smoothed[1], 2.0);
  EXPECT_DOUBLE_EQ(smoothed[2], 3.0);
  EXPECT_DOUBLE_EQ(smoothed[3], 4.0);
  EXPECT_DOUBLE_EQ(smoothed[4], 4.5);
}

TEST(MovingAverageTest, WindowOneIsIdentity) {
  const std::vector<double> values = {0.3, -0.2, 0.9};
  EXPECT_EQ(moving_average(values, 1), values);
}

TEST(MovingAverageTest, EvenWindowRejected) {
  EXPECT_THROW(moving_average({1.0, 2.0}, 2), UsageError);
  EXPECT_THROW(moving_average({1.0, 2.0}, 0), UsageError);
}

TEST(SummaryCsvTest, EmitsDeterministicRows) {
  TrajectorySummary speaker;
  speaker.role = Role::kSpeaker;
  speaker.per_index_min = {0.25};
  speaker.per_index_max = {0.75};
  speaker.per_index_mean = {0.5};
  speaker.n_conversations_per_index = {2};

  TrajectorySummary listener;
  listener.role = Role::kListener;
  listener.per_index_min = {-1.0, 0.0};
  listener.per_index_max = {-0.5, 0.125};
  listener.per_index_mean = {-0.75, 0.0625};
  listener.n_conversations_per_index = {2, 1};

  EXPECT_EQ(summary_csv(speaker, listener),
            "role,index,min,max,mean,n\n"
            "speaker,0,0.250000,0.750000,0.500000,2\n"
            "listener,0,-1.000000,-0.500000,-0.750000,2\n"
            "listener,1,0.000000,0.125000,0.062500,1\n");
}

}  // namespace
}  // namespace elan
