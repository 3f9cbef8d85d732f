// Equivalence against the frozen reference scores in
// tests/data/oracle_scores.jsonl (produced by tests/data/generate_oracle.py
// with the reference implementation; see that script for regeneration).

#include <gtest/gtest.h>

#include <json.hpp>

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "elan/corpus.hpp"
#include "elan/sentiment.hpp"
#include "test_support.hpp"

namespace elan {
namespace {

constexpr double kCompoundTolerance = 1e-4;
constexpr double kProportionTolerance = 1e-3;

struct OracleRow {
  std::string text;
  double negative = 0.0;
  double neutral = 0.0;
  double positive = 0.0;
  double compound = 0.0;
};

const std::vector<OracleRow>& oracle_rows() {
  static const std::vector<OracleRow> kRows = [] {
    std::vector<OracleRow> rows;
    std::istringstream stream(
        test::read_file(test::test_data_dir() / "oracle_scores.jsonl"));
    std::string line;
    while (std::getline(stream, line)) {
      if (line.empty()) continue;
      const nlohmann::json parsed = nlohmann::json::parse(line);
      rows.push_back({parsed.at("text").get<std::string>(),
                      parsed.at("negative").get<double>(),
                      parsed.at("neutral").get<double>(),
                      parsed.at("positive").get<double>(),
                      parsed.at("compound").get<double>()});
    }
    return rows;
  }();
  return kRows;
}

TEST(OracleTest, CorpusIsLargeEnough) {
  EXPECT_GE(oracle_rows().size(), 200u);
}

TEST(OracleTest, CoversEveryFixtureUtterance) {
  std::set<std::string> oracle_texts;
  for (const OracleRow& row : oracle_rows()) oracle_texts.insert(row.text);

  for (const char* name :
       {"expert.jsonl", "extended_chatgpt.jsonl", "extended_gemini.jsonl",
        "control_chatgpt.jsonl", "control_gemini.jsonl"}) {
    const CorpusSet corpus = load_corpus(test::fixture_dir() / name);
    for (const Conversation& conversation : corpus.conversations) {
      for (const Turn& turn : conversation.turns) {
        EXPECT_TRUE(oracle_texts.count(turn.text))
            << name << " turn " << turn.position
            << " missing from oracle: " << turn.text;
      }
    }
  }
}

TEST(OracleTest, EveryRowMatchesWithinTolerance) {
  const Lexicon& lexicon = test::shared_lexicon();
  for (const OracleRow& row : oracle_rows()) {
    const SentimentScores scores = polarity_scores(row.text, lexicon);
    EXPECT_NEAR(scores.compound, row.compound, kCompoundTolerance)
        << row.text;
    EXPECT_NEAR(scores.negative, row.negative, kProportionTolerance)
        << row.text;
    EXPECT_NEAR(scores.neutral, row.neutral, kProportionTolerance)
        << row.text;
    EXPECT_NEAR(scores.positive, row.positive, kProportionTolerance)
        << row.text;
  }
}

}  // namespace
}  // namespace elan
