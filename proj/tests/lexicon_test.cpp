#include "elan/lexicon.hpp"

#include <gtest/gtest.h>

#include "elan/errors.hpp"
#include "test_support.hpp"

namespace elan {
namespace {

TEST(LexiconTest, LoadsBundledLexicon) {
  const Lexicon& lexicon = test::shared_lexicon();
  // The bundled table has 7520 data lines: 18 carry tokens the engine can
  // never look up (embedded whitespace, uppercase, or non-ASCII bytes) and
  // 14 are duplicates, which keep their last occurrence.
  EXPECT_EQ(lexicon.size(), 7488u);
  EXPECT_DOUBLE_EQ(lexicon.valence("good").value(), 1.9);
  EXPECT_DOUBLE_EQ(lexicon.valence("great").value(), 3.1);
  EXPECT_DOUBLE_EQ(lexicon.valence("horrible").value(), -2.5);
  EXPECT_DOUBLE_EQ(lexicon.valence(";)").value(), 0.9);
  EXPECT_FALSE(lexicon.contains("zzzznotaword"));
  EXPECT_FALSE(lexicon.valence("zzzznotaword").has_value());
}

TEST(LexiconTest, MissingFileThrows) {
  EXPECT_THROW(Lexicon::load("/nonexistent/lexicon.txt"), MissingFileError);
}

TEST(LexiconTest, MalformedValenceThrows) {
  test::TempDir dir;
  test::write_file(dir.file("bad.txt"), "fine\t1.5\nbroken\tnotanumber\n");
  try {
    Lexicon::load(dir.file("bad.txt"));
    FAIL() << "expected MalformedLineError";
  } catch (const MalformedLineError& error) {
    EXPECT_EQ(error.line_number(), 2u);
  }
}

TEST(LexiconTest, SkipsCommentsBlanksAndUnloadableTokens) {
  test::TempDir dir;
  test::write_file(dir.file("lex.txt"),
                   "# comment line\n"
                   "\n"
                   "happy\t2.0\t0.5\t[2, 2, 2]\n"
                   "Upper\t1.0\n"
                   "two words\t1.0\n"
                   "caf\xc3\xa9\t1.0\n"
                   ";-)\t1.3\n");
  const Lexicon lexicon = Lexicon::load(dir.file("lex.txt"));
  EXPECT_EQ(lexicon.size(), 2u);
  EXPECT_DOUBLE_EQ(lexicon.valence("happy").value(), 2.0);
  EXPECT_DOUBLE_EQ(lexicon.valence(";-)").value(), 1.3);
  EXPECT_FALSE(lexicon.contains("upper"));
  EXPECT_FALSE(lexicon.contains("Upper"));
}

TEST(LexiconTest, DuplicateTokensKeepLastValue) {
  test::TempDir dir;
  test::write_file(dir.file("dup.txt"), "word\t1.0\nword\t-2.0\n");
  const Lexicon lexicon = Lexicon::load(dir.file("dup.txt"));
  EXPECT_EQ(lexicon.size(), 1u);
  EXPECT_DOUBLE_EQ(lexicon.valence("word").value(), -2.0);
}

TEST(LexiconTest, FromEntries) {
  const Lexicon lexicon =
      Lexicon::from_entries({{"up", 1.5}, {"down", -1.5}, {"up", 2.5}});
  EXPECT_EQ(lexicon.size(), 2u);
  EXPECT_DOUBLE_EQ(lexicon.valence("up").value(), 2.5);
  EXPECT_FALSE(lexicon.empty());
}

}  // namespace
}  // namespace elan
