#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>

#include "mls/text.h"
#include "synthetic.h"

namespace mls {
namespace {

constexpr std::string_view kRobbery =
    "police are hunting a man aged between 50 and 60 suspected of robbing a bank in broad "
    "daylight and running off with \xC2\xA3" "3,000 in cash. the robbery took place at 12.30pm at a "
    "lloyds bank branch in fairwater, cardiff, police said. detective sergeant andy miles, from "
    "fairwater cid, said: 'inquiries are continuing to identify the culprit.'";

std::vector<std::string> Words(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

TEST(TokenizeTest, EmptyText) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(TokenizeTest, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(Tokenize("Hello, World!"), Words({"hello", ",", "world", "!"}));
}

TEST(TokenizeTest, KeepsNumbersAndInnerApostrophes) {
  EXPECT_EQ(Tokenize("it's 3,000 and 12.30pm"), Words({"it's", "3,000", "and", "12.30pm"}));
}

TEST(TokenizeTest, IdempotentOnJoinedOutput) {
  const auto first = Tokenize(kRobbery);
  std::string joined;
  for (const auto& t : first) joined += t + " ";
  EXPECT_EQ(Tokenize(joined), first);
}

TEST(SplitSentencesTest, EmptyText) { EXPECT_TRUE(SplitSentences("").empty()); }

TEST(SplitSentencesTest, TwoShortSentences) {
  const auto s = SplitSentences("A b. C d.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens, Words({"a", "b", "."}));
  EXPECT_EQ(s[1].tokens, Words({"c", "d", "."}));
}

TEST(SplitSentencesTest, CaselessTextFromFigureOne) {
  const auto s = SplitSentences(kRobbery);
  ASSERT_GE(s.size(), 3u);
  const std::string_view first = std::string_view(kRobbery).substr(s[0].char_span.start, s[0].char_span.size());
  EXPECT_TRUE(first.ends_with("in cash."));
  EXPECT_EQ(s[0].tokens.back(), ".");
}

TEST(SplitSentencesTest, AbbreviationDoesNotSplit) {
  const auto s = SplitSentences("We met Dr. Smith today. He was late.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens[2], "dr");
}

TEST(SplitSentencesTest, BlankLineEndsSentence) {
  EXPECT_EQ(SplitSentences("no period here\n\nAnother one").size(), 2u);
}

TEST(SplitSentencesTest, SpansCoverEveryNonSpaceCharacterOnce) {
  synth::World world;
  synth::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::string text = synth::RandomDocumentText(world, rng, {5, 30});
    const auto s = SplitSentences(text);
    std::vector<int> covered(text.size(), 0);
    std::size_t last_end = 0;
    for (const auto& sentence : s) {
      EXPECT_GE(sentence.char_span.start, last_end);
      last_end = sentence.char_span.end;
      for (std::size_t i = sentence.char_span.start; i < sentence.char_span.end; ++i) ++covered[i];
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) EXPECT_EQ(covered[i], 1) << i;
    }
  }
}

TEST(DocumentTest, TokenCountIsSumOfSentences) {
  const Document doc = MakeDocument("d", std::string(kRobbery));
  std::size_t sum = 0;
  for (const auto& s : doc.sentences) sum += s.token_count();
  EXPECT_EQ(doc.token_count, sum);
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) EXPECT_EQ(doc.sentences[i].index, i);
}

TEST(DocumentTest, FromSentencesReindexes) {
  const Document doc = MakeDocument("d", "One two. Three four five. Six.");
  const std::vector<std::size_t> pick{0, 2};
  const Document sub = MakeDocumentFromSentences("s", doc, pick);
  ASSERT_EQ(sub.sentences.size(), 2u);
  EXPECT_EQ(sub.sentences[1].index, 1u);
  EXPECT_EQ(sub.sentences[1].tokens, Words({"six", "."}));
  EXPECT_EQ(sub.token_count, 5u);
  EXPECT_EQ(sub.raw, "One two. Six.");
}

TEST(CorpusTest, EmptyFile) { EXPECT_TRUE(ParseCorpus("").empty()); }

TEST(CorpusTest, ThreeRecordsInOrder) {
  const auto pairs = ParseCorpus(
      R"({"id":"a","text":"One. Two.","summary":"One."})"
      "\n"
      R"({"id":"b","text":"Three.","summary":"Three."})"
      "\n"
      R"({"id":"c","text":"Four five.","summary":"Four."})"
      "\n");
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].document.id, "a");
  EXPECT_EQ(pairs[2].document.id, "c");
  EXPECT_EQ(pairs[0].document.sentences.size(), 2u);
}

TEST(CorpusTest, MissingFieldNamesLineAndField) {
  try {
    ParseCorpus(R"({"id":"a","text":"x.","summary":"x."})"
                "\n"
                R"({"id":"b","text":"y."})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_STREQ(e.what(), "line 2: missing field summary");
  }
}

TEST(CorpusTest, MalformedLineNamesLine) {
  try {
    ParseCorpus("{not json");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_TRUE(std::string_view(e.what()).starts_with("line 1:"));
  }
}

TEST(EmbeddingsTest, PlainLines) {
  const auto t = ParseEmbeddings("a 1 0 0\nb 0 1 0\n");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dimension(), 3u);
  EXPECT_EQ(*t.Find("b"), (Vector{0, 1, 0}));
}

TEST(EmbeddingsTest, HeaderConsumed) {
  const auto t = ParseEmbeddings("2 3\na 1 0 0\nb 0 1 0\n");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dimension(), 3u);
}

TEST(EmbeddingsTest, InconsistentDimensionNamesLine) {
  try {
    ParseEmbeddings("a 1 0 0\nb 0 1\nc 0 0 1\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_TRUE(std::string_view(e.what()).starts_with("line 2:"));
  }
}

TEST(EmbeddingsTest, DuplicateKeepsLast) {
  const auto t = ParseEmbeddings("a 1 0\na 0 1\n");
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(*t.Find("a"), (Vector{0, 1}));
}

TEST(EmbedSentenceTest, AllOutOfVocabularyIsZero) {
  const auto t = ParseEmbeddings("a 1 2\n");
  const auto s = SplitSentences("x y z.");
  EXPECT_EQ(EmbedSentence(s[0], t), (Vector{0, 0}));
}

TEST(EmbedSentenceTest, SingleTokenIsItsVector) {
  const auto t = ParseEmbeddings("a 1 2\n");
  const auto s = SplitSentences("a.");
  EXPECT_EQ(EmbedSentence(s[0], t), (Vector{1, 2}));
}

TEST(EmbedSentenceTest, MeanOfTwo) {
  const auto t = ParseEmbeddings("a 1 0\nb 0 1\n");
  EXPECT_EQ(EmbedTokens(Words({"a", "b"}), t), (Vector{0.5, 0.5}));
}

TEST(EmbedSentenceTest, PermutationInvariant) {
  synth::World world;
  synth::Rng rng(11);
  auto words = world.SentenceWords(rng, 0, 12);
  const Vector a = EmbedTokens(words, world.table());
  std::shuffle(words.begin(), words.end(), rng);
  const Vector b = EmbedTokens(words, world.table());
  for (std::size_t d = 0; d < a.size(); ++d) EXPECT_NEAR(a[d], b[d], 1e-12);
}

TEST(FractionOfTokensTest, IgnoresFloatingNoise) {
  EXPECT_EQ(FractionOfTokens(0.2, 15), 3u);
  EXPECT_EQ(FractionOfTokens(1.0 / 32, 100), 4u);
  EXPECT_EQ(FractionOfTokens(0.25, 100), 25u);
  EXPECT_EQ(FractionOfTokens(1.0, 37), 37u);
}

TEST(ContentTokensTest, DropsStopwordsAndPunctuation) {
  const StopwordSet stop{"the", "of"};
  EXPECT_EQ(ContentTokens(Words({"the", "end", "of", "it", "."}), stop), Words({"end", "it"}));
}

}  // namespace
}  // namespace mls
