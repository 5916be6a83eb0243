#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mls/kernels.h"
#include "mls/prototype.h"
#include "mls/rake.h"
#include "synthetic.h"

namespace mls {
namespace {

std::vector<std::size_t> Indices(const PrototypeSummary& p) {
  std::vector<std::size_t> out;
  for (const auto& item : p.sentences) out.push_back(item.doc_index);
  return out;
}

CorpusPair PairWithRatio(std::size_t doc_tokens, std::size_t gold_tokens) {
  std::string doc, gold;
  for (std::size_t i = 0; i < doc_tokens; ++i) doc += "w ";
  for (std::size_t i = 0; i < gold_tokens; ++i) gold += "w ";
  return {MakeDocument("d", doc), MakeDocument("g", gold)};
}

TEST(TextRankPrototypeTest, SingleSentence) {
  const EmbeddingTable t = ParseEmbeddings("a 1 0\n");
  const Document doc = MakeDocument("d", "A a a.");
  EXPECT_EQ(Indices(TextRankPrototype(doc, t, 1.0)), (std::vector<std::size_t>{0}));
}

TEST(TextRankPrototypeTest, IdenticalSentencesTieToFirst) {
  const EmbeddingTable t = ParseEmbeddings("a 1 0\n");
  const Document doc = MakeDocument("d", "A a. A a. A a.");
  // 9 tokens, ratio 1/3 -> cap 3: exactly one sentence.
  EXPECT_EQ(Indices(TextRankPrototype(doc, t, 1.0 / 3.0)), (std::vector<std::size_t>{0}));
}

TEST(TextRankPrototypeTest, HubFirst) {
  const EmbeddingTable t = ParseEmbeddings("h 1 1 1 1\na 1 0 0 0\nb 0 1 0 0\nc 0 0 1 0\nd 0 0 0 1\n");
  const Document doc = MakeDocument("d", "A. B. H. C. D.");
  // 10 tokens, ratio 0.2 -> one sentence.
  EXPECT_EQ(Indices(TextRankPrototype(doc, t, 0.2)), (std::vector<std::size_t>{2}));
}

TEST(TextRankPrototypeTest, CapOrderAndDeterminism) {
  synth::World world;
  synth::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Document doc = synth::RandomDocument(world, rng, "d", {5, 60});
    for (double ratio : {0.05, 0.2, 0.5, 1.0}) {
      const auto p = TextRankPrototype(doc, world.table(), ratio);
      EXPECT_LE(p.token_count, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(doc.token_count) - 1e-9)));
      const auto idx = Indices(p);
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
      std::size_t sum = 0;
      for (const auto& item : p.sentences) {
        EXPECT_EQ(item.sentence.tokens, doc.sentences[item.doc_index].tokens);
        sum += item.sentence.token_count();
      }
      EXPECT_EQ(sum, p.token_count);
      EXPECT_EQ(idx, Indices(TextRankPrototype(doc, world.table(), ratio)));
    }
  }
}

TEST(TextRankPrototypeTest, RatioOutOfRangeThrows) {
  const Document doc = MakeDocument("d", "A.");
  EXPECT_THROW(TextRankPrototype(doc, EmbeddingTable{}, 0.0), std::invalid_argument);
  EXPECT_THROW(TextRankPrototype(doc, EmbeddingTable{}, 1.5), std::invalid_argument);
}

TEST(GreedyPrototypeTest, SentenceWithAllKeywordsFirst) {
  // The keyword row is (3/5, 1/5, 1/5); sentence 1 reproduces it exactly.
  const Document doc = MakeDocument(
      "d", "Of of of. Red fish, red fish, red fish, blue fish, green fish. Of of.");
  const Kernel k = BuildKeywordKernel(doc, {"of"}, 50);
  ASSERT_EQ(k.cols(), 3u);
  // 22 tokens; a cap of 15 fits sentence 1 alone.
  EXPECT_EQ(Indices(GreedyPrototype(doc, k, 15.0 / 22.0)), (std::vector<std::size_t>{1}));
}

TEST(GreedyPrototypeTest, KeywordFreeSentencesTakenInIndexOrder) {
  const Document doc = MakeDocument("d", "Alpha beta. Of of. The of. Of the. The the.");
  const Kernel k = BuildKeywordKernel(doc, {"of", "the"}, 50);
  // 15 tokens, cap 9 at ratio 0.6: sentence 0, then keyword-free 1, 2 in index order.
  EXPECT_EQ(Indices(GreedyPrototype(doc, k, 0.6)), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(GreedyPrototypeTest, SixSentenceToyMatchesHandRanking) {
  const StopwordSet stop{"of", "and", "the"};
  const Document doc = MakeDocument(
      "d",
      "Solar power. Solar power and wind farms. The grid. Wind farms of solar power. "
      "The solar power. Wind farms.");
  const Kernel k = BuildKeywordKernel(doc, stop, 50);
  // Independent relevance: smoothed relative frequency of each phrase in the
  // sentence against the smoothed kernel row.
  auto smooth = [](Vector p) {
    double s = 0.0;
    for (double& x : p) s += (x += 1e-6);
    for (double& x : p) x /= s;
    return p;
  };
  const Vector row = smooth(k.matrix[0]);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    Vector counts(k.cols(), 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < k.cols(); ++c) {
      std::vector<std::string> words;
      std::string w;
      for (char ch : k.labels[c] + " ") {
        if (ch == ' ') {
          words.push_back(w);
          w.clear();
        } else {
          w.push_back(ch);
        }
      }
      counts[c] = static_cast<double>(CountOccurrences(doc.sentences[i].tokens, words));
      total += counts[c];
    }
    if (total > 0) {
      for (double& x : counts) x /= total;
    }
    const Vector p = smooth(counts);
    double d = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) d += (p[c] - row[c]) * std::log(p[c] / row[c]);
    scored.push_back({d, i});
  }
  std::stable_sort(scored.begin(), scored.end(), [](auto& a, auto& b) { return a.first < b.first - 1e-12; });
  const std::size_t cap = (doc.token_count + 1) / 2;
  std::vector<std::size_t> want;
  std::size_t used = 0;
  for (auto [d, i] : scored) {
    if (used + doc.sentences[i].token_count() > cap) continue;
    used += doc.sentences[i].token_count();
    want.push_back(i);
  }
  std::sort(want.begin(), want.end());
  EXPECT_EQ(Indices(GreedyPrototype(doc, k, static_cast<double>(cap) / static_cast<double>(doc.token_count))), want);
}

TEST(LearnPrototypeRatioTest, Single) {
  const std::vector<CorpusPair> train{PairWithRatio(20, 5)};
  EXPECT_DOUBLE_EQ(LearnPrototypeRatio(train), 0.25);
}

TEST(LearnPrototypeRatioTest, Median) {
  const std::vector<CorpusPair> train{PairWithRatio(10, 1), PairWithRatio(10, 2), PairWithRatio(10, 9)};
  EXPECT_DOUBLE_EQ(LearnPrototypeRatio(train), 0.2);
}

TEST(LearnPrototypeRatioTest, ClampedAndEmpty) {
  const std::vector<CorpusPair> train{PairWithRatio(100, 1)};
  EXPECT_DOUBLE_EQ(LearnPrototypeRatio(train), 0.05);
  EXPECT_THROW(LearnPrototypeRatio(std::span<const CorpusPair>{}), std::invalid_argument);
}

}  // namespace
}  // namespace mls
