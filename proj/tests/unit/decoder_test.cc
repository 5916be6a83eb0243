#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>

#include "mls/decoder.h"
#include "mls/evaluation.h"
#include "mls/pipeline.h"
#include "mls/resources.h"
#include "synthetic.h"

namespace mls {
namespace {

PrototypeSummary ProtoOf(const Document& doc, std::initializer_list<std::size_t> idx) {
  PrototypeSummary p;
  for (std::size_t i : idx) {
    p.sentences.push_back({i, doc.sentences[i]});
    p.token_count += doc.sentences[i].token_count();
  }
  return p;
}

// Owns everything a DecoderContext points at.
struct Toy {
  Document doc;
  EmbeddingTable table;
  StopwordSet stop;
  PrototypeSummary proto;
  std::unique_ptr<Multiplex> multiplex;
  std::unique_ptr<DecoderContext> ctx;

  Toy(std::string text, std::string embeddings, std::initializer_list<std::size_t> proto_idx,
      StopwordSet stopwords = {})
      : doc(MakeDocument("toy", std::move(text))),
        table(ParseEmbeddings(embeddings)),
        stop(std::move(stopwords)),
        proto(ProtoOf(doc, proto_idx)) {
    KernelOptions opt;
    opt.lda.iterations = 30;
    multiplex = std::make_unique<Multiplex>(BuildMultiplex(doc, stop, table, kDefaultWeights, opt));
    ctx = std::make_unique<DecoderContext>(doc, proto, *multiplex, table, stop);
  }
};

TEST(BudgetTokensTest, Examples) {
  std::string text;
  for (int i = 0; i < 99; ++i) text += "w ";
  const Document doc = MakeDocument("d", text + "w.");
  ASSERT_EQ(doc.token_count, 101u);  // 100 words + the period
  const Document hundred = MakeDocument("d", text + "w");
  ASSERT_EQ(hundred.token_count, 100u);
  EXPECT_EQ(BudgetTokens(hundred, 0.25), 25u);
  EXPECT_EQ(BudgetTokens(hundred, 1.0 / 32), 4u);
  EXPECT_EQ(BudgetTokens(hundred, 1.0), 100u);
  EXPECT_THROW(BudgetTokens(hundred, 0.0), std::invalid_argument);
  EXPECT_THROW(BudgetTokens(hundred, 1.01), std::invalid_argument);
}

TEST(CopyProbabilityTest, Examples) {
  const AttentionState u(Vector(4, 0.25));
  EXPECT_DOUBLE_EQ(CopyProbability(u, 2), 0.25);
  const AttentionState two = AttentionState({0.3, 0.7}).Consume(0);
  EXPECT_DOUBLE_EQ(CopyProbability(two, 1), 1.0);
  EXPECT_THROW(CopyProbability(two, 0), std::invalid_argument);
}

TEST(SoftSwitchTest, Examples) {
  const auto spent = SoftSwitch(0.8, 0.3, 10, 10);
  EXPECT_EQ(spent.alpha, 0.0);
  EXPECT_DOUBLE_EQ(spent.p_out, 0.3);
  const auto open = SoftSwitch(0.8, 0.3, 10, 4);
  EXPECT_DOUBLE_EQ(open.alpha, 0.8);
  EXPECT_NEAR(open.p_out, 0.70, 1e-12);
  for (double p : {0.1, 0.5, 0.9}) EXPECT_NEAR(SoftSwitch(p, p, 10, 2).p_out, p, 1e-15);
}

TEST(ExpansionSetTest, VerbatimSentenceHasFullOverlap) {
  Toy toy("Cats chase mice. Dogs bark loudly. Cats chase mice daily. Birds sing.",
          "cats 1 0\nchase 1 1\nmice 0 1\ndogs -1 0\nbark -1 1\nloudly 0 -1\ndaily 1 -1\nbirds 0 2\nsing 2 0\n", {0});
  const std::vector<bool> used(4, false);
  const RepetitionTracker none;
  ASSERT_TRUE(FindExpansionSet(*toy.ctx, 0, used, 2, 4, none).has_value());
  // Every 2-span holds either sentence 0 or its superset, sentence 2.
  EXPECT_DOUBLE_EQ(toy.ctx->Overlap(0, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(toy.ctx->Overlap(0, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(toy.ctx->Overlap(0, 2, 2), 1.0);
}

TEST(ExpansionSetTest, FourSentencesTriGramsMatchExhaustive) {
  Toy toy("Red apples fall. Green apples grow. Red leaves fall. Blue sky.",
          "red 1 0 0\napples 0 1 0\nfall 0 0 1\ngreen 1 1 0\ngrow 0 1 1\nleaves 1 0 1\nblue 0 0 2\nsky 2 0 0\n",
          {0});
  const std::vector<bool> used(4, false);
  const RepetitionTracker none;
  const auto got = FindExpansionSet(*toy.ctx, 0, used, 3, 4, none);
  ASSERT_TRUE(got.has_value());
  double best = -1.0;
  std::size_t best_start = 0;
  for (std::size_t start : {0u, 1u}) {
    double sim = 0.0;
    for (std::size_t k = start; k < start + 3; ++k) {
      const Vector a = EmbedSentence(toy.doc.sentences[0], toy.table);
      const Vector b = EmbedSentence(toy.doc.sentences[k], toy.table);
      double dot = 0, na = 0, nb = 0;
      for (std::size_t d = 0; d < a.size(); ++d) {
        dot += a[d] * b[d];
        na += a[d] * a[d];
        nb += b[d] * b[d];
      }
      sim += (dot / std::sqrt(na * nb) + 1.0) / 2.0;
    }
    sim /= 3.0;
    std::set<std::string> words, covered;
    for (const auto& t : toy.doc.sentences[0].tokens) {
      if (!IsPunctuation(t)) words.insert(t);
    }
    for (std::size_t k = start; k < start + 3; ++k) {
      for (const auto& t : toy.doc.sentences[k].tokens) {
        if (words.contains(t)) covered.insert(t);
      }
    }
    const double score = sim * static_cast<double>(covered.size()) / static_cast<double>(words.size());
    if (score > best) {
      best = score;
      best_start = start;
    }
  }
  EXPECT_EQ(got->start, best_start);
  EXPECT_NEAR(got->score, best, 1e-12);
  EXPECT_EQ(got->n, 3u);
}

TEST(ExpansionSetTest, RepeatedTrigramLosesTie) {
  // Direct tie: two spans with identical score, one repeating a trigram.
  // Every 2-span scores 0.75; only {2, 3} avoids the summarised trigram.
  Toy tie("One two three. Four five six. One two three. Seven eight nine.",
          "one 1 0\ntwo 1 0\nthree 1 0\nfour 0 1\nfive 0 1\nsix 0 1\nseven 0 1\neight 0 1\nnine 0 1\n", {0});
  RepetitionTracker seen;
  seen.Add(tie.doc.sentences[1].tokens);  // "four five six" already summarised
  const std::vector<bool> free(4, false);
  const auto pick = FindExpansionSet(*tie.ctx, 0, free, 2, 4, seen);
  ASSERT_TRUE(pick.has_value());
  // {0,1} and {1,2} repeat the trigram; {2,3} has the same score and does not.
  EXPECT_EQ(pick->start, 2u);
  EXPECT_EQ(pick->repeats, 0u);
}

TEST(ExpansionSetTest, NoCandidateWhenAllUsedOrTooLong) {
  Toy toy("A b. C d. E f.", "a 1\nb 1\nc 1\nd 1\ne 1\nf 1\n", {0});
  std::vector<bool> used{false, true, false};
  const RepetitionTracker none;
  EXPECT_FALSE(FindExpansionSet(*toy.ctx, 0, used, 2, 4, none).has_value());
  const std::vector<bool> free(3, false);
  EXPECT_FALSE(FindExpansionSet(*toy.ctx, 0, free, 2, 4, none, 5).has_value());
  EXPECT_TRUE(FindExpansionSet(*toy.ctx, 0, free, 2, 4, none, 6).has_value());
}

TEST(ExpandProbabilityTest, SingleSentenceSpanIsOne) {
  Toy toy("A b. C d. E f.", "a 1 0\nb 0 1\nc 1 1\nd 1 0\ne 0 1\nf 1 1\n", {0});
  ExpansionSet span;
  span.start = 1;
  span.n = 1;
  EXPECT_DOUBLE_EQ(ExpandProbability(*toy.ctx, kDefaultWeights, span), 1.0);
}

TEST(ExpandProbabilityTest, IdenticalSentencesSplitEvenly) {
  Toy toy("A b. C d. C d.", "a 1 0\nb 0 1\nc 1 1\nd 1 0\n", {0});
  ExpansionSet span;
  span.start = 1;
  span.n = 2;
  Vector per;
  EXPECT_DOUBLE_EQ(ExpandProbability(*toy.ctx, kDefaultWeights, span, &per), 0.5);
  EXPECT_NEAR(per[0], 0.5, 1e-15);
  EXPECT_NEAR(per[1], 0.5, 1e-15);
}

TEST(ExpandProbabilityTest, TwoSentenceSpanByHand) {
  // One-row kernels built by hand: topic row over {x, y}, keyword row over
  // {x, y}, a redundancy row along x.
  const Document doc = MakeDocument("d", "X. Y.");
  const EmbeddingTable table = ParseEmbeddings("x 1 0\ny 0 1\n");
  Kernel topic, keyword, red;
  topic.labels = {"x", "y"};
  topic.matrix = {{0.8, 0.2}};
  topic.weight = 0.6;
  keyword.property = Property::kKeywordCoverage;
  keyword.labels = {"x", "y"};
  keyword.matrix = {{0.3, 0.7}};
  keyword.weight = 0.6;
  red.property = Property::kRedundancy;
  red.metric = Metric::kCosine;
  red.matrix = {{1.0, 0.0}};
  red.weight = -0.2;
  const Multiplex m(topic, keyword, red);
  const PrototypeSummary proto = ProtoOf(doc, {0});
  const DecoderContext ctx(doc, proto, m, table, {});

  auto smooth = [](Vector p) {
    double s = 0.0;
    for (double& x : p) s += (x += 1e-6);
    for (double& x : p) x /= s;
    return p;
  };
  auto skl = [](const Vector& p, const Vector& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += p[i] * std::log(p[i] / q[i]) + q[i] * std::log(q[i] / p[i]);
    return d;
  };
  const Vector px = smooth({1, 0}), py = smooth({0, 1});
  const double t0 = std::exp(-skl(px, smooth({0.8, 0.2}))), t1 = std::exp(-skl(py, smooth({0.8, 0.2})));
  const double k0 = std::exp(-skl(px, smooth({0.3, 0.7}))), k1 = std::exp(-skl(py, smooth({0.3, 0.7})));
  const double r0 = (1.0 + 1.0) / 2.0, r1 = (0.0 + 1.0) / 2.0;
  const double mix0 = (0.6 * t0 / (t0 + t1) + 0.6 * k0 / (k0 + k1) - 0.2 * r0 / (r0 + r1)) / 3.0;
  const double mix1 = (0.6 * t1 / (t0 + t1) + 0.6 * k1 / (k0 + k1) - 0.2 * r1 / (r0 + r1)) / 3.0;
  const double a0 = std::exp(mix0) / (std::exp(mix0) + std::exp(mix1));

  ExpansionSet span;
  span.start = 0;
  span.n = 2;
  Vector per;
  const double pe = ExpandProbability(ctx, m.weights(), span, &per);
  EXPECT_NEAR(per[0], a0, 1e-9);
  EXPECT_NEAR(per[1], 1.0 - a0, 1e-9);
  EXPECT_NEAR(pe, 0.5, 1e-12);
}

TEST(DecodeTest, WholeDocumentWhenEverythingFits) {
  Toy toy("A b. C d e. F. G h.", "a 1 0\nb 0 1\nc 1 1\nd 1 0\ne 0 1\nf 1 1\ng 2 1\nh 1 2\n", {0, 1, 2, 3});
  const auto r = Decode(*toy.ctx, kDefaultWeights, toy.doc.token_count);
  EXPECT_EQ(r.token_count, toy.doc.token_count);
  EXPECT_EQ(r.SentenceIndices(), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_FALSE(r.expansion_enabled);
  EXPECT_EQ(r.CountItems(Provenance::kCopied), 4u);
}

TEST(DecodeTest, BudgetEqualToPrototypeCopiesPrototypeInOrder) {
  Toy toy("A b. C d e. F. G h. I j k.", "a 1 0\nb 0 1\nc 1 1\nd 1 0\ne 0 1\nf 1 1\ng 2 1\nh 1 2\ni 1 3\nj 3 1\nk 2 2\n",
          {1, 3});
  const auto r = Decode(*toy.ctx, kDefaultWeights, toy.proto.token_count);
  EXPECT_FALSE(r.expansion_enabled);
  ASSERT_EQ(r.items.size(), 2u);
  EXPECT_EQ(r.items[0].span_start, 1u);
  EXPECT_EQ(r.items[1].span_start, 3u);
  EXPECT_EQ(r.items[0].prototype_index, 0u);
  EXPECT_EQ(r.token_count, toy.proto.token_count);
}

TEST(DecodeTest, StepByStepTraceOnSixSentenceToy) {
  Toy toy(
      "Storm hits coast. Storm floods coast towns. Rescue teams arrive. Teams rescue families. "
      "Roads reopen slowly. Markets reopen.",
      "storm 1 0 0\nhits 1 0.2 0\ncoast 0.8 0.2 0.1\nfloods 1 0.1 0.2\ntowns 0.5 0.5 0\nrescue 0 1 0\n"
      "teams 0.1 1 0\narrive 0 0.8 0.3\nfamilies 0.2 0.9 0.1\nroads 0 0 1\nreopen 0.1 0 1\nslowly 0 0.2 0.9\n"
      "markets 0.2 0 1\n",
      {0, 2});
  // Prototype: 8 tokens of 24; budget 16.
  const std::size_t budget = 16;
  const Weights w = kDefaultWeights;
  const DecoderContext& ctx = *toy.ctx;
  const auto r = Decode(ctx, w, budget);
  ASSERT_TRUE(r.expansion_enabled);

  AttentionState state = GlobalAttention(w, ctx.locals());
  std::vector<bool> used(6, false);
  RepetitionTracker tracker;
  std::size_t len = 0, step = 0;
  while (len < budget && !state.exhausted()) {
    const std::size_t remaining = budget - len;
    const std::size_t n = static_cast<double>(remaining) >= 3.0 * ctx.mean_sentence_length() ? 3 : 2;
    std::optional<std::size_t> best_pos;
    double best_out = 0.0;
    std::optional<ExpansionSet> best_span;
    bool best_expand = false;
    for (std::size_t pos = 0; pos < 2; ++pos) {
      if (!state.alive(pos)) continue;
      const std::size_t src = toy.proto.sentences[pos].doc_index;
      const bool copy_fits = !used[src] && toy.doc.sentences[src].token_count() <= remaining;
      auto span = FindExpansionSet(ctx, pos, used, n, 4, tracker, remaining);
      if (!span && n == 3) span = FindExpansionSet(ctx, pos, used, 2, 4, tracker, remaining);
      if (!copy_fits && !span) continue;
      const double pc = state.prob(pos);
      double out = pc;
      bool expand = false;
      if (span) {
        const double pe = ExpandProbability(ctx, w, *span);
        out = SoftSwitch(pe, pc, budget, len).p_out;
        expand = pe >= pc || !copy_fits;
      }
      if (!best_pos || out > best_out) {
        best_pos = pos;
        best_out = out;
        best_span = span;
        best_expand = expand;
      }
    }
    if (!best_pos) break;
    ASSERT_LT(step, r.trace.size());
    EXPECT_EQ(r.trace[step].position, *best_pos);
    EXPECT_EQ(r.trace[step].op == Provenance::kExpanded, best_expand);
    EXPECT_NEAR(r.trace[step].p_out, best_out, 1e-15);
    std::size_t a = toy.proto.sentences[*best_pos].doc_index, b = a + 1;
    if (best_expand) {
      a = best_span->start;
      b = best_span->end();
    }
    EXPECT_EQ(r.trace[step].span_start, a);
    EXPECT_EQ(r.trace[step].span_end, b);
    for (std::size_t k = a; k < b; ++k) {
      used[k] = true;
      tracker.Add(toy.doc.sentences[k].tokens);
      len += toy.doc.sentences[k].token_count();
    }
    state = state.Consume(*best_pos);
    ++step;
  }
  EXPECT_EQ(step, r.trace.size());
  EXPECT_EQ(len, r.token_count);
  EXPECT_LE(r.token_count, budget);
}

TEST(DecodeTest, InfeasibleBudgetGivesEmptyFlaggedSummary) {
  Toy toy("Alpha beta gamma. Delta epsilon zeta.", "alpha 1\nbeta 1\ngamma 1\ndelta 1\nepsilon 1\nzeta 1\n", {0});
  const auto r = Decode(*toy.ctx, kDefaultWeights, 2);
  EXPECT_TRUE(r.items.empty());
  EXPECT_TRUE(r.budget_infeasible);
  EXPECT_EQ(r.stop_reason, StopReason::kNoCandidateFits);
}

class DecodePropertyTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    world_ = new synth::World();
    synth::Rng rng(31);
    for (int i = 0; i < 25; ++i) {
      docs_.push_back(std::make_unique<PreparedDocument>(
          synth::RandomDocument(*world_, rng, "d" + std::to_string(i), {5, 50}), world_->table(),
          resources::DefaultStopwords(), PipelineConfig{}));
    }
  }
  static void TearDownTestSuite() {
    docs_.clear();
    delete world_;
  }
  static synth::World* world_;
  static std::vector<std::unique_ptr<PreparedDocument>> docs_;
};
synth::World* DecodePropertyTest::world_ = nullptr;
std::vector<std::unique_ptr<PreparedDocument>> DecodePropertyTest::docs_;

TEST_F(DecodePropertyTest, BudgetDisjointOrderedDeterministic) {
  for (const auto& p : docs_) {
    for (double c : kStandardCompressions) {
      const auto r = p->Summarize(c);
      EXPECT_LE(r.token_count, BudgetTokens(p->doc(), c));
      std::vector<std::size_t> idx = r.SentenceIndices();
      EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
      for (std::size_t i = 1; i < r.items.size(); ++i) {
        EXPECT_LT(r.items[i - 1].prototype_index, r.items[i].prototype_index);
      }
      std::size_t sum = 0;
      for (const auto& item : r.items) sum += item.tokens.size();
      EXPECT_EQ(sum, r.token_count);
      const auto again = p->Summarize(c);
      EXPECT_EQ(again.SentenceIndices(), idx);
      EXPECT_EQ(again.final_attention, r.final_attention);
    }
  }
}

TEST_F(DecodePropertyTest, WithoutExpansionOutputIsPrototypeSubsequence) {
  for (const auto& p : docs_) {
    const std::size_t b = p->prototype().token_count;
    const auto r = p->SummarizeTokens(b);
    EXPECT_FALSE(r.expansion_enabled);
    std::set<std::size_t> proto;
    for (const auto& item : p->prototype().sentences) proto.insert(item.doc_index);
    for (std::size_t k : r.SentenceIndices()) EXPECT_TRUE(proto.contains(k));
  }
}

}  // namespace
}  // namespace mls
