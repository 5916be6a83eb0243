#include "mls/prototype.h"

#include <algorithm>
#include <stdexcept>

namespace mls {
namespace {

void CheckRatio(double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("prototype target ratio must be in (0, 1]");
  }
}

}  // namespace

std::string_view ToString(PrototypeStrategy s) {
  return s == PrototypeStrategy::kTextRank ? "textrank" : "greedy";
}

PrototypeStrategy ParsePrototypeStrategy(std::string_view s) {
  if (s == "textrank") return PrototypeStrategy::kTextRank;
  if (s == "greedy") return PrototypeStrategy::kGreedy;
  throw std::invalid_argument("unknown prototype strategy '" + std::string(s) + "'");
}

PrototypeSummary SelectUnderCap(const Document& doc, std::span<const std::size_t> ranking,
                                std::size_t cap) {
  std::vector<std::size_t> chosen;
  std::size_t used = 0;
  for (std::size_t idx : ranking) {
    const std::size_t len = doc.sentences.at(idx).token_count();
    if (used + len > cap) continue;
    used += len;
    chosen.push_back(idx);
  }
  std::sort(chosen.begin(), chosen.end());
  PrototypeSummary proto;
  proto.token_count = used;
  for (std::size_t idx : chosen) proto.sentences.push_back({idx, doc.sentences[idx]});
  return proto;
}

PrototypeSummary TextRankPrototype(const Document& doc, const EmbeddingTable& table,
                                   double target_ratio, const PageRankOptions& pagerank) {
  CheckRatio(target_ratio);
  const Vector scores = WeightedPageRank(SentenceSimilarityGraph(doc, table), pagerank);
  const auto ranking = RankByScore(scores);
  return SelectUnderCap(doc, ranking, FractionOfTokens(target_ratio, doc.token_count));
}

PrototypeSummary GreedyPrototype(const Document& doc, const Kernel& keyword_kernel,
                                 double target_ratio) {
  CheckRatio(target_ratio);
  if (keyword_kernel.property != Property::kKeywordCoverage) {
    throw std::invalid_argument("greedy prototype needs the keyword kernel");
  }
  const KernelProjector projector(keyword_kernel);
  // Relevance is exp(-raw) for this head, so ranking by -raw is equivalent and
  // does not underflow.
  Vector scores;
  scores.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) scores.push_back(-projector.RawScoreOf(s.tokens));
  const auto ranking = RankByScore(scores);
  return SelectUnderCap(doc, ranking, FractionOfTokens(target_ratio, doc.token_count));
}

double LearnPrototypeRatio(std::span<const CorpusPair> train) {
  std::vector<double> ratios;
  for (const auto& pair : train) {
    if (pair.document.token_count == 0) continue;
    ratios.push_back(static_cast<double>(pair.gold_summary.token_count) /
                     static_cast<double>(pair.document.token_count));
  }
  if (ratios.empty()) throw std::invalid_argument("cannot learn a prototype ratio from no pairs");
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  const double median =
      ratios.size() % 2 == 1 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  return std::clamp(median, 0.05, 0.9);
}

}  // namespace mls
