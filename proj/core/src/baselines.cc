#include "mls/baselines.h"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace mls {
namespace {

SummaryResult FromIndices(const Document& doc, std::size_t budget,
                          std::vector<std::size_t> indices, bool stopped_on_budget) {
  std::sort(indices.begin(), indices.end());
  SummaryResult result;
  result.budget = budget;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    SummaryItem item;
    item.source = Provenance::kCopied;
    item.prototype_index = i;
    item.span_start = indices[i];
    item.span_end = indices[i] + 1;
    item.tokens = doc.sentences[indices[i]].tokens;
    result.token_count += item.tokens.size();
    result.items.push_back(std::move(item));
  }
  if (stopped_on_budget) {
    result.stop_reason = result.token_count >= budget ? StopReason::kBudgetReached
                                                      : StopReason::kNoCandidateFits;
  } else {
    result.stop_reason = StopReason::kAttentionExhausted;
  }
  result.budget_infeasible = result.items.empty() && result.stop_reason == StopReason::kNoCandidateFits;
  return result;
}

}  // namespace

SummaryResult BaselineA1FromStart(const Document& doc, std::size_t budget, std::size_t k,
                                  std::size_t start) {
  if (k == 0) throw std::invalid_argument("a1: stride must be positive");
  std::vector<std::size_t> picked;
  std::size_t len = 0;
  bool stopped = false;
  for (std::size_t i = start; i < doc.sentences.size(); i += k) {
    const std::size_t t = doc.sentences[i].token_count();
    if (len + t > budget) {
      stopped = true;
      break;
    }
    picked.push_back(i);
    len += t;
  }
  return FromIndices(doc, budget, std::move(picked), stopped);
}

SummaryResult BaselineA1(const Document& doc, std::size_t budget, std::size_t k,
                         std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("a1: stride must be positive");
  std::mt19937_64 rng(seed);
  // Draw among sentences that exist, so a short document still gets a start.
  const std::size_t first = std::min(k >= 2 ? k - 1 : 1, std::max<std::size_t>(doc.sentences.size(), 1));
  const std::size_t hi = first - 1;
  const std::size_t start = std::uniform_int_distribution<std::size_t>(0, hi)(rng);
  return BaselineA1FromStart(doc, budget, k, start);
}

SummaryResult BaselineA2(const Document& doc, std::size_t budget, const EmbeddingTable& table,
                         const PageRankOptions& pagerank) {
  const auto ranking = RankByScore(WeightedPageRank(SentenceSimilarityGraph(doc, table), pagerank));
  std::vector<std::size_t> picked;
  std::size_t len = 0;
  bool stopped = false;
  for (std::size_t i : ranking) {
    const std::size_t t = doc.sentences[i].token_count();
    if (len + t > budget) {
      stopped = true;
      break;
    }
    picked.push_back(i);
    len += t;
  }
  return FromIndices(doc, budget, std::move(picked), stopped);
}

}  // namespace mls
