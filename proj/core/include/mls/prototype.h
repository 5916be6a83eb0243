#ifndef MLS_PROTOTYPE_H_
#define MLS_PROTOTYPE_H_

#include <span>
#include <string_view>
#include <vector>

#include "mls/kernels.h"
#include "mls/pagerank.h"
#include "mls/text.h"

namespace mls {

struct PrototypeItem {
  std::size_t doc_index = 0;
  Sentence sentence;
};

// Extractive stand-in for the prototype summary: document sentences in
// document order.
struct PrototypeSummary {
  std::vector<PrototypeItem> sentences;
  std::size_t token_count = 0;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

enum class PrototypeStrategy { kTextRank, kGreedy };

std::string_view ToString(PrototypeStrategy s);
PrototypeStrategy ParsePrototypeStrategy(std::string_view s);

inline constexpr double kDefaultPrototypeRatio = 0.2;

// Walks `ranking` and keeps every sentence that still fits under `cap`
// tokens; the result is in document order.
PrototypeSummary SelectUnderCap(const Document& doc, std::span<const std::size_t> ranking,
                                std::size_t cap);

// Sentences ranked by weighted PageRank over the embedding-similarity graph.
PrototypeSummary TextRankPrototype(const Document& doc, const EmbeddingTable& table,
                                   double target_ratio,
                                   const PageRankOptions& pagerank = {});

// Sentences ranked by relevance to the keyword kernel.
PrototypeSummary GreedyPrototype(const Document& doc, const Kernel& keyword_kernel,
                                 double target_ratio);

// Median gold/document token ratio, clamped to [0.05, 0.9].
double LearnPrototypeRatio(std::span<const CorpusPair> train);

}  // namespace mls

#endif  // MLS_PROTOTYPE_H_
