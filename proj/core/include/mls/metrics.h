#ifndef MLS_METRICS_H_
#define MLS_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mls/kernels.h"
#include "mls/resources.h"
#include "mls/text.h"

namespace mls {

// All overlap metrics below work on lowercased tokens with punctuation
// tokens removed, no stemming (except METEOR's second stage) and no stop-word
// removal. Scores are scaled to [0, 100].

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

std::vector<std::string> MetricTokens(std::string_view text);
std::vector<std::string> MetricTokens(std::span<const std::string> tokens);
std::vector<std::string> MetricTokens(const Document& doc);

// Clipped n-gram overlap with multiplicity.
PrecisionRecall RougeN(std::span<const std::string> candidate,
                       std::span<const std::string> reference, std::size_t n);
PrecisionRecall RougeN(std::string_view candidate, std::string_view reference, std::size_t n);

// Longest-common-subsequence P/R/F1 over the whole token sequences.
PrecisionRecall RougeLScores(std::span<const std::string> candidate,
                             std::span<const std::string> reference);
double RougeL(std::span<const std::string> candidate, std::span<const std::string> reference);
double RougeL(std::string_view candidate, std::string_view reference);

// Light suffix stripper used for METEOR's stem-match stage.
std::string Stem(std::string_view word);

// METEOR without synonym matching: exact then stem alignment (greedy, left
// to right), F_mean = 10PR / (R + 9P), fragmentation penalty
// 0.5 * (chunks / matches)^3.
double MeteorSimple(std::span<const std::string> candidate, std::span<const std::string> reference);
double MeteorSimple(std::string_view candidate, std::string_view reference);

// Mean symmetric KL between greedily matched dominant topics of the two
// texts, over the union vocabulary (smoothed). A text without content words
// contributes uniform rows.
double TopicDivergence(const Kernel& summary_topics, const Kernel& doc_topics);
double TopicDivergence(const Document& summary, const Document& doc, const StopwordSet& stopwords,
                       const KernelOptions& options = {});
// Topic kernel of a text; empty-content texts give a kernel with no columns.
Kernel TopicKernelForMetric(const Document& text, const StopwordSet& stopwords,
                            const KernelOptions& options);

// Smoothed {positive, negative, neutral} token-share distribution.
Vector SentimentDistribution(std::span<const std::string> tokens,
                             const resources::ValenceLexicon& lexicon);
double SentimentDivergence(std::span<const std::string> summary, std::span<const std::string> doc,
                           const resources::ValenceLexicon& lexicon = resources::DefaultValenceLexicon());

// Mean cosine between consecutive sentence embeddings, 0 below 2 sentences.
double Coherence(const Document& text, const EmbeddingTable& table);
double DeltaCoherence(const Document& summary, const Document& doc, const EmbeddingTable& table);

inline constexpr std::size_t kDefaultOrdersData[] = {1, 2, 3};
inline constexpr std::span<const std::size_t> kDefaultOrders{kDefaultOrdersData};

// Mean over n of the percentage of summary n-grams (within sentences) that do
// not occur in the document. Orders for which the summary has no n-grams are
// left out of the mean; an empty summary scores 0.
double Abstractiveness(const Document& summary, const Document& doc,
                       std::span<const std::size_t> orders = kDefaultOrders);

}  // namespace mls

#endif  // MLS_METRICS_H_
