#ifndef MLS_PIPELINE_H_
#define MLS_PIPELINE_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mls/decoder.h"
#include "mls/kernels.h"
#include "mls/pagerank.h"
#include "mls/prototype.h"
#include "mls/text.h"

namespace mls {

// Topic and keyword coverage positive, redundancy negative.
inline constexpr Weights kDefaultWeights{0.6, 0.6, -0.2};

struct PipelineConfig {
  PrototypeStrategy prototype = PrototypeStrategy::kTextRank;
  double prototype_ratio = kDefaultPrototypeRatio;
  KernelOptions kernels;
  PageRankOptions pagerank;
  Weights weights = kDefaultWeights;
  DecodeOptions decode;
};

// A document with its multiplex, prototype and decoder context built once.
// Summaries at any budget and with any weights reuse that state.
class PreparedDocument {
 public:
  PreparedDocument(Document doc, const EmbeddingTable& table, const StopwordSet& stopwords,
                   const PipelineConfig& config);
  // Uses precomputed kernels (their weights are replaced by config.weights).
  PreparedDocument(Document doc, Multiplex multiplex, const EmbeddingTable& table,
                   const StopwordSet& stopwords, const PipelineConfig& config);

  PreparedDocument(const PreparedDocument&) = delete;
  PreparedDocument& operator=(const PreparedDocument&) = delete;

  const Document& doc() const { return doc_; }
  const Multiplex& multiplex() const { return multiplex_; }
  const PrototypeSummary& prototype() const { return prototype_; }
  const DecoderContext& context() const { return *context_; }
  const PipelineConfig& config() const { return config_; }
  // Ratio actually used for the prototype: the configured one, raised when
  // needed so that the shortest sentence fits.
  double prototype_ratio() const { return prototype_ratio_; }

  SummaryResult Summarize(double compression) const;
  SummaryResult Summarize(double compression, const Weights& weights) const;
  SummaryResult SummarizeTokens(std::size_t budget) const;
  SummaryResult SummarizeTokens(std::size_t budget, const Weights& weights) const;

 private:
  void Init(const EmbeddingTable& table, const StopwordSet& stopwords);

  Document doc_;
  Multiplex multiplex_;
  PipelineConfig config_;
  double prototype_ratio_ = 0.0;
  PrototypeSummary prototype_;
  std::unique_ptr<DecoderContext> context_;
};

// Validation/evaluation documents prepared once, with their gold summaries as
// metric tokens.
class PreparedCorpus {
 public:
  PreparedCorpus(std::span<const CorpusPair> pairs, const EmbeddingTable& table,
                 const StopwordSet& stopwords, const PipelineConfig& config,
                 unsigned threads = 0);

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const PreparedDocument& doc(std::size_t i) const { return *docs_[i]; }
  const std::vector<std::string>& gold_tokens(std::size_t i) const { return gold_[i]; }

 private:
  std::vector<std::unique_ptr<PreparedDocument>> docs_;
  std::vector<std::vector<std::string>> gold_;
};

// Metric tokens of a summary: its sentences' tokens without punctuation.
std::vector<std::string> SummaryMetricTokens(const Document& doc, const SummaryResult& result);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Exceptions are rethrown on the calling thread.
void ParallelFor(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace mls

#endif  // MLS_PIPELINE_H_
