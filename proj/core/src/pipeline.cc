#include "mls/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mls/metrics.h"

namespace mls {

PreparedDocument::PreparedDocument(Document doc, const EmbeddingTable& table,
                                   const StopwordSet& stopwords, const PipelineConfig& config)
    : doc_(std::move(doc)),
      multiplex_(doc_.empty()
                     ? throw std::invalid_argument("document has no sentences")
                     : BuildMultiplex(doc_, stopwords, table, config.weights, config.kernels)),
      config_(config) {
  Init(table, stopwords);
}

PreparedDocument::PreparedDocument(Document doc, Multiplex multiplex, const EmbeddingTable& table,
                                   const StopwordSet& stopwords, const PipelineConfig& config)
    : doc_(std::move(doc)), multiplex_(multiplex.WithWeights(config.weights)), config_(config) {
  if (doc_.empty()) throw std::invalid_argument("document has no sentences");
  Init(table, stopwords);
}

void PreparedDocument::Init(const EmbeddingTable& table, const StopwordSet& stopwords) {
  ValidateWeights(config_.weights);
  std::size_t shortest = doc_.sentences.front().token_count();
  for (const auto& s : doc_.sentences) shortest = std::min(shortest, s.token_count());
  const double floor_ratio =
      static_cast<double>(shortest) / static_cast<double>(std::max<std::size_t>(doc_.token_count, 1));
  prototype_ratio_ = std::clamp(std::max(config_.prototype_ratio, floor_ratio), 1e-9, 1.0);

  switch (config_.prototype) {
    case PrototypeStrategy::kTextRank:
      prototype_ = TextRankPrototype(doc_, table, prototype_ratio_, config_.pagerank);
      break;
    case PrototypeStrategy::kGreedy:
      prototype_ = GreedyPrototype(doc_, multiplex_.keyword(), prototype_ratio_);
      break;
  }
  context_ = std::make_unique<DecoderContext>(doc_, prototype_, multiplex_, table, stopwords);
}

SummaryResult PreparedDocument::Summarize(double compression) const {
  return Summarize(compression, config_.weights);
}

SummaryResult PreparedDocument::Summarize(double compression, const Weights& weights) const {
  return SummarizeTokens(BudgetTokens(doc_, compression), weights);
}

SummaryResult PreparedDocument::SummarizeTokens(std::size_t budget) const {
  return SummarizeTokens(budget, config_.weights);
}

SummaryResult PreparedDocument::SummarizeTokens(std::size_t budget, const Weights& weights) const {
  ValidateWeights(weights);
  return Decode(*context_, weights, budget, config_.decode);
}

PreparedCorpus::PreparedCorpus(std::span<const CorpusPair> pairs, const EmbeddingTable& table,
                               const StopwordSet& stopwords, const PipelineConfig& config,
                               unsigned threads)
    : docs_(pairs.size()), gold_(pairs.size()) {
  ParallelFor(pairs.size(), threads, [&](std::size_t i) {
    docs_[i] = std::make_unique<PreparedDocument>(pairs[i].document, table, stopwords, config);
    gold_[i] = MetricTokens(pairs[i].gold_summary);
  });
}

std::vector<std::string> SummaryMetricTokens(const Document& doc, const SummaryResult& result) {
  std::vector<std::string> out;
  for (const auto& item : result.items) {
    for (std::size_t k = item.span_start; k < item.span_end; ++k) {
      for (const auto& t : doc.sentences[k].tokens) {
        if (!IsPunctuation(t)) out.push_back(t);
      }
    }
  }
  return out;
}

void ParallelFor(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace mls
