#include "mls/kernels.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "mls/rake.h"

namespace mls {
namespace {

// Counts as relative frequencies; all-zero stays all-zero.
Vector Normalized(Vector counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total > 0.0) {
    for (double& x : counts) x /= total;
  }
  return counts;
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

const EmbeddingTable& EmptyTable() {
  static const EmbeddingTable kEmpty;
  return kEmpty;
}

bool AllZero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

std::string_view ToString(Property p) {
  switch (p) {
    case Property::kTopicCoverage: return "topic_coverage";
    case Property::kKeywordCoverage: return "keyword_coverage";
    case Property::kRedundancy: return "redundancy";
  }
  return "unknown";
}

std::string_view ToString(Metric m) {
  return m == Metric::kSymmetricKl ? "symmetric_kl" : "cosine";
}

Property ParseProperty(std::string_view s) {
  if (s == "topic_coverage") return Property::kTopicCoverage;
  if (s == "keyword_coverage") return Property::kKeywordCoverage;
  if (s == "redundancy") return Property::kRedundancy;
  throw FormatError("unknown kernel property '" + std::string(s) + "'");
}

Metric ParseMetric(std::string_view s) {
  if (s == "symmetric_kl") return Metric::kSymmetricKl;
  if (s == "cosine") return Metric::kCosine;
  throw FormatError("unknown kernel metric '" + std::string(s) + "'");
}

void ValidateKernel(const Kernel& kernel) {
  const std::string name(ToString(kernel.property));
  if (kernel.rows() == 0 || kernel.cols() == 0) {
    throw std::invalid_argument(name + " kernel is empty");
  }
  for (const auto& row : kernel.matrix) {
    if (row.size() != kernel.cols()) throw std::invalid_argument(name + " kernel is ragged");
  }
  const Metric expected =
      kernel.property == Property::kRedundancy ? Metric::kCosine : Metric::kSymmetricKl;
  if (kernel.metric != expected) throw std::invalid_argument(name + " kernel has wrong metric");
  if (kernel.metric == Metric::kSymmetricKl) {
    for (const auto& row : kernel.matrix) {
      double sum = 0.0;
      for (double x : row) {
        if (x < 0.0) throw std::invalid_argument(name + " kernel row has a negative entry");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(name + " kernel row is not a distribution");
      }
    }
    if (!kernel.labels.empty() && kernel.labels.size() != kernel.cols()) {
      throw std::invalid_argument(name + " kernel label count does not match columns");
    }
  }
}

void ValidateWeights(const Weights& w, double tolerance) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= -1.0 - tolerance && x <= 1.0 + tolerance)) {
      throw std::invalid_argument("multiplex weight outside [-1, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw std::invalid_argument("multiplex weights must sum to 1");
  }
}

Multiplex::Multiplex(Kernel topic, Kernel keyword, Kernel redundancy)
    : kernels_{std::move(topic), std::move(keyword), std::move(redundancy)} {
  const Property order[kHeads] = {Property::kTopicCoverage, Property::kKeywordCoverage,
                                  Property::kRedundancy};
  for (std::size_t i = 0; i < kHeads; ++i) {
    if (kernels_[i].property != order[i]) {
      throw std::invalid_argument("multiplex heads must be topic, keyword, redundancy");
    }
    ValidateKernel(kernels_[i]);
  }
  ValidateWeights(weights());
}

Weights Multiplex::weights() const {
  return {kernels_[0].weight, kernels_[1].weight, kernels_[2].weight};
}

Multiplex Multiplex::WithWeights(const Weights& w) const {
  ValidateWeights(w);
  Multiplex copy = *this;
  for (std::size_t i = 0; i < kHeads; ++i) copy.kernels_[i].weight = w[i];
  return copy;
}

Multiplex Multiplex::WithHead(std::size_t i, Kernel kernel) const {
  Multiplex copy = *this;
  kernel.weight = kernels_.at(i).weight;
  if (kernel.property != kernels_[i].property) {
    throw std::invalid_argument("replacement kernel has a different property");
  }
  copy.kernels_[i] = std::move(kernel);
  return copy;
}

Kernel TopicKernelFromModel(const TopicModel& model, std::size_t topic_rows) {
  if (model.num_topics < topic_rows) {
    spdlog::warn("topic kernel: only {} topics available, {} requested", model.num_topics,
                 topic_rows);
    topic_rows = model.num_topics;
  }
  std::vector<std::size_t> order(model.num_topics);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.doc_topic[a] > model.doc_topic[b];
  });
  Kernel kernel;
  kernel.property = Property::kTopicCoverage;
  kernel.metric = Metric::kSymmetricKl;
  kernel.labels = model.vocab;
  for (std::size_t r = 0; r < topic_rows; ++r) kernel.matrix.push_back(model.topic_word[order[r]]);
  return kernel;
}

Kernel BuildTopicKernel(const Document& doc, const StopwordSet& stopwords,
                        const KernelOptions& options) {
  if (doc.empty()) throw std::invalid_argument("topic kernel: empty document");
  LdaOptions lda = options.lda;
  lda.num_topics = std::max(lda.num_topics, options.topic_rows);
  return TopicKernelFromModel(LdaGibbs(doc, stopwords, lda), options.topic_rows);
}

Kernel BuildKeywordKernel(const Document& doc, const StopwordSet& stopwords, std::size_t top_k) {
  if (doc.empty()) throw std::invalid_argument("keyword kernel: empty document");
  const auto phrases = ExtractKeyPhrases(doc, stopwords, top_k);
  if (phrases.empty()) throw std::invalid_argument("no keywords extractable");
  Kernel kernel;
  kernel.property = Property::kKeywordCoverage;
  kernel.metric = Metric::kSymmetricKl;
  double total = 0.0;
  for (const auto& p : phrases) total += static_cast<double>(p.frequency);
  Vector row;
  for (const auto& p : phrases) {
    row.push_back(static_cast<double>(p.frequency) / total);
    kernel.labels.push_back(p.Text());
  }
  kernel.matrix.push_back(std::move(row));
  return kernel;
}

Kernel BuildRedundancyKernel(const Document& doc, const EmbeddingTable& table) {
  if (doc.empty()) throw std::invalid_argument("redundancy kernel: empty document");
  Kernel kernel;
  kernel.property = Property::kRedundancy;
  kernel.metric = Metric::kCosine;
  for (const auto& s : doc.sentences) kernel.matrix.push_back(EmbedSentence(s, table));
  return kernel;
}

Multiplex BuildMultiplex(const Document& doc, const StopwordSet& stopwords,
                         const EmbeddingTable& table, const Weights& weights,
                         const KernelOptions& options) {
  ValidateWeights(weights);
  Kernel topic = BuildTopicKernel(doc, stopwords, options);
  Kernel keyword = BuildKeywordKernel(doc, stopwords, options.keyword_count);
  Kernel redundancy = BuildRedundancyKernel(doc, table);
  topic.weight = weights[0];
  keyword.weight = weights[1];
  redundancy.weight = weights[2];
  return Multiplex(std::move(topic), std::move(keyword), std::move(redundancy));
}

Kernel ShuffleKernel(const Kernel& kernel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> rows(kernel.rows());
  std::vector<std::size_t> cols(kernel.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  Kernel out = kernel;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.matrix[r][c] = kernel.matrix[rows[r]][cols[c]];
    }
  }
  return out;
}

Vector Smooth(std::span<const double> p, double epsilon) {
  Vector out(p.begin(), p.end());
  double sum = 0.0;
  for (double& x : out) {
    x += epsilon;
    sum += x;
  }
  for (double& x : out) x /= sum;
  return out;
}

double SymmetricKl(std::span<const double> p, std::span<const double> q) {
  assert(p.size() == q.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    assert(p[i] > 0.0 && q[i] > 0.0);
    // p log(p/q) + q log(q/p) = (p - q) log(p/q): symmetric by construction.
    d += (p[i] - q[i]) * (std::log(p[i]) - std::log(q[i]));
  }
  return d;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double RelevanceFromRaw(Metric metric, double raw) {
  return metric == Metric::kSymmetricKl ? std::exp(-raw) : (raw + 1.0) / 2.0;
}

Vector NormalizeRelevances(Metric metric, std::span<const double> raws) {
  Vector out(raws.size(), 0.0);
  if (raws.empty()) return out;
  if (metric == Metric::kSymmetricKl) {
    const double lowest = *std::min_element(raws.begin(), raws.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < raws.size(); ++i) {
      out[i] = std::exp(-(raws[i] - lowest));
      sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    out[i] = std::max(0.0, RelevanceFromRaw(metric, raws[i]));
    sum += out[i];
  }
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  } else {
    for (double& x : out) x /= sum;
  }
  return out;
}

KernelProjector::KernelProjector(const Kernel& kernel, const EmbeddingTable& table)
    : kernel_(&kernel), table_(&table) {
  switch (kernel.property) {
    case Property::kTopicCoverage:
      for (std::size_t i = 0; i < kernel.labels.size(); ++i) vocab_index_.emplace(kernel.labels[i], i);
      break;
    case Property::kKeywordCoverage:
      for (const auto& label : kernel.labels) phrases_.push_back(SplitWords(label));
      break;
    case Property::kRedundancy:
      break;
  }
  if (kernel.metric == Metric::kSymmetricKl) {
    for (const auto& row : kernel.matrix) smoothed_rows_.push_back(Smooth(row));
  }
}

KernelProjector::KernelProjector(const Kernel& kernel)
    : KernelProjector(kernel, EmptyTable()) {}

Vector KernelProjector::Project(std::span<const std::string> tokens) const {
  switch (kernel_->property) {
    case Property::kTopicCoverage: {
      Vector counts(kernel_->cols(), 0.0);
      for (const auto& t : tokens) {
        if (auto it = vocab_index_.find(t); it != vocab_index_.end() && it->second < counts.size()) {
          counts[it->second] += 1.0;
        }
      }
      return Smooth(Normalized(std::move(counts)));
    }
    case Property::kKeywordCoverage: {
      Vector counts(kernel_->cols(), 0.0);
      for (std::size_t i = 0; i < phrases_.size() && i < counts.size(); ++i) {
        counts[i] = static_cast<double>(CountOccurrences(tokens, phrases_[i]));
      }
      return Smooth(Normalized(std::move(counts)));
    }
    case Property::kRedundancy:
      return EmbedTokens(tokens, *table_);
  }
  return {};
}

double KernelProjector::RawScore(std::span<const double> repr) const {
  double total = 0.0;
  if (kernel_->metric == Metric::kSymmetricKl) {
    for (const auto& row : smoothed_rows_) total += SymmetricKl(repr, row);
    return total / static_cast<double>(smoothed_rows_.size());
  }
  if (AllZero(repr)) return 0.0;
  for (const auto& row : kernel_->matrix) total += Cosine(repr, row);
  return total / static_cast<double>(kernel_->rows());
}

double KernelProjector::Relevance(std::span<const double> repr) const {
  return RelevanceFromRaw(kernel_->metric, RawScore(repr));
}

Vector ProjectSentence(const Kernel& kernel, const Sentence& sentence, const EmbeddingTable& table) {
  return KernelProjector(kernel, table).Project(sentence.tokens);
}

double Relevance(const Kernel& kernel, std::span<const double> repr) {
  return KernelProjector(kernel).Relevance(repr);
}

}  // namespace mls
