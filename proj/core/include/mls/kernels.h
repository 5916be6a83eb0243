#ifndef MLS_KERNELS_H_
#define MLS_KERNELS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mls/lda.h"
#include "mls/text.h"

namespace mls {

enum class Property { kTopicCoverage, kKeywordCoverage, kRedundancy };
enum class Metric { kSymmetricKl, kCosine };

std::string_view ToString(Property p);
std::string_view ToString(Metric m);
Property ParseProperty(std::string_view s);
Metric ParseMetric(std::string_view s);

// Additive floor applied to distributions before any KL divergence.
inline constexpr double kSmoothing = 1e-6;

// One interpretable attention head: an r x n matrix, the metric that compares
// a projected sentence with each row, and the head's weight in the multiplex.
struct Kernel {
  Property property = Property::kTopicCoverage;
  Metric metric = Metric::kSymmetricKl;
  double weight = 0.0;
  std::vector<Vector> matrix;
  // Column labels: the topic vocabulary for topic kernels, the key phrases
  // (space-joined) for keyword kernels, empty for the redundancy kernel.
  std::vector<std::string> labels;

  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }
};

// Throws std::invalid_argument if a kernel violates its shape/distribution
// invariants.
void ValidateKernel(const Kernel& kernel);

using Weights = std::array<double, 3>;

// Throws std::invalid_argument unless every weight is in [-1, 1] and the
// weights sum to 1 within `tolerance`.
void ValidateWeights(const Weights& w, double tolerance = 1e-9);

// The three heads in fixed order: topic coverage, keyword coverage,
// redundancy.
class Multiplex {
 public:
  static constexpr std::size_t kHeads = 3;

  Multiplex(Kernel topic, Kernel keyword, Kernel redundancy);

  const Kernel& head(std::size_t i) const { return kernels_.at(i); }
  const Kernel& topic() const { return kernels_[0]; }
  const Kernel& keyword() const { return kernels_[1]; }
  const Kernel& redundancy() const { return kernels_[2]; }

  Weights weights() const;
  Multiplex WithWeights(const Weights& w) const;
  Multiplex WithHead(std::size_t i, Kernel kernel) const;

 private:
  std::array<Kernel, kHeads> kernels_;
};

struct KernelOptions {
  LdaOptions lda;
  std::size_t topic_rows = 3;
  std::size_t keyword_count = 50;
};

// Rows are the word distributions of the `topic_rows` topics with the largest
// document mass (ties by topic index).
Kernel TopicKernelFromModel(const TopicModel& model, std::size_t topic_rows);
Kernel BuildTopicKernel(const Document& doc, const StopwordSet& stopwords,
                        const KernelOptions& options = {});

// 1 x k relative frequencies of the top RAKE phrases. Throws
// std::invalid_argument("no keywords extractable") when RAKE finds nothing.
Kernel BuildKeywordKernel(const Document& doc, const StopwordSet& stopwords,
                          std::size_t top_k = 50);

// One row per document sentence: its mean word embedding.
Kernel BuildRedundancyKernel(const Document& doc, const EmbeddingTable& table);

Multiplex BuildMultiplex(const Document& doc, const StopwordSet& stopwords,
                         const EmbeddingTable& table, const Weights& weights,
                         const KernelOptions& options = {});

// Permutes rows and columns of the matrix (labels are left in place, so the
// column semantics are destroyed).
Kernel ShuffleKernel(const Kernel& kernel, std::uint64_t seed);

Vector Smooth(std::span<const double> p, double epsilon = kSmoothing);
// KL(p||q) + KL(q||p); both arguments must be strictly positive.
double SymmetricKl(std::span<const double> p, std::span<const double> q);
// 0 when either vector is all zeros.
double Cosine(std::span<const double> a, std::span<const double> b);

double RelevanceFromRaw(Metric metric, double raw);

// Sum-normalised relevances computed from raw head outputs. KL heads are
// normalised in log space so tiny exp(-raw) values do not underflow. All-zero
// relevance yields the uniform distribution.
Vector NormalizeRelevances(Metric metric, std::span<const double> raws);

// Embeds sentences in a kernel's space and scores them against it. Holds
// lookup tables derived from the kernel, so build once per kernel.
class KernelProjector {
 public:
  KernelProjector(const Kernel& kernel, const EmbeddingTable& table);
  // For the KL heads, which need no embeddings.
  explicit KernelProjector(const Kernel& kernel);

  Vector Project(std::span<const std::string> tokens) const;
  // Mean distance/similarity of `repr` to the kernel rows: mean symmetric KL
  // for KL heads, mean cosine for the cosine head.
  double RawScore(std::span<const double> repr) const;
  double Relevance(std::span<const double> repr) const;

  double RawScoreOf(std::span<const std::string> tokens) const { return RawScore(Project(tokens)); }
  const Kernel& kernel() const { return *kernel_; }

 private:
  const Kernel* kernel_;
  const EmbeddingTable* table_;
  std::unordered_map<std::string, std::size_t> vocab_index_;
  std::vector<std::vector<std::string>> phrases_;
  std::vector<Vector> smoothed_rows_;
};

Vector ProjectSentence(const Kernel& kernel, const Sentence& sentence,
                       const EmbeddingTable& table);
double Relevance(const Kernel& kernel, std::span<const double> repr);

}  // namespace mls

#endif  // MLS_KERNELS_H_
