#ifndef MLS_EVALUATION_H_
#define MLS_EVALUATION_H_

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mls/pipeline.h"
#include "mls/resources.h"
#include "mls/text.h"

namespace mls {

enum class Method { kMls, kA1, kA2 };

std::string_view ToString(Method m);
Method ParseMethod(std::string_view s);

inline constexpr std::array<double, 5> kStandardCompressions{1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4,
                                                          1.0 / 2};

enum class MetricId {
  kRouge1,
  kRouge2,
  kRougeL,
  kMeteor,
  kTopicKl,
  kSentimentKl,
  kDeltaCoherence,
  kAbstractiveness,
};
inline constexpr std::size_t kNumMetrics = 8;
inline constexpr std::array<MetricId, kNumMetrics> kAllMetrics{
    MetricId::kRouge1,  MetricId::kRouge2,      MetricId::kRougeL,         MetricId::kMeteor,
    MetricId::kTopicKl, MetricId::kSentimentKl, MetricId::kDeltaCoherence, MetricId::kAbstractiveness};

std::string_view ToString(MetricId m);
MetricId ParseMetricId(std::string_view s);

using MetricValues = std::array<double, kNumMetrics>;

struct EvalRow {
  std::string doc_id;
  Method method = Method::kMls;
  double compression = 0.0;
  std::size_t budget = 0;
  std::size_t token_count = 0;
  MetricValues values{};
};

struct EvalCell {
  Method method = Method::kMls;
  double compression = 0.0;
  std::size_t documents = 0;
  MetricValues means{};
};

struct EvalReport {
  std::vector<EvalRow> rows;    // document-major, then method, then compression
  std::vector<EvalCell> cells;  // method-major, then compression
};

struct EvalOptions {
  std::vector<Method> methods{Method::kMls, Method::kA1, Method::kA2};
  std::vector<double> compressions{kStandardCompressions.begin(), kStandardCompressions.end()};
  std::size_t a1_stride = 3;
  std::uint64_t a1_seed = 1;
  unsigned threads = 0;
};

// Every (document, method, compression) cell with all metrics, plus per
// (method, compression) means over documents.
EvalReport EvaluateCorpus(std::span<const CorpusPair> corpus, const EmbeddingTable& table,
                          const StopwordSet& stopwords, const PipelineConfig& config,
                          const EvalOptions& options = {},
                          const resources::ValenceLexicon& lexicon = resources::DefaultValenceLexicon());

void WriteCsv(const EvalReport& report, std::ostream& out);
// One block per metric: methods as rows, compressions as columns.
std::string FormatTable(const EvalReport& report);
// Line plot of a metric's cell means against compression, one line per method.
std::string PlotSvg(const EvalReport& report, MetricId metric);

}  // namespace mls

#endif  // MLS_EVALUATION_H_
