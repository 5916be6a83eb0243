#ifndef MLS_WEIGHT_SEARCH_H_
#define MLS_WEIGHT_SEARCH_H_

#include <span>
#include <vector>

#include "mls/kernels.h"
#include "mls/pipeline.h"

namespace mls {

// Lattice for (w1, w2): lower + i * step for i = 0, 1, ... up to `upper`;
// w3 = 1 - w1 - w2 and points with w3 outside [-1, 1] are dropped.
struct WeightGrid {
  double step = 0.1;
  double lower = -1.0;
  double upper = 1.0;

  // In lexicographic (w1, w2) order. Throws std::invalid_argument for a
  // non-positive step or a range outside [-1, 1].
  std::vector<Weights> Points() const;
};

inline constexpr double kDefaultEvalCompression = 0.25;

struct GridScore {
  Weights weights{};
  double rouge1 = 0.0;
};

struct WeightSearchResult {
  Weights weights{};
  double rouge1 = 0.0;
  double step = 0.0;
  double c_eval = 0.0;
  std::vector<GridScore> scores;  // every grid point, in grid order
};

// Mean ROUGE-1 F1 of the decoded summaries against the gold summaries.
double MeanRouge1(const PreparedCorpus& corpus, const Weights& weights, double c_eval);

// Exhaustive search; ties keep the lexicographically smallest (w1, w2).
// Throws std::invalid_argument for an empty validation set or grid.
WeightSearchResult GridSearchWeights(const PreparedCorpus& validation, double c_eval,
                                     const WeightGrid& grid = {}, unsigned threads = 0);
WeightSearchResult GridSearchWeights(std::span<const CorpusPair> validation,
                                     const EmbeddingTable& table, const StopwordSet& stopwords,
                                     const PipelineConfig& config, double c_eval,
                                     const WeightGrid& grid = {}, unsigned threads = 0);

}  // namespace mls

#endif  // MLS_WEIGHT_SEARCH_H_
