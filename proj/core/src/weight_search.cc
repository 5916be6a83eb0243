#include "mls/weight_search.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mls/metrics.h"

namespace mls {
namespace {

constexpr double kBoundSlack = 1e-9;

// Removes accumulated binary noise so lattice values such as -0.7 are exact
// to 12 decimals.
double Snap(double x) { return std::round(x * 1e12) / 1e12; }

}  // namespace

std::vector<Weights> WeightGrid::Points() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (lower < -1.0 - kBoundSlack || upper > 1.0 + kBoundSlack || lower > upper) {
    throw std::invalid_argument("grid range must lie within [-1, 1]");
  }
  std::vector<double> axis;
  for (std::size_t i = 0;; ++i) {
    const double w = Snap(lower + static_cast<double>(i) * step);
    if (w > upper + kBoundSlack) break;
    axis.push_back(w);
  }
  std::vector<Weights> points;
  for (double w1 : axis) {
    for (double w2 : axis) {
      const double w3 = Snap(1.0 - w1 - w2);
      if (w3 < -1.0 - kBoundSlack || w3 > 1.0 + kBoundSlack) continue;
      points.push_back({w1, w2, std::clamp(w3, -1.0, 1.0)});
    }
  }
  return points;
}

double MeanRouge1(const PreparedCorpus& corpus, const Weights& weights, double c_eval) {
  if (corpus.empty()) throw std::invalid_argument("empty validation set");
  double total = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& prepared = corpus.doc(i);
    const SummaryResult result = prepared.Summarize(c_eval, weights);
    total += RougeN(SummaryMetricTokens(prepared.doc(), result), corpus.gold_tokens(i), 1).f1;
  }
  return total / static_cast<double>(corpus.size());
}

WeightSearchResult GridSearchWeights(const PreparedCorpus& validation, double c_eval,
                                     const WeightGrid& grid, unsigned threads) {
  if (validation.empty()) throw std::invalid_argument("empty validation set");
  if (!(c_eval > 0.0 && c_eval <= 1.0)) {
    throw std::invalid_argument("evaluation compression must be in (0, 1]");
  }
  const auto points = grid.Points();
  if (points.empty()) throw std::invalid_argument("weight grid has no admissible points");

  WeightSearchResult result;
  result.step = grid.step;
  result.c_eval = c_eval;
  result.scores.resize(points.size());
  ParallelFor(points.size(), threads, [&](std::size_t i) {
    result.scores[i] = {points[i], MeanRouge1(validation, points[i], c_eval)};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i].rouge1 > result.scores[best].rouge1) best = i;
  }
  result.weights = result.scores[best].weights;
  result.rouge1 = result.scores[best].rouge1;
  return result;
}

WeightSearchResult GridSearchWeights(std::span<const CorpusPair> validation,
                                     const EmbeddingTable& table, const StopwordSet& stopwords,
                                     const PipelineConfig& config, double c_eval,
                                     const WeightGrid& grid, unsigned threads) {
  if (validation.empty()) throw std::invalid_argument("empty validation set");
  const PreparedCorpus corpus(validation, table, stopwords, config, threads);
  return GridSearchWeights(corpus, c_eval, grid, threads);
}

}  // namespace mls
