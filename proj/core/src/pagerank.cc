#include "mls/pagerank.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mls/kernels.h"

namespace mls {

std::vector<Vector> SentenceSimilarityGraph(const Document& doc, const EmbeddingTable& table) {
  const std::size_t n = doc.sentences.size();
  std::vector<Vector> embeddings;
  embeddings.reserve(n);
  for (const auto& s : doc.sentences) embeddings.push_back(EmbedSentence(s, table));
  std::vector<Vector> graph(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = std::clamp(Cosine(embeddings[i], embeddings[j]), 0.0, 1.0);
      graph[i][j] = w;
      graph[j][i] = w;
    }
  }
  return graph;
}

Vector WeightedPageRank(const std::vector<Vector>& weights, const PageRankOptions& options) {
  const std::size_t n = weights.size();
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  Vector out_weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out_weight[j] = std::accumulate(weights[j].begin(), weights[j].end(), 0.0);
  }
  Vector rank(n, 1.0 / nd);
  Vector next(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (out_weight[j] <= 0.0) dangling += rank[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double inflow = dangling / nd;
      for (std::size_t j = 0; j < n; ++j) {
        if (out_weight[j] > 0.0 && weights[j][i] != 0.0) {
          inflow += weights[j][i] / out_weight[j] * rank[j];
        }
      }
      next[i] = (1.0 - options.damping) / nd + options.damping * inflow;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < options.tolerance) break;
  }
  return rank;
}

std::vector<std::size_t> RankByScore(const Vector& scores) {
  // Quantising keeps the comparator a strict weak ordering while letting
  // floating-point near-ties fall back to index order.
  std::vector<long long> keys(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    keys[i] = std::llround(std::clamp(scores[i], -1e6, 1e6) * 1e12);
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  return order;
}

}  // namespace mls
