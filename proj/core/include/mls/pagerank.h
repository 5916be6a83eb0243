#ifndef MLS_PAGERANK_H_
#define MLS_PAGERANK_H_

#include <vector>

#include "mls/text.h"

namespace mls {

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-8;  // L1 change between iterations
  std::size_t max_iterations = 200;
};

// Complete undirected sentence graph; edge weight is the cosine similarity of
// sentence embeddings clamped to [0, 1], no self loops.
std::vector<Vector> SentenceSimilarityGraph(const Document& doc, const EmbeddingTable& table);

// Weighted PageRank by power iteration. Nodes with no outgoing weight spread
// their rank uniformly.
Vector WeightedPageRank(const std::vector<Vector>& weights, const PageRankOptions& options = {});

// Node indices by descending score; scores equal to 12 decimal places count
// as ties and keep the lower index first.
std::vector<std::size_t> RankByScore(const Vector& scores);

}  // namespace mls

#endif  // MLS_PAGERANK_H_
