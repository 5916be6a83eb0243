#ifndef MLS_BASELINES_H_
#define MLS_BASELINES_H_

#include <cstdint>

#include "mls/decoder.h"
#include "mls/pagerank.h"
#include "mls/text.h"

namespace mls {

// Systematic sampling: start at a random sentence among the first k - 1, then
// take every k-th sentence. Stops before the first sentence that would exceed
// the budget, or at the end of the document.
SummaryResult BaselineA1(const Document& doc, std::size_t budget, std::size_t k = 3,
                         std::uint64_t seed = 1);
// Same walk from a fixed start index.
SummaryResult BaselineA1FromStart(const Document& doc, std::size_t budget, std::size_t k,
                                  std::size_t start);

// PageRank over the sentence-similarity graph; ranked sentences are taken
// while they fit, stopping at the first one that does not. Output is in
// document order.
SummaryResult BaselineA2(const Document& doc, std::size_t budget, const EmbeddingTable& table,
                         const PageRankOptions& pagerank = {});

}  // namespace mls

#endif  // MLS_BASELINES_H_
