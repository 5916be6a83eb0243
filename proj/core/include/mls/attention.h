#ifndef MLS_ATTENTION_H_
#define MLS_ATTENTION_H_

#include <array>
#include <span>
#include <vector>

#include "mls/kernels.h"
#include "mls/prototype.h"

namespace mls {

// Sentence-level attention over prototype positions during decoding.
class AttentionState {
 public:
  AttentionState() = default;
  // `probs` must be a distribution; every position starts alive.
  explicit AttentionState(Vector probs);

  const Vector& probs() const { return probs_; }
  const std::vector<bool>& alive() const { return alive_; }
  bool alive(std::size_t pos) const { return alive_.at(pos); }
  double prob(std::size_t pos) const { return probs_.at(pos); }
  std::size_t size() const { return probs_.size(); }
  std::size_t alive_count() const;
  bool exhausted() const { return alive_count() == 0; }

  // Zeroes `pos` and renormalises the surviving mass (uniform over survivors
  // if it had all underflowed to zero). Throws std::invalid_argument if `pos`
  // is already consumed or out of range.
  AttentionState Consume(std::size_t pos) const;

  // Highest-probability alive position (ties to the lower index), or size()
  // when exhausted.
  std::size_t Argmax() const;

 private:
  Vector probs_;
  std::vector<bool> alive_;
};

// Local attention of one head over the prototype: per-sentence relevance,
// sum-normalised. Throws std::invalid_argument on an empty prototype.
Vector LocalAttention(const KernelProjector& head, const PrototypeSummary& prototype);
Vector LocalAttention(const Kernel& kernel, const PrototypeSummary& prototype,
                      const EmbeddingTable& table);

using HeadAttentions = std::array<Vector, Multiplex::kHeads>;

// Pre-softmax mix (1/m) * sum_i w_i * C_i.
Vector MixHeads(const Weights& weights, const HeadAttentions& locals);

// softmax((1/m) * sum_i w_i * C_i). Throws std::invalid_argument on length
// mismatch.
AttentionState GlobalAttention(const Weights& weights, const HeadAttentions& locals);
AttentionState GlobalAttention(const Multiplex& multiplex, const HeadAttentions& locals);

Vector Softmax(std::span<const double> x);

}  // namespace mls

#endif  // MLS_ATTENTION_H_
