#include "mls/attention.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mls {

AttentionState::AttentionState(Vector probs)
    : probs_(std::move(probs)), alive_(probs_.size(), true) {}

std::size_t AttentionState::alive_count() const {
  return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true));
}

AttentionState AttentionState::Consume(std::size_t pos) const {
  if (pos >= probs_.size()) throw std::invalid_argument("consume: position out of range");
  if (!alive_[pos]) throw std::invalid_argument("consume: position already consumed");
  AttentionState next = *this;
  next.alive_[pos] = false;
  next.probs_[pos] = 0.0;
  double remaining = 0.0;
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (next.alive_[i]) {
      remaining += next.probs_[i];
      ++survivors;
    }
  }
  if (survivors == 0) return next;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!next.alive_[i]) continue;
    next.probs_[i] = remaining > 0.0 ? next.probs_[i] / remaining
                                     : 1.0 / static_cast<double>(survivors);
  }
  return next;
}

std::size_t AttentionState::Argmax() const {
  std::size_t best = probs_.size();
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (alive_[i] && (best == probs_.size() || probs_[i] > probs_[best])) best = i;
  }
  return best;
}

Vector LocalAttention(const KernelProjector& head, const PrototypeSummary& prototype) {
  if (prototype.empty()) throw std::invalid_argument("local attention: empty prototype");
  Vector raws;
  raws.reserve(prototype.size());
  for (const auto& item : prototype.sentences) raws.push_back(head.RawScoreOf(item.sentence.tokens));
  return NormalizeRelevances(head.kernel().metric, raws);
}

Vector LocalAttention(const Kernel& kernel, const PrototypeSummary& prototype,
                      const EmbeddingTable& table) {
  return LocalAttention(KernelProjector(kernel, table), prototype);
}

Vector MixHeads(const Weights& weights, const HeadAttentions& locals) {
  const std::size_t n = locals[0].size();
  for (const auto& c : locals) {
    if (c.size() != n) throw std::invalid_argument("global attention: local length mismatch");
  }
  Vector mixed(n, 0.0);
  for (std::size_t h = 0; h < Multiplex::kHeads; ++h) {
    for (std::size_t i = 0; i < n; ++i) mixed[i] += weights[h] * locals[h][i];
  }
  for (double& x : mixed) x /= static_cast<double>(Multiplex::kHeads);
  return mixed;
}

Vector Softmax(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

AttentionState GlobalAttention(const Weights& weights, const HeadAttentions& locals) {
  return AttentionState(Softmax(MixHeads(weights, locals)));
}

AttentionState GlobalAttention(const Multiplex& multiplex, const HeadAttentions& locals) {
  return GlobalAttention(multiplex.weights(), locals);
}

}  // namespace mls
