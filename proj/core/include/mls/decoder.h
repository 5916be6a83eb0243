#ifndef MLS_DECODER_H_
#define MLS_DECODER_H_

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mls/attention.h"
#include "mls/kernels.h"
#include "mls/prototype.h"
#include "mls/text.h"

namespace mls {

// b = ceil(c * N). Throws std::invalid_argument unless 0 < c <= 1.
std::size_t BudgetTokens(const Document& doc, double compression);

// A contiguous run of document sentences [start, start + n) that can replace
// a prototype sentence.
struct ExpansionSet {
  std::size_t start = 0;
  std::size_t n = 0;
  double sim = 0.0;      // mean of (cos + 1) / 2 against the prototype sentence
  double overlap = 0.0;  // share of the prototype sentence's content words covered
  double score = 0.0;    // sim * overlap
  std::size_t repeats = 0;  // bigrams + trigrams it would repeat in the summary
  std::size_t token_count = 0;

  std::size_t end() const { return start + n; }
};

// Word bigrams and trigrams (punctuation dropped, within sentences) already
// present in a partial summary.
class RepetitionTracker {
 public:
  void Add(std::span<const std::string> tokens);
  // Bigrams + trigrams of `sentences` (taken in order) that repeat one seen
  // before, either in the summary or earlier in `sentences` themselves.
  std::size_t CountNewRepeats(std::span<const Sentence* const> sentences) const;

 private:
  std::unordered_set<std::string> seen_;
};

// Per-document state that does not depend on the multiplex weights: head
// scores of every document sentence, local attentions over the prototype,
// embedding similarities and content-word coverage used by the span search.
// `doc`, `prototype` and `table` must outlive the context.
class DecoderContext {
 public:
  DecoderContext(const Document& doc, const PrototypeSummary& prototype,
                 const Multiplex& multiplex, const EmbeddingTable& table,
                 const StopwordSet& stopwords);

  const Document& doc() const { return *doc_; }
  const PrototypeSummary& prototype() const { return *prototype_; }
  const HeadAttentions& locals() const { return locals_; }
  Metric head_metric(std::size_t h) const { return metrics_[h]; }
  // Raw head output (mean KL / mean cosine) of document sentence `k`.
  double sentence_raw(std::size_t h, std::size_t k) const { return sentence_raws_[h][k]; }
  double mean_sentence_length() const { return mean_sentence_length_; }

  // (cos(prototype sentence, doc sentence k) + 1) / 2.
  double Similarity(std::size_t pos, std::size_t k) const { return similarity_[pos][k]; }
  // Fraction of content words of prototype sentence `pos` present in
  // sentences [start, start + n).
  double Overlap(std::size_t pos, std::size_t start, std::size_t n) const;

 private:
  const Document* doc_;
  const PrototypeSummary* prototype_;
  std::array<Metric, Multiplex::kHeads> metrics_{};
  std::array<Vector, Multiplex::kHeads> sentence_raws_;
  HeadAttentions locals_;
  std::vector<Vector> similarity_;
  // coverage_[pos][k]: bitset over the distinct content words of prototype
  // sentence pos, set where the word occurs in document sentence k.
  std::vector<std::vector<std::vector<std::uint64_t>>> coverage_;
  std::vector<std::size_t> content_sizes_;
  double mean_sentence_length_ = 0.0;
};

// Best span for prototype position `pos`: scores every length-n span whose
// sentences are all unused and whose length is at most `max_tokens`, keeps
// the `beam_width` best by score (ties to lower start), then re-ranks those
// by ascending repeats, descending score, ascending start.
std::optional<ExpansionSet> FindExpansionSet(
    const DecoderContext& ctx, std::size_t pos, const std::vector<bool>& used, std::size_t n,
    std::size_t beam_width, const RepetitionTracker& summary,
    std::size_t max_tokens = std::numeric_limits<std::size_t>::max());

// P_c(s) = A^t[s]. Throws std::invalid_argument for a consumed position.
double CopyProbability(const AttentionState& state, std::size_t pos);

// P_e: per-head relevances of the span sentences, normalised over the span,
// mixed with the weights, softmaxed over the span and averaged. When
// `per_sentence` is given it receives the softmaxed mix.
double ExpandProbability(const DecoderContext& ctx, const Weights& weights,
                         const ExpansionSet& span, Vector* per_sentence = nullptr);

struct SwitchOutput {
  double p_out = 0.0;
  double alpha = 0.0;
};

// p_o = alpha * P_e + (1 - alpha) * P_c, alpha = 0 once the summary length
// reaches the budget and max(P_e, P_c) otherwise.
SwitchOutput SoftSwitch(double p_expand, double p_copy, std::size_t budget,
                        std::size_t len_so_far);

enum class Provenance { kCopied, kExpanded };
enum class StopReason { kBudgetReached, kAttentionExhausted, kNoCandidateFits };

std::string_view ToString(Provenance p);
std::string_view ToString(StopReason r);

struct SummaryItem {
  Provenance source = Provenance::kCopied;
  std::size_t prototype_index = 0;
  std::size_t span_start = 0;  // document sentence range [span_start, span_end)
  std::size_t span_end = 0;
  std::vector<std::string> tokens;
};

struct DecodeStep {
  Vector attention;  // A^t before the step
  std::size_t position = 0;
  double p_copy = 0.0;
  std::optional<double> p_expand;
  double alpha = 0.0;
  double p_out = 0.0;
  Provenance op = Provenance::kCopied;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
};

struct SummaryResult {
  std::vector<SummaryItem> items;  // ascending prototype_index
  std::size_t token_count = 0;
  std::size_t budget = 0;
  bool expansion_enabled = false;
  bool budget_infeasible = false;
  StopReason stop_reason = StopReason::kBudgetReached;
  Vector initial_attention;
  Vector final_attention;
  std::vector<DecodeStep> trace;

  std::size_t CountItems(Provenance p) const;
  // Document sentence indices covered by the summary, ascending.
  std::vector<std::size_t> SentenceIndices() const;
};

struct DecodeOptions {
  std::size_t beam_width = 4;
  bool allow_expansion = true;
};

// Budgeted copy/expand decoding. Expansion is only considered when the budget
// exceeds the prototype length; each step scores every alive prototype
// position that has a fitting action, picks the highest p_o, expands it when
// P_e >= P_c (or when only the expansion fits) and otherwise copies it.
SummaryResult Decode(const DecoderContext& ctx, const Weights& weights, std::size_t budget,
                     const DecodeOptions& options = {});

// Summary text in item order, sentences joined by single spaces.
std::string SummaryText(const Document& doc, const SummaryResult& result);

}  // namespace mls

#endif  // MLS_DECODER_H_
