#include "mls/decoder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace mls {
namespace {

constexpr char kJoin = '\x1f';

std::vector<std::string> NgramKeys(std::span<const std::string> tokens) {
  std::vector<const std::string*> words;
  for (const auto& t : tokens) {
    if (!IsPunctuation(t)) words.push_back(&t);
  }
  std::vector<std::string> keys;
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      std::string key(1, static_cast<char>('0' + n));
      for (std::size_t j = 0; j < n; ++j) {
        key.push_back(kJoin);
        key += *words[i + j];
      }
      keys.push_back(std::move(key));
    }
  }
  return keys;
}

// Beam order: higher score first, then lower start.
bool BeamBefore(const ExpansionSet& a, const ExpansionSet& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.start < b.start;
}

}  // namespace

std::size_t BudgetTokens(const Document& doc, double compression) {
  if (!(compression > 0.0 && compression <= 1.0)) {
    throw std::invalid_argument("compression budget must be in (0, 1]");
  }
  return FractionOfTokens(compression, doc.token_count);
}

void RepetitionTracker::Add(std::span<const std::string> tokens) {
  for (auto& key : NgramKeys(tokens)) seen_.insert(std::move(key));
}

std::size_t RepetitionTracker::CountNewRepeats(std::span<const Sentence* const> sentences) const {
  std::unordered_set<std::string> local;
  std::size_t repeats = 0;
  for (const Sentence* s : sentences) {
    for (auto& key : NgramKeys(s->tokens)) {
      if (seen_.contains(key) || local.contains(key)) {
        ++repeats;
      } else {
        local.insert(std::move(key));
      }
    }
  }
  return repeats;
}

DecoderContext::DecoderContext(const Document& doc, const PrototypeSummary& prototype,
                               const Multiplex& multiplex, const EmbeddingTable& table,
                               const StopwordSet& stopwords)
    : doc_(&doc), prototype_(&prototype) {
  if (prototype.empty()) throw std::invalid_argument("decoder: empty prototype");
  const std::size_t D = doc.sentences.size();
  for (const auto& item : prototype.sentences) {
    if (item.doc_index >= D) throw std::invalid_argument("decoder: prototype index out of range");
  }
  mean_sentence_length_ = D == 0 ? 0.0 : static_cast<double>(doc.token_count) / static_cast<double>(D);

  for (std::size_t h = 0; h < Multiplex::kHeads; ++h) {
    const KernelProjector projector(multiplex.head(h), table);
    metrics_[h] = multiplex.head(h).metric;
    sentence_raws_[h].resize(D);
    for (std::size_t k = 0; k < D; ++k) {
      sentence_raws_[h][k] = projector.RawScoreOf(doc.sentences[k].tokens);
    }
    Vector raws;
    for (const auto& item : prototype.sentences) raws.push_back(sentence_raws_[h][item.doc_index]);
    locals_[h] = NormalizeRelevances(metrics_[h], raws);
  }

  std::vector<Vector> embeddings;
  embeddings.reserve(D);
  for (const auto& s : doc.sentences) embeddings.push_back(EmbedSentence(s, table));

  std::vector<std::unordered_set<std::string>> content(D);
  for (std::size_t k = 0; k < D; ++k) {
    for (auto& t : ContentTokens(doc.sentences[k].tokens, stopwords)) content[k].insert(std::move(t));
  }

  const std::size_t P = prototype.size();
  similarity_.assign(P, Vector(D, 0.0));
  coverage_.resize(P);
  content_sizes_.resize(P);
  for (std::size_t pos = 0; pos < P; ++pos) {
    const std::size_t src = prototype.sentences[pos].doc_index;
    for (std::size_t k = 0; k < D; ++k) {
      similarity_[pos][k] = (Cosine(embeddings[src], embeddings[k]) + 1.0) / 2.0;
    }
    std::vector<std::string> words(content[src].begin(), content[src].end());
    std::sort(words.begin(), words.end());
    content_sizes_[pos] = words.size();
    const std::size_t blocks = (words.size() + 63) / 64;
    coverage_[pos].assign(D, std::vector<std::uint64_t>(blocks, 0));
    for (std::size_t k = 0; k < D; ++k) {
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (content[k].contains(words[w])) coverage_[pos][k][w / 64] |= std::uint64_t{1} << (w % 64);
      }
    }
  }
}

double DecoderContext::Overlap(std::size_t pos, std::size_t start, std::size_t n) const {
  const std::size_t size = content_sizes_[pos];
  if (size == 0) return 0.0;
  const auto& cov = coverage_[pos];
  std::size_t covered = 0;
  for (std::size_t b = 0; b < cov[start].size(); ++b) {
    std::uint64_t bits = 0;
    for (std::size_t k = start; k < start + n; ++k) bits |= cov[k][b];
    covered += static_cast<std::size_t>(std::popcount(bits));
  }
  return static_cast<double>(covered) / static_cast<double>(size);
}

std::optional<ExpansionSet> FindExpansionSet(const DecoderContext& ctx, std::size_t pos,
                                             const std::vector<bool>& used, std::size_t n,
                                             std::size_t beam_width,
                                             const RepetitionTracker& summary,
                                             std::size_t max_tokens) {
  const Document& doc = ctx.doc();
  const std::size_t D = doc.sentences.size();
  if (n == 0 || n > D || beam_width == 0) return std::nullopt;

  // Bounded beam: the worst retained candidate sits at the back.
  std::vector<ExpansionSet> beam;
  beam.reserve(beam_width + 1);
  for (std::size_t start = 0; start + n <= D; ++start) {
    bool free = true;
    std::size_t tokens = 0;
    for (std::size_t k = start; k < start + n; ++k) {
      free = free && !used[k];
      tokens += doc.sentences[k].token_count();
    }
    if (!free || tokens > max_tokens) continue;

    ExpansionSet cand;
    cand.start = start;
    cand.n = n;
    cand.token_count = tokens;
    double sim = 0.0;
    for (std::size_t k = start; k < start + n; ++k) sim += ctx.Similarity(pos, k);
    cand.sim = sim / static_cast<double>(n);
    cand.overlap = ctx.Overlap(pos, start, n);
    cand.score = cand.sim * cand.overlap;

    if (beam.size() == beam_width && !BeamBefore(cand, beam.back())) continue;
    beam.insert(std::upper_bound(beam.begin(), beam.end(), cand, BeamBefore), cand);
    if (beam.size() > beam_width) beam.pop_back();
  }
  if (beam.empty()) return std::nullopt;

  std::vector<const Sentence*> span;
  for (auto& cand : beam) {
    span.clear();
    for (std::size_t k = cand.start; k < cand.end(); ++k) span.push_back(&doc.sentences[k]);
    cand.repeats = summary.CountNewRepeats(span);
  }
  return *std::min_element(beam.begin(), beam.end(), [](const ExpansionSet& a, const ExpansionSet& b) {
    if (a.repeats != b.repeats) return a.repeats < b.repeats;
    return BeamBefore(a, b);
  });
}

double CopyProbability(const AttentionState& state, std::size_t pos) {
  if (pos >= state.size() || !state.alive(pos)) {
    throw std::invalid_argument("copy probability of a consumed position");
  }
  return state.prob(pos);
}

double ExpandProbability(const DecoderContext& ctx, const Weights& weights,
                         const ExpansionSet& span, Vector* per_sentence) {
  if (span.n == 0) throw std::invalid_argument("expand probability of an empty span");
  HeadAttentions heads;
  for (std::size_t h = 0; h < Multiplex::kHeads; ++h) {
    Vector raws;
    raws.reserve(span.n);
    for (std::size_t k = span.start; k < span.end(); ++k) raws.push_back(ctx.sentence_raw(h, k));
    heads[h] = NormalizeRelevances(ctx.head_metric(h), raws);
  }
  Vector mixed = Softmax(MixHeads(weights, heads));
  double mean = 0.0;
  for (double& x : mixed) {
    x = std::clamp(x, 0.0, 1.0);
    mean += x;
  }
  mean /= static_cast<double>(mixed.size());
  if (per_sentence != nullptr) *per_sentence = std::move(mixed);
  return mean;
}

SwitchOutput SoftSwitch(double p_expand, double p_copy, std::size_t budget,
                        std::size_t len_so_far) {
  SwitchOutput out;
  out.alpha = budget <= len_so_far ? 0.0 : std::max(p_expand, p_copy);
  out.p_out = out.alpha * p_expand + (1.0 - out.alpha) * p_copy;
  return out;
}

std::string_view ToString(Provenance p) {
  return p == Provenance::kCopied ? "copied" : "expanded";
}

std::string_view ToString(StopReason r) {
  switch (r) {
    case StopReason::kBudgetReached: return "budget_reached";
    case StopReason::kAttentionExhausted: return "attention_exhausted";
    case StopReason::kNoCandidateFits: return "no_candidate_fits";
  }
  return "unknown";
}

std::size_t SummaryResult::CountItems(Provenance p) const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [p](const SummaryItem& i) { return i.source == p; }));
}

std::vector<std::size_t> SummaryResult::SentenceIndices() const {
  std::vector<std::size_t> out;
  for (const auto& item : items) {
    for (std::size_t k = item.span_start; k < item.span_end; ++k) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SummaryResult Decode(const DecoderContext& ctx, const Weights& weights, std::size_t budget,
                     const DecodeOptions& options) {
  const Document& doc = ctx.doc();
  const PrototypeSummary& proto = ctx.prototype();

  SummaryResult result;
  result.budget = budget;
  result.expansion_enabled = options.allow_expansion && budget > proto.token_count;

  AttentionState state = GlobalAttention(weights, ctx.locals());
  result.initial_attention = state.probs();

  std::vector<bool> used(doc.sentences.size(), false);
  RepetitionTracker tracker;
  std::size_t len = 0;

  struct Choice {
    std::size_t pos = 0;
    double p_copy = 0.0;
    std::optional<ExpansionSet> span;
    std::optional<double> p_expand;
    SwitchOutput sw;
    Provenance op = Provenance::kCopied;
  };

  while (true) {
    if (len >= budget) {
      result.stop_reason = StopReason::kBudgetReached;
      break;
    }
    if (state.exhausted()) {
      result.stop_reason = StopReason::kAttentionExhausted;
      break;
    }
    const std::size_t remaining = budget - len;
    const std::size_t n =
        static_cast<double>(remaining) >= 3.0 * ctx.mean_sentence_length() ? 3 : 2;

    std::optional<Choice> best;
    for (std::size_t pos = 0; pos < proto.size(); ++pos) {
      if (!state.alive(pos)) continue;
      Choice c;
      c.pos = pos;
      c.p_copy = CopyProbability(state, pos);
      const std::size_t src = proto.sentences[pos].doc_index;
      const bool copy_fits = !used[src] && doc.sentences[src].token_count() <= remaining;
      if (result.expansion_enabled) {
        c.span = FindExpansionSet(ctx, pos, used, n, options.beam_width, tracker, remaining);
        if (!c.span && n == 3) {
          c.span = FindExpansionSet(ctx, pos, used, 2, options.beam_width, tracker, remaining);
        }
      }
      if (!copy_fits && !c.span) continue;
      if (c.span) {
        c.p_expand = ExpandProbability(ctx, weights, *c.span);
        c.sw = SoftSwitch(*c.p_expand, c.p_copy, budget, len);
        c.op = (*c.p_expand >= c.p_copy || !copy_fits) ? Provenance::kExpanded : Provenance::kCopied;
      } else {
        // No expansion available: the switch degenerates to pure copying.
        c.sw = {c.p_copy, 0.0};
        c.op = Provenance::kCopied;
      }
      if (!best || c.sw.p_out > best->sw.p_out) best = std::move(c);
    }
    if (!best) {
      result.stop_reason = StopReason::kNoCandidateFits;
      break;
    }

    SummaryItem item;
    item.source = best->op;
    item.prototype_index = best->pos;
    if (best->op == Provenance::kExpanded) {
      item.span_start = best->span->start;
      item.span_end = best->span->end();
    } else {
      item.span_start = proto.sentences[best->pos].doc_index;
      item.span_end = item.span_start + 1;
    }
    for (std::size_t k = item.span_start; k < item.span_end; ++k) {
      const auto& tokens = doc.sentences[k].tokens;
      item.tokens.insert(item.tokens.end(), tokens.begin(), tokens.end());
      tracker.Add(tokens);
      used[k] = true;
    }
    len += item.tokens.size();

    DecodeStep step;
    step.attention = state.probs();
    step.position = best->pos;
    step.p_copy = best->p_copy;
    step.p_expand = best->p_expand;
    step.alpha = best->sw.alpha;
    step.p_out = best->sw.p_out;
    step.op = best->op;
    step.span_start = item.span_start;
    step.span_end = item.span_end;
    result.trace.push_back(std::move(step));

    result.items.push_back(std::move(item));
    state = state.Consume(best->pos);
  }

  std::sort(result.items.begin(), result.items.end(),
            [](const SummaryItem& a, const SummaryItem& b) { return a.prototype_index < b.prototype_index; });
  result.token_count = len;
  result.final_attention = state.probs();
  result.budget_infeasible = result.items.empty() && result.stop_reason == StopReason::kNoCandidateFits;
  return result;
}

std::string SummaryText(const Document& doc, const SummaryResult& result) {
  std::string text;
  for (const auto& item : result.items) {
    for (std::size_t k = item.span_start; k < item.span_end; ++k) {
      if (!text.empty()) text.push_back(' ');
      text.append(doc.SentenceText(k));
    }
  }
  return text;
}

}  // namespace mls
