#include "mls/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mls/lda.h"

namespace mls {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts CountNgrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (n == 0 || tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

PrecisionRecall Scores(double matched, double cand_total, double ref_total) {
  PrecisionRecall out;
  out.precision = cand_total > 0.0 ? matched / cand_total : 0.0;
  out.recall = ref_total > 0.0 ? matched / ref_total : 0.0;
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  out.precision *= 100.0;
  out.recall *= 100.0;
  out.f1 *= 100.0;
  return out;
}

std::size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Rows of `kernel` re-expressed over `vocab` and smoothed.
std::vector<Vector> RowsOver(const Kernel& kernel, const std::vector<std::string>& vocab,
                             const std::unordered_map<std::string, std::size_t>& index) {
  std::vector<Vector> rows;
  for (const auto& row : kernel.matrix) {
    Vector mapped(vocab.size(), 0.0);
    for (std::size_t c = 0; c < row.size() && c < kernel.labels.size(); ++c) {
      mapped[index.at(kernel.labels[c])] = row[c];
    }
    rows.push_back(Smooth(mapped));
  }
  return rows;
}

}  // namespace

std::vector<std::string> MetricTokens(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (!IsPunctuation(t)) out.push_back(t);
  }
  return out;
}

std::vector<std::string> MetricTokens(std::string_view text) {
  const auto tokens = Tokenize(text);
  return MetricTokens(tokens);
}

std::vector<std::string> MetricTokens(const Document& doc) {
  std::vector<std::string> out;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (!IsPunctuation(t)) out.push_back(t);
    }
  }
  return out;
}

PrecisionRecall RougeN(std::span<const std::string> candidate,
                       std::span<const std::string> reference, std::size_t n) {
  if (n == 0) throw std::invalid_argument("rouge: n must be >= 1");
  const auto cand = CountNgrams(candidate, n);
  const auto ref = CountNgrams(reference, n);
  double matched = 0.0, cand_total = 0.0, ref_total = 0.0;
  for (const auto& [gram, count] : cand) {
    cand_total += static_cast<double>(count);
    if (auto it = ref.find(gram); it != ref.end()) {
      matched += static_cast<double>(std::min(count, it->second));
    }
  }
  for (const auto& [gram, count] : ref) ref_total += static_cast<double>(count);
  return Scores(matched, cand_total, ref_total);
}

PrecisionRecall RougeN(std::string_view candidate, std::string_view reference, std::size_t n) {
  return RougeN(MetricTokens(candidate), MetricTokens(reference), n);
}

PrecisionRecall RougeLScores(std::span<const std::string> candidate,
                             std::span<const std::string> reference) {
  const double lcs = static_cast<double>(LcsLength(candidate, reference));
  return Scores(lcs, static_cast<double>(candidate.size()), static_cast<double>(reference.size()));
}

double RougeL(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return RougeLScores(candidate, reference).f1;
}

double RougeL(std::string_view candidate, std::string_view reference) {
  return RougeL(MetricTokens(candidate), MetricTokens(reference));
}

std::string Stem(std::string_view word) {
  std::string w(word);
  if (w.size() > 4 && EndsWith(w, "sses")) return w.substr(0, w.size() - 2);
  if (w.size() > 4 && EndsWith(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 5 && EndsWith(w, "ing")) return w.substr(0, w.size() - 3);
  if (w.size() > 4 && EndsWith(w, "ed")) return w.substr(0, w.size() - 2);
  if (w.size() > 3 && EndsWith(w, "s") && !EndsWith(w, "ss") && !EndsWith(w, "us")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

double MeteorSimple(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> align(candidate.size(), kNone);
  std::vector<bool> ref_used(reference.size(), false);

  auto stage = [&](auto&& form) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (align[i] != kNone) continue;
      const std::string key = form(candidate[i]);
      for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j] && form(reference[j]) == key) {
          align[i] = j;
          ref_used[j] = true;
          break;
        }
      }
    }
  };
  stage([](const std::string& w) { return w; });
  stage([](const std::string& w) { return Stem(w); });

  double matches = 0.0;
  double chunks = 0.0;
  std::size_t prev_cand = kNone, prev_ref = kNone;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] == kNone) continue;
    matches += 1.0;
    const bool continues = prev_cand != kNone && i == prev_cand + 1 && align[i] == prev_ref + 1;
    if (!continues) chunks += 1.0;
    prev_cand = i;
    prev_ref = align[i];
  }
  if (matches == 0.0) return 0.0;
  const double p = matches / static_cast<double>(candidate.size());
  const double r = matches / static_cast<double>(reference.size());
  const double f_mean = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(chunks / matches, 3.0);
  return f_mean * (1.0 - penalty) * 100.0;
}

double MeteorSimple(std::string_view candidate, std::string_view reference) {
  return MeteorSimple(MetricTokens(candidate), MetricTokens(reference));
}

Kernel TopicKernelForMetric(const Document& text, const StopwordSet& stopwords,
                            const KernelOptions& options) {
  bool has_content = false;
  for (const auto& s : text.sentences) {
    if (!ContentTokens(s.tokens, stopwords).empty()) {
      has_content = true;
      break;
    }
  }
  if (!has_content) {
    Kernel empty;
    empty.property = Property::kTopicCoverage;
    empty.metric = Metric::kSymmetricKl;
    empty.matrix.assign(options.topic_rows, Vector{});
    return empty;
  }
  return BuildTopicKernel(text, stopwords, options);
}

double TopicDivergence(const Kernel& summary_topics, const Kernel& doc_topics) {
  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::size_t> index;
  for (const Kernel* k : {&doc_topics, &summary_topics}) {
    for (const auto& w : k->labels) {
      if (index.try_emplace(w, vocab.size()).second) vocab.push_back(w);
    }
  }
  if (vocab.empty()) return 0.0;
  const auto a = RowsOver(summary_topics, vocab, index);
  const auto b = RowsOver(doc_topics, vocab, index);
  const std::size_t pairs = std::min(a.size(), b.size());
  if (pairs == 0) return 0.0;

  struct Candidate {
    double kl;
    std::size_t i, j;
  };
  std::vector<Candidate> all;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) all.push_back({SymmetricKl(a[i], b[j]), i, j});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& x, const Candidate& y) { return x.kl < y.kl; });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  double total = 0.0;
  std::size_t matched = 0;
  for (const auto& c : all) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    total += c.kl;
    if (++matched == pairs) break;
  }
  return total / static_cast<double>(pairs);
}

double TopicDivergence(const Document& summary, const Document& doc, const StopwordSet& stopwords,
                       const KernelOptions& options) {
  return TopicDivergence(TopicKernelForMetric(summary, stopwords, options),
                         TopicKernelForMetric(doc, stopwords, options));
}

Vector SentimentDistribution(std::span<const std::string> tokens,
                             const resources::ValenceLexicon& lexicon) {
  Vector counts(3, 0.0);
  for (const auto& t : tokens) {
    if (IsPunctuation(t)) continue;
    auto it = lexicon.find(t);
    const double v = it == lexicon.end() ? 0.0 : it->second;
    counts[v > 0.0 ? 0 : v < 0.0 ? 1 : 2] += 1.0;
  }
  if (counts[0] + counts[1] + counts[2] == 0.0) counts[2] = 1.0;
  const double total = counts[0] + counts[1] + counts[2];
  for (double& c : counts) c /= total;
  return Smooth(counts);
}

double SentimentDivergence(std::span<const std::string> summary, std::span<const std::string> doc,
                           const resources::ValenceLexicon& lexicon) {
  return SymmetricKl(SentimentDistribution(summary, lexicon), SentimentDistribution(doc, lexicon));
}

double Coherence(const Document& text, const EmbeddingTable& table) {
  if (text.sentences.size() < 2) return 0.0;
  double total = 0.0;
  Vector prev = EmbedSentence(text.sentences[0], table);
  for (std::size_t i = 1; i < text.sentences.size(); ++i) {
    Vector cur = EmbedSentence(text.sentences[i], table);
    total += Cosine(prev, cur);
    prev = std::move(cur);
  }
  return total / static_cast<double>(text.sentences.size() - 1);
}

double DeltaCoherence(const Document& summary, const Document& doc, const EmbeddingTable& table) {
  return std::abs(Coherence(summary, table) - Coherence(doc, table));
}

double Abstractiveness(const Document& summary, const Document& doc,
                       std::span<const std::size_t> orders) {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t n : orders) {
    std::set<std::vector<std::string>> source;
    for (const auto& s : doc.sentences) {
      const auto tokens = MetricTokens(s.tokens);
      for (const auto& [gram, count] : CountNgrams(tokens, n)) source.insert(gram);
    }
    double novel = 0.0, all = 0.0;
    for (const auto& s : summary.sentences) {
      const auto tokens = MetricTokens(s.tokens);
      for (const auto& [gram, count] : CountNgrams(tokens, n)) {
        all += static_cast<double>(count);
        if (!source.contains(gram)) novel += static_cast<double>(count);
      }
    }
    if (all == 0.0) continue;
    total += 100.0 * novel / all;
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

}  // namespace mls
