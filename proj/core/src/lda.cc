#include "mls/lda.h"

#include <random>
#include <stdexcept>
#include <unordered_map>

namespace mls {

TopicModel LdaGibbs(std::span<const std::vector<std::string>> documents,
                    const LdaOptions& options) {
  if (options.num_topics == 0) throw std::invalid_argument("lda: num_topics must be >= 1");
  if (options.iterations == 0) throw std::invalid_argument("lda: iterations must be >= 1");
  const std::size_t K = options.num_topics;
  const double alpha = options.EffectiveAlpha();
  const double beta = options.beta;

  TopicModel model;
  model.num_topics = K;
  std::unordered_map<std::string, std::size_t> word_ids;
  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(documents.size());
  std::size_t total = 0;
  for (const auto& tokens : documents) {
    std::vector<std::size_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, inserted] = word_ids.try_emplace(t, model.vocab.size());
      if (inserted) model.vocab.push_back(t);
      ids.push_back(it->second);
    }
    total += ids.size();
    if (!ids.empty()) docs.push_back(std::move(ids));
  }
  if (total == 0) throw std::invalid_argument("lda: empty token stream");
  const std::size_t V = model.vocab.size();
  const double v_beta = static_cast<double>(V) * beta;

  std::vector<std::vector<std::size_t>> doc_topic_counts(docs.size(), std::vector<std::size_t>(K, 0));
  std::vector<std::size_t> topic_word_counts(K * V, 0);
  std::vector<std::size_t> topic_counts(K, 0);
  std::vector<std::vector<std::size_t>> assignment(docs.size());

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick_topic(0, K - 1);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    assignment[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const std::size_t z = pick_topic(rng);
      assignment[d][i] = z;
      ++doc_topic_counts[d][z];
      ++topic_word_counts[z * V + docs[d][i]];
      ++topic_counts[z];
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cumulative(K);
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      auto& counts = doc_topic_counts[d];
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::size_t w = docs[d][i];
        std::size_t z = assignment[d][i];
        --counts[z];
        --topic_word_counts[z * V + w];
        --topic_counts[z];

        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (static_cast<double>(counts[k]) + alpha) *
                 (static_cast<double>(topic_word_counts[k * V + w]) + beta) /
                 (static_cast<double>(topic_counts[k]) + v_beta);
          cumulative[k] = acc;
        }
        const double u = unit(rng) * acc;
        z = 0;
        while (z + 1 < K && cumulative[z] <= u) ++z;

        assignment[d][i] = z;
        ++counts[z];
        ++topic_word_counts[z * V + w];
        ++topic_counts[z];
      }
    }
  }

  model.topic_word.assign(K, Vector(V, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(topic_counts[k]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      model.topic_word[k][w] = (static_cast<double>(topic_word_counts[k * V + w]) + beta) / denom;
    }
  }
  model.doc_topic.assign(K, 0.0);
  const double denom = static_cast<double>(total) + static_cast<double>(K) * alpha;
  for (std::size_t k = 0; k < K; ++k) {
    model.doc_topic[k] = (static_cast<double>(topic_counts[k]) + alpha) / denom;
  }
  return model;
}

TopicModel LdaGibbs(const Document& doc, const StopwordSet& stopwords,
                    const LdaOptions& options) {
  std::vector<std::vector<std::string>> pseudo_docs;
  pseudo_docs.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) pseudo_docs.push_back(ContentTokens(s.tokens, stopwords));
  return LdaGibbs(pseudo_docs, options);
}

}  // namespace mls
