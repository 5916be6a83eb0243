#ifndef MLS_LDA_H_
#define MLS_LDA_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mls/text.h"

namespace mls {

struct TopicModel {
  std::size_t num_topics = 0;
  std::vector<std::string> vocab;     // first-occurrence order
  std::vector<Vector> topic_word;     // num_topics rows over vocab
  Vector doc_topic;                   // corpus-level mixture over topics
};

struct LdaOptions {
  std::size_t num_topics = 10;
  std::size_t iterations = 1000;
  double alpha = -1.0;  // < 0 means 50 / num_topics
  double beta = 0.01;
  std::uint64_t seed = 1;

  double EffectiveAlpha() const {
    return alpha < 0.0 ? 50.0 / static_cast<double>(num_topics) : alpha;
  }
};

// Collapsed Gibbs sampler over a bag of pseudo-documents. Tokens are used as
// given (filter stop words before calling). Throws std::invalid_argument when
// there are no tokens at all.
TopicModel LdaGibbs(std::span<const std::vector<std::string>> documents,
                    const LdaOptions& options);

// Convenience: sentences of `doc` are the pseudo-documents, with punctuation
// and stop words removed.
TopicModel LdaGibbs(const Document& doc, const StopwordSet& stopwords,
                    const LdaOptions& options);

}  // namespace mls

#endif  // MLS_LDA_H_
