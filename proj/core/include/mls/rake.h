#ifndef MLS_RAKE_H_
#define MLS_RAKE_H_

#include <span>
#include <string>
#include <vector>

#include "mls/text.h"

namespace mls {

struct KeyPhrase {
  std::vector<std::string> words;
  double score = 0.0;           // sum of member word degree/frequency
  std::size_t frequency = 0;    // occurrences as a candidate phrase
  std::size_t first_occurrence = 0;

  std::string Text() const;
};

// Rapid automatic keyword extraction. Candidate phrases are maximal runs of
// tokens that are neither stop words nor punctuation; sentence boundaries
// also delimit. Returns phrases ordered by descending score, ties by earlier
// first occurrence, truncated to `top_k`.
std::vector<KeyPhrase> ExtractKeyPhrases(const Document& doc, const StopwordSet& stopwords,
                                         std::size_t top_k);

// Number of (possibly overlapping) occurrences of `phrase` in `tokens`.
std::size_t CountOccurrences(std::span<const std::string> tokens,
                             std::span<const std::string> phrase);

}  // namespace mls

#endif  // MLS_RAKE_H_
