#include "mls/rake.h"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace mls {

std::string KeyPhrase::Text() const {
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text.push_back(' ');
    text += w;
  }
  return text;
}

std::vector<KeyPhrase> ExtractKeyPhrases(const Document& doc, const StopwordSet& stopwords,
                                         std::size_t top_k) {
  std::vector<std::vector<std::string>> candidates;
  for (const auto& sentence : doc.sentences) {
    std::vector<std::string> current;
    for (const auto& token : sentence.tokens) {
      if (IsPunctuation(token) || stopwords.contains(token)) {
        if (!current.empty()) candidates.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(token);
      }
    }
    if (!current.empty()) candidates.push_back(std::move(current));
  }

  std::unordered_map<std::string, double> frequency;
  std::unordered_map<std::string, double> degree;
  for (const auto& phrase : candidates) {
    const double len = static_cast<double>(phrase.size());
    for (const auto& w : phrase) {
      frequency[w] += 1.0;
      degree[w] += len;
    }
  }

  std::vector<KeyPhrase> phrases;
  std::map<std::vector<std::string>, std::size_t> index;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto [it, inserted] = index.try_emplace(candidates[i], phrases.size());
    if (inserted) {
      KeyPhrase kp;
      kp.words = candidates[i];
      kp.first_occurrence = i;
      for (const auto& w : kp.words) kp.score += degree[w] / frequency[w];
      phrases.push_back(std::move(kp));
    }
    ++phrases[it->second].frequency;
  }

  std::stable_sort(phrases.begin(), phrases.end(), [](const KeyPhrase& a, const KeyPhrase& b) {
    return a.score > b.score;
  });
  if (phrases.size() > top_k) phrases.resize(top_k);
  return phrases;
}

std::size_t CountOccurrences(std::span<const std::string> tokens,
                             std::span<const std::string> phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
    }
  }
  return count;
}

}  // namespace mls
