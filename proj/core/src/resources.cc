#include "mls/resources.h"

#include <charconv>
#include <sstream>

namespace mls::resources {
namespace detail {
extern const std::string_view kStopwords;
extern const std::string_view kAbbreviations;
extern const std::string_view kValenceLexicon;
}  // namespace detail

const StopwordSet& DefaultStopwords() {
  static const StopwordSet words = ParseWordList(detail::kStopwords);
  return words;
}

const std::vector<std::string>& DefaultAbbreviations() {
  static const std::vector<std::string> words = [] {
    const StopwordSet set = ParseWordList(detail::kAbbreviations);
    return std::vector<std::string>(set.begin(), set.end());
  }();
  return words;
}

ValenceLexicon ParseValenceLexicon(std::string_view contents) {
  ValenceLexicon lexicon;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("valence lexicon line " + std::to_string(number) + ": missing tab");
    }
    double score = 0.0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    if (last > first && last[-1] == '\r') --last;
    auto [ptr, ec] = std::from_chars(first, last, score);
    if (ec != std::errc() || ptr != last || score < -4.0 || score > 4.0) {
      throw FormatError("valence lexicon line " + std::to_string(number) + ": bad score");
    }
    lexicon[line.substr(0, tab)] = score;
  }
  return lexicon;
}

const ValenceLexicon& DefaultValenceLexicon() {
  static const ValenceLexicon lexicon = ParseValenceLexicon(detail::kValenceLexicon);
  return lexicon;
}

}  // namespace mls::resources
