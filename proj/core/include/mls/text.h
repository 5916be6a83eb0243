#ifndef MLS_TEXT_H_
#define MLS_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mls {

// Raised for malformed inputs (corpus records, embedding files, kernel JSON).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<double>;
using StopwordSet = std::unordered_set<std::string>;

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct Sentence {
  std::size_t index = 0;
  std::vector<std::string> tokens;
  CharSpan char_span;

  std::size_t token_count() const { return tokens.size(); }
};

struct Document {
  std::string id;
  std::string raw;
  std::vector<Sentence> sentences;
  std::size_t token_count = 0;

  bool empty() const { return sentences.empty(); }
  std::string_view SentenceText(std::size_t i) const;
};

struct CorpusPair {
  Document document;
  Document gold_summary;
};

struct SegmenterOptions {
  // Lowercase words (without trailing period) after which a period does not
  // end a sentence.
  std::unordered_set<std::string> abbreviations;

  static SegmenterOptions Defaults();
};

// Lowercased tokens. Runs of letters/digits form words (apostrophes and
// hyphens between word characters are kept, as are '.' and ',' between
// digits); every other printable character is its own token.
std::vector<std::string> Tokenize(std::string_view text);

// True for tokens that contain no letter or digit.
bool IsPunctuation(std::string_view token);

// Splits on '.', '!' or '?' (plus trailing closing quotes/brackets) followed
// by whitespace and a character that is not lowercase, or by end of text.
// Text with no uppercase letters at all is treated as caseless and splits
// after any terminal punctuation followed by whitespace. Blank lines always
// end a sentence.
std::vector<Sentence> SplitSentences(
    std::string_view text,
    const SegmenterOptions& options = SegmenterOptions::Defaults());

Document MakeDocument(std::string id, std::string raw,
                      const SegmenterOptions& options = SegmenterOptions::Defaults());

// Builds a document whose sentences are copies of `sentences` (re-indexed
// from 0); raw is the space-joined sentence texts taken from `source`.
Document MakeDocumentFromSentences(std::string id, const Document& source,
                                   std::span<const std::size_t> indices);

// Line-delimited JSON with string fields "id", "text", "summary".
std::vector<CorpusPair> LoadCorpus(const std::filesystem::path& path);
std::vector<CorpusPair> ParseCorpus(std::string_view contents);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }

  // Returns false (and keeps the new vector) when `token` was already present.
  bool Insert(std::string token, Vector vec);
  const Vector* Find(std::string_view token) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, Vector, Hash, std::equal_to<>> entries_;
};

// Plain-text word vectors: `token v1 ... vd` per line, optional `count dim`
// header on the first line.
EmbeddingTable LoadEmbeddings(const std::filesystem::path& path);
EmbeddingTable ParseEmbeddings(std::string_view contents);

// Mean of the in-vocabulary token vectors; the zero vector when none are.
Vector EmbedSentence(const Sentence& sentence, const EmbeddingTable& table);
Vector EmbedTokens(std::span<const std::string> tokens, const EmbeddingTable& table);

StopwordSet LoadStopwords(const std::filesystem::path& path);
StopwordSet ParseWordList(std::string_view contents);

// Tokens that are neither punctuation nor stop words.
std::vector<std::string> ContentTokens(std::span<const std::string> tokens,
                                       const StopwordSet& stopwords);

// ceil(fraction * tokens), ignoring floating-point noise below 1e-9 so that
// e.g. 0.2 * 15 gives 3 rather than 4.
std::size_t FractionOfTokens(double fraction, std::size_t tokens);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace mls

#endif  // MLS_TEXT_H_
