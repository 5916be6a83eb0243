#include "mls/text.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "mls/resources.h"

namespace mls {
namespace {

bool IsAsciiAlnum(unsigned char c) { return std::isalnum(c) != 0; }
bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }
bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }

// Length of a recognised UTF-8 punctuation sequence (curly quotes, dashes,
// ellipsis) starting at `i`, or 0.
std::size_t Utf8PunctLength(std::string_view s, std::size_t i) {
  if (i + 3 > s.size()) return 0;
  const auto b0 = static_cast<unsigned char>(s[i]);
  const auto b1 = static_cast<unsigned char>(s[i + 1]);
  const auto b2 = static_cast<unsigned char>(s[i + 2]);
  if (b0 != 0xE2 || b1 != 0x80) return 0;
  switch (b2) {
    case 0x93: case 0x94: case 0x98: case 0x99: case 0x9C: case 0x9D: case 0xA6:
      return 3;
    default:
      return 0;
  }
}

bool IsRightSingleQuote(std::string_view s, std::size_t i) {
  return Utf8PunctLength(s, i) == 3 && static_cast<unsigned char>(s[i + 2]) == 0x99;
}

// Byte length of the word character at `i`, or 0 if it is not one.
std::size_t WordCharLength(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) return IsAsciiAlnum(c) ? 1 : 0;
  if (Utf8PunctLength(s, i) != 0) return 0;
  std::size_t len = 1;
  while (i + len < s.size() && (static_cast<unsigned char>(s[i + len]) & 0xC0) == 0x80) ++len;
  return len;
}

// Byte length of an in-word joiner at `i` given the surrounding characters.
std::size_t JoinerLength(std::string_view s, std::size_t i) {
  if (i == 0) return 0;
  const auto prev = static_cast<unsigned char>(s[i - 1]);
  const auto c = s[i];
  if ((c == '.' || c == ',') && i + 1 < s.size()) {
    return IsDigit(prev) && IsDigit(static_cast<unsigned char>(s[i + 1])) ? 1 : 0;
  }
  std::size_t len = 0;
  if (c == '\'' || c == '-') {
    len = 1;
  } else if (IsRightSingleQuote(s, i)) {
    len = 3;
  } else {
    return 0;
  }
  if (i + len >= s.size()) return 0;
  // The previous byte may be a UTF-8 continuation byte of a word character.
  const bool prev_word = IsAsciiAlnum(prev) || prev >= 0x80;
  return prev_word && WordCharLength(s, i + len) != 0 ? len : 0;
}

void AppendLower(std::string& out, std::string_view piece) {
  for (char ch : piece) {
    const auto c = static_cast<unsigned char>(ch);
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
}

bool IsClosingChar(std::string_view s, std::size_t i, std::size_t* len) {
  const char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') {
    *len = 1;
    return true;
  }
  if (Utf8PunctLength(s, i) == 3) {
    const auto b2 = static_cast<unsigned char>(s[i + 2]);
    if (b2 == 0x99 || b2 == 0x9D) {
      *len = 3;
      return true;
    }
  }
  return false;
}

std::string WordBefore(std::string_view text, std::size_t period) {
  std::size_t begin = period;
  while (begin > 0 && !IsSpace(static_cast<unsigned char>(text[begin - 1]))) --begin;
  std::string word;
  for (std::size_t i = begin; i < period; ++i) {
    const char c = text[i];
    if (word.empty() && (c == '(' || c == '"' || c == '\'' || c == '[')) continue;
    word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return word;
}

Sentence MakeSentence(std::string_view text, std::size_t start, std::size_t end) {
  while (start < end && IsSpace(static_cast<unsigned char>(text[start]))) ++start;
  while (end > start && IsSpace(static_cast<unsigned char>(text[end - 1]))) --end;
  Sentence s;
  s.char_span = {start, end};
  s.tokens = Tokenize(text.substr(start, end - start));
  return s;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && IsSpace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitLines(std::string_view contents) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !IsSpace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string_view Document::SentenceText(std::size_t i) const {
  const CharSpan& span = sentences.at(i).char_span;
  return std::string_view(raw).substr(span.start, span.size());
}

SegmenterOptions SegmenterOptions::Defaults() {
  SegmenterOptions options;
  for (const auto& word : resources::DefaultAbbreviations()) {
    options.abbreviations.insert(word);
  }
  return options;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    if (std::size_t len = WordCharLength(text, i); len != 0) {
      std::string token;
      while (i < text.size()) {
        if (std::size_t w = WordCharLength(text, i); w != 0) {
          AppendLower(token, text.substr(i, w));
          i += w;
        } else if (std::size_t j = JoinerLength(text, i); j != 0) {
          token.append(text.substr(i, j));
          i += j;
        } else {
          break;
        }
      }
      tokens.push_back(std::move(token));
      continue;
    }
    std::size_t len = Utf8PunctLength(text, i);
    if (len == 0) len = 1;
    tokens.emplace_back(text.substr(i, len));
    i += len;
  }
  return tokens;
}

bool IsPunctuation(std::string_view token) {
  return std::none_of(token.begin(), token.end(), [](char ch) {
    return IsAsciiAlnum(static_cast<unsigned char>(ch));
  });
}

std::vector<Sentence> SplitSentences(std::string_view text, const SegmenterOptions& options) {
  const bool caseless = std::none_of(text.begin(), text.end(), [](char ch) {
    return std::isupper(static_cast<unsigned char>(ch)) != 0;
  });

  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t start, std::size_t end) {
    Sentence s = MakeSentence(text, start, end);
    if (!s.tokens.empty()) {
      s.index = sentences.size();
      sentences.push_back(std::move(s));
    }
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t k = i + 1;
      while (k < text.size() && text[k] != '\n' && IsSpace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < text.size() && text[k] == '\n') {
        emit(start, i);
        start = k + 1;
        i = k + 1;
        continue;
      }
      ++i;
      continue;
    }
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    std::size_t close_len = 0;
    while (j < text.size() && IsClosingChar(text, j, &close_len)) j += close_len;

    bool boundary = false;
    if (j >= text.size()) {
      boundary = true;
    } else if (IsSpace(static_cast<unsigned char>(text[j]))) {
      std::size_t k = j;
      while (k < text.size() && IsSpace(static_cast<unsigned char>(text[k]))) ++k;
      if (k >= text.size()) {
        boundary = true;
      } else {
        const auto next = static_cast<unsigned char>(text[k]);
        boundary = caseless || std::islower(next) == 0;
        if (boundary && c == '.' && j == i + 1 &&
            options.abbreviations.contains(WordBefore(text, i))) {
          boundary = false;
        }
      }
    }
    if (boundary) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  if (start < text.size()) emit(start, text.size());
  return sentences;
}

Document MakeDocument(std::string id, std::string raw, const SegmenterOptions& options) {
  Document doc;
  doc.id = std::move(id);
  doc.raw = std::move(raw);
  doc.sentences = SplitSentences(doc.raw, options);
  for (const auto& s : doc.sentences) doc.token_count += s.token_count();
  return doc;
}

Document MakeDocumentFromSentences(std::string id, const Document& source,
                                   std::span<const std::size_t> indices) {
  Document doc;
  doc.id = std::move(id);
  for (std::size_t idx : indices) {
    const Sentence& src = source.sentences.at(idx);
    if (!doc.raw.empty()) doc.raw.push_back(' ');
    Sentence s;
    s.index = doc.sentences.size();
    s.tokens = src.tokens;
    s.char_span.start = doc.raw.size();
    doc.raw.append(source.SentenceText(idx));
    s.char_span.end = doc.raw.size();
    doc.token_count += s.token_count();
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

std::size_t FractionOfTokens(double fraction, std::size_t tokens) {
  const double exact = fraction * static_cast<double>(tokens);
  const double rounded = std::ceil(exact - 1e-9);
  return rounded <= 0.0 ? 0 : static_cast<std::size_t>(rounded);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<CorpusPair> ParseCorpus(std::string_view contents) {
  std::vector<CorpusPair> pairs;
  const auto lines = SplitLines(contents);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = Trim(lines[n]);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + "malformed JSON (" + e.what() + ")");
    }
    if (!record.is_object()) throw FormatError(where + "record is not a JSON object");
    for (const char* field : {"id", "text", "summary"}) {
      if (!record.contains(field)) throw FormatError(where + "missing field " + field);
      if (!record[field].is_string()) {
        throw FormatError(where + "field " + field + " is not a string");
      }
    }
    const auto id = record["id"].get<std::string>();
    CorpusPair pair{MakeDocument(id, record["text"].get<std::string>()),
                    MakeDocument(id + "#gold", record["summary"].get<std::string>())};
    if (pair.gold_summary.token_count > pair.document.token_count) {
      spdlog::warn("{}gold summary of '{}' is longer than its document ({} > {} tokens)",
                   where, id, pair.gold_summary.token_count, pair.document.token_count);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<CorpusPair> LoadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFile(path));
}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

bool EmbeddingTable::Insert(std::string token, Vector vec) {
  if (vec.size() != dimension_) {
    throw std::invalid_argument("embedding of '" + token + "' has length " +
                                std::to_string(vec.size()) + ", table dimension is " +
                                std::to_string(dimension_));
  }
  auto [it, inserted] = entries_.insert_or_assign(std::move(token), std::move(vec));
  return inserted;
}

const Vector* EmbeddingTable::Find(std::string_view token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingTable ParseEmbeddings(std::string_view contents) {
  const auto lines = SplitLines(contents);
  std::size_t dimension = 0;
  bool have_dimension = false;
  bool first = true;
  EmbeddingTable table;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto fields = SplitFields(lines[n]);
    if (fields.empty()) continue;
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    if (first) {
      first = false;
      std::size_t count = 0;
      std::size_t dim = 0;
      if (fields.size() == 2 && ParseNumber(fields[0], count) && ParseNumber(fields[1], dim)) {
        if (dim == 0) throw FormatError(where + "header declares dimension 0");
        dimension = dim;
        have_dimension = true;
        table = EmbeddingTable(dimension);
        continue;
      }
    }
    const std::size_t values = fields.size() - 1;
    if (!have_dimension) {
      if (values == 0) throw FormatError(where + "token without vector values");
      dimension = values;
      have_dimension = true;
      table = EmbeddingTable(dimension);
    }
    if (values != dimension) {
      throw FormatError(where + "expected " + std::to_string(dimension) + " values, found " +
                        std::to_string(values));
    }
    Vector vec(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
      if (!ParseNumber(fields[d + 1], vec[d])) {
        throw FormatError(where + "invalid number '" + std::string(fields[d + 1]) + "'");
      }
    }
    std::string token(fields[0]);
    if (!table.Insert(token, std::move(vec))) {
      spdlog::warn("{}duplicate embedding for '{}', keeping the last one", where, token);
    }
  }
  if (table.size() == 0) throw FormatError("embedding file contains no vectors");
  return table;
}

EmbeddingTable LoadEmbeddings(const std::filesystem::path& path) {
  return ParseEmbeddings(ReadFile(path));
}

Vector EmbedTokens(std::span<const std::string> tokens, const EmbeddingTable& table) {
  Vector mean(table.dimension(), 0.0);
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    if (const Vector* vec = table.Find(token)) {
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += (*vec)[d];
      ++hits;
    }
  }
  if (hits > 1) {
    for (double& x : mean) x /= static_cast<double>(hits);
  }
  return mean;
}

Vector EmbedSentence(const Sentence& sentence, const EmbeddingTable& table) {
  return EmbedTokens(sentence.tokens, table);
}

StopwordSet ParseWordList(std::string_view contents) {
  StopwordSet words;
  for (std::string_view line : SplitLines(contents)) {
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::string word;
    AppendLower(word, line);
    words.insert(std::move(word));
  }
  return words;
}

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  return ParseWordList(ReadFile(path));
}

std::vector<std::string> ContentTokens(std::span<const std::string> tokens,
                                       const StopwordSet& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (!IsPunctuation(t) && !stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

}  // namespace mls
