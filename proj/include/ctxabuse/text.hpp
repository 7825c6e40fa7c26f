#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace ctxabuse {

using WordSet = std::unordered_set<std::string>;

// Measurements taken on the raw text, before any cleaning.
struct RawTextCounts {
  std::int64_t word_count = 0;
  std::int64_t char_count = 0;
  std::int64_t sentence_count = 0;
  double avg_word_length = 0.0;
  double avg_sentence_length = 0.0;  // words per sentence
  std::int64_t hashtag_count = 0;
  std::int64_t mention_count = 0;
  std::int64_t url_count = 0;
  std::int64_t punctuation_count = 0;
  std::int64_t stopword_count = 0;
  std::int64_t capitalized_word_count = 0;

  bool operator==(const RawTextCounts&) const = default;
};

struct ProcessedText {
  std::string raw;
  std::vector<std::string> tokens_raw;
  std::vector<std::string> tokens_clean;
  std::vector<std::string> stems;
  std::vector<std::string> sentences;
  RawTextCounts counts;

  bool operator==(const ProcessedText&) const = default;
};

struct PreprocessConfig {
  const WordSet* stopwords = nullptr;
  // true: '#' is stripped like any special character and the body survives
  // cleaning ("#fail" -> "fail"); false: hashtag tokens are dropped whole.
  bool keep_hashtag_body = true;
};

// Splits on runs of Unicode whitespace; tokens are preserved verbatim.
std::vector<std::string> tokenize(const std::string& text);

// Splits on maximal runs of '.', '!', '?' followed by whitespace or
// end-of-text; segments are trimmed and blanks dropped. Text without a
// terminator is a single sentence when non-blank.
std::vector<std::string> split_sentences(const std::string& text);

// Lowercase; drop hashtag tokens when configured; drop tokens containing
// non-ASCII code points; strip punctuation, symbol and digit characters;
// then drop empties, single letters and stopwords, in that order.
std::vector<std::string> clean_tokens(const std::vector<std::string>& tokens,
                                      const PreprocessConfig& cfg);

bool is_hashtag_token(const std::string& token);
bool is_mention_token(const std::string& token);
bool is_url_token(const std::string& token);
bool is_capitalized_token(const std::string& token);

// Full pipeline: tokenize -> clean -> stem, with raw-text measurements.
ProcessedText preprocess_text(const std::string& text, const PreprocessConfig& cfg);

}  // namespace ctxabuse
