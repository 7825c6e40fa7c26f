#include "ctxabuse/text.hpp"

#include "ctxabuse/porter.hpp"
#include "ctxabuse/util.hpp"

namespace ctxabuse {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  std::string current;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = utf8::decode(text, i);
    if (chars::is_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.append(text, start, i - start);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(const std::string& text) {
  const auto is_terminator = [](char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; };
  const auto trimmed = [](const std::string& s) {
    auto cps = utf8::decode_all(s);
    std::size_t nb = 0;
    while (nb < cps.size() && chars::is_space(cps[nb])) ++nb;
    std::size_t ne = cps.size();
    while (ne > nb && chars::is_space(cps[ne - 1])) --ne;
    std::string out;
    for (std::size_t k = nb; k < ne; ++k) utf8::encode(cps[k], out);
    return out;
  };

  std::vector<std::string> sentences;
  std::string segment;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = utf8::decode(text, i);
    if (is_terminator(cp)) {
      // Extend over the full terminator run, then check what follows.
      std::size_t run_end = i;
      while (run_end < text.size()) {
        std::size_t probe = run_end;
        if (!is_terminator(utf8::decode(text, probe))) break;
        run_end = probe;
      }
      std::size_t after = run_end;
      bool splits = after >= text.size();
      if (!splits) {
        std::size_t probe = after;
        splits = chars::is_space(utf8::decode(text, probe));
      }
      if (splits) {
        std::string s = trimmed(segment);
        if (!s.empty()) sentences.push_back(std::move(s));
        segment.clear();
        i = run_end;
        continue;
      }
      // Terminator run inside a token ("x.y"): keep it in the segment.
      segment.append(text, start, run_end - start);
      i = run_end;
      continue;
    }
    segment.append(text, start, i - start);
  }
  std::string s = trimmed(segment);
  if (!s.empty()) sentences.push_back(std::move(s));
  return sentences;
}

std::vector<std::string> clean_tokens(const std::vector<std::string>& tokens,
                                      const PreprocessConfig& cfg) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (!cfg.keep_hashtag_body && is_hashtag_token(token)) continue;
    std::string cleaned;
    bool has_non_ascii = false;
    for (std::size_t i = 0; i < token.size();) {
      char32_t cp = utf8::decode(token, i);
      if (cp >= 0x80) {
        has_non_ascii = true;
        break;
      }
      if (chars::is_ascii_upper(cp)) cp += 'a' - 'A';
      if (chars::is_ascii_lower(cp)) cleaned.push_back(static_cast<char>(cp));
      // Punctuation, symbols and digits are stripped.
    }
    if (has_non_ascii) continue;
    if (cleaned.empty()) continue;
    if (cleaned.size() == 1) continue;
    if (cfg.stopwords && cfg.stopwords->count(cleaned)) continue;
    out.push_back(std::move(cleaned));
  }
  return out;
}

bool is_hashtag_token(const std::string& token) {
  if (token.empty() || token[0] != '#') return false;
  std::size_t i = 1;
  if (i >= token.size()) return false;
  char32_t cp = utf8::decode(token, i);
  return chars::is_ascii_alpha(cp) || chars::is_ascii_digit(cp) || cp == '_';
}

bool is_mention_token(const std::string& token) {
  return !token.empty() && token[0] == '@';
}

bool is_url_token(const std::string& token) {
  return token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0 ||
         token.rfind("www.", 0) == 0;
}

bool is_capitalized_token(const std::string& token) {
  if (token.empty()) return false;
  std::size_t i = 0;
  return chars::is_ascii_upper(utf8::decode(token, i));
}

ProcessedText preprocess_text(const std::string& text, const PreprocessConfig& cfg) {
  ProcessedText pt;
  pt.raw = text;
  pt.tokens_raw = tokenize(text);
  pt.sentences = split_sentences(text);
  pt.tokens_clean = clean_tokens(pt.tokens_raw, cfg);
  pt.stems.reserve(pt.tokens_clean.size());
  for (const auto& t : pt.tokens_clean) pt.stems.push_back(porter_stem(t));

  RawTextCounts& c = pt.counts;
  c.word_count = static_cast<std::int64_t>(pt.tokens_raw.size());
  c.char_count = static_cast<std::int64_t>(utf8::length(text));
  c.sentence_count = static_cast<std::int64_t>(pt.sentences.size());

  std::int64_t total_token_cps = 0;
  for (const auto& token : pt.tokens_raw) {
    total_token_cps += static_cast<std::int64_t>(utf8::length(token));
    if (is_hashtag_token(token)) ++c.hashtag_count;
    if (is_mention_token(token)) ++c.mention_count;
    if (is_url_token(token)) ++c.url_count;
    if (is_capitalized_token(token)) ++c.capitalized_word_count;
    if (cfg.stopwords) {
      std::string lowered;
      lowered.reserve(token.size());
      bool ascii = true;
      for (unsigned char ch : token) {
        if (ch >= 0x80) {
          ascii = false;
          break;
        }
        lowered.push_back(static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch + 32 : ch));
      }
      if (ascii && cfg.stopwords->count(lowered)) ++c.stopword_count;
    }
  }
  c.avg_word_length =
      c.word_count > 0 ? static_cast<double>(total_token_cps) / static_cast<double>(c.word_count)
                       : 0.0;
  c.avg_sentence_length =
      c.sentence_count > 0
          ? static_cast<double>(c.word_count) / static_cast<double>(c.sentence_count)
          : 0.0;

  for (std::size_t i = 0; i < text.size();) {
    if (chars::is_punct(utf8::decode(text, i))) ++c.punctuation_count;
  }
  return pt;
}

}  // namespace ctxabuse
