#include "ctxabuse/assets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ctxabuse/porter.hpp"
#include "ctxabuse/util.hpp"

#ifndef CTXABUSE_ASSET_DIR
#define CTXABUSE_ASSET_DIR "assets"
#endif

namespace ctxabuse {

AssetPaths default_asset_paths() {
  const std::string base = CTXABUSE_ASSET_DIR;
  return AssetPaths{
      base + "/stopwords.txt",
      base + "/sentiment_lexicon.tsv",
      base + "/hate_words.txt",
      base + "/abusive_words.txt",
  };
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open asset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

}  // namespace

std::vector<std::string> read_wordlist(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = strip_comment(line);
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

SentimentLexicon read_sentiment_lexicon(const std::string& path) {
  std::istringstream in(read_file(path));
  SentimentLexicon lex;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string row = strip_comment(line);
    if (row.empty()) continue;
    auto tab = row.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected word<TAB>score");
    std::string word = row.substr(0, tab);
    double score = 0.0;
    try {
      score = std::stod(row.substr(tab + 1));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad score");
    }
    if (!std::isfinite(score) || score < -1.0 || score > 1.0)
      throw DataError(path + ":" + std::to_string(line_no) + ": score outside [-1,1]");
    lex.scores[word] = score;
  }
  return lex;
}

AssetBundle load_assets(const AssetPaths& overrides) {
  AssetPaths defaults = default_asset_paths();
  AssetPaths paths{
      overrides.stopwords.empty() ? defaults.stopwords : overrides.stopwords,
      overrides.sentiment_lexicon.empty() ? defaults.sentiment_lexicon
                                          : overrides.sentiment_lexicon,
      overrides.hate_words.empty() ? defaults.hate_words : overrides.hate_words,
      overrides.abusive_words.empty() ? defaults.abusive_words : overrides.abusive_words,
  };

  AssetBundle bundle;
  for (const auto& w : read_wordlist(paths.stopwords)) bundle.stopwords.insert(w);
  bundle.lexicon = read_sentiment_lexicon(paths.sentiment_lexicon);
  for (const auto& w : read_wordlist(paths.hate_words)) bundle.hate_stems.insert(porter_stem(w));
  for (const auto& w : read_wordlist(paths.abusive_words))
    bundle.abusive_stems.insert(porter_stem(w));

  for (const auto& p : {paths.stopwords, paths.sentiment_lexicon, paths.hate_words,
                        paths.abusive_words})
    bundle.checksums.emplace_back(p, fnv1a_hex(read_file(p)));
  return bundle;
}

}  // namespace ctxabuse
