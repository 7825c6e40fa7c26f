#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ctxabuse/text.hpp"

namespace ctxabuse {

// word -> score in [-1, +1]; keys are lowercase.
struct SentimentLexicon {
  std::unordered_map<std::string, double> scores;

  const double* find(const std::string& word) const {
    auto it = scores.find(word);
    return it == scores.end() ? nullptr : &it->second;
  }
};

// The word-level assets every run depends on. Hate/abusive lists are
// stemmed at load time so membership tests run against stems.
struct AssetBundle {
  WordSet stopwords;
  SentimentLexicon lexicon;
  WordSet hate_stems;
  WordSet abusive_stems;
  // path -> FNV-1a checksum of the file bytes, for run manifests.
  std::vector<std::pair<std::string, std::string>> checksums;
};

struct AssetPaths {
  std::string stopwords;
  std::string sentiment_lexicon;
  std::string hate_words;
  std::string abusive_words;
};

// Paths of the assets shipped with the repository.
AssetPaths default_asset_paths();

// Loads all four assets; empty path fields fall back to the defaults.
// Throws DataError on unreadable files or malformed lexicon rows.
AssetBundle load_assets(const AssetPaths& paths);

// One term per line; '#' starts a comment; blank lines ignored.
std::vector<std::string> read_wordlist(const std::string& path);

SentimentLexicon read_sentiment_lexicon(const std::string& path);

}  // namespace ctxabuse
