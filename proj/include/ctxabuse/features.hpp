#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "ctxabuse/assets.hpp"
#include "ctxabuse/corpus.hpp"
#include "ctxabuse/text.hpp"

namespace ctxabuse {

// Which feature families are active for one experiment cell.
// rt (reply text only) and te (reply + parent text) are mutually exclusive.
struct FamilyMask {
  bool rt = false;
  bool te = false;
  bool mt = false;
  bool tw = false;
  bool ac = false;
  bool emb = false;

  bool any() const { return rt || te || mt || tw || ac || emb; }
  bool legal() const { return any() && !(rt && te); }
  bool has_text() const { return rt || te; }
  bool operator==(const FamilyMask&) const = default;
};

// Parses "te+mt+tw" style mask strings; throws ConfigError on unknown or
// illegal combinations.
FamilyMask parse_mask(const std::string& s);
std::string mask_to_string(const FamilyMask& m);

// The 16 mask rows of the experiment grid: the 15 non-empty combinations
// of {te, mt, tw, ac} followed by the rt baseline.
std::vector<FamilyMask> paper16_masks();

// n-gram -> dense column index over unigrams and bigrams of stems.
// Indices follow descending training frequency, ties lexicographic.
struct Vocabulary {
  std::vector<std::string> grams;                    // index -> n-gram
  std::unordered_map<std::string, std::int32_t> index;  // n-gram -> index
  std::int32_t max_dims = 5000;

  std::int32_t size() const { return static_cast<std::int32_t>(grams.size()); }
  bool operator==(const Vocabulary& o) const {
    return grams == o.grams && max_dims == o.max_dims;
  }
};

using SparseEntry = std::pair<std::int32_t, double>;
using SparseVec = std::vector<SparseEntry>;  // sorted by index

// Counts every unigram and adjacent bigram over the training stem lists
// and keeps the top max_dims. Throws ConfigError when texts is empty.
Vocabulary fit_vectorizer(const std::vector<const std::vector<std::string>*>& texts,
                          std::int32_t max_dims);
Vocabulary fit_vectorizer(const std::vector<std::vector<std::string>>& texts,
                          std::int32_t max_dims);

// In-vocabulary unigram/bigram counts, sorted by index; OOV grams ignored.
SparseVec vectorize(const std::vector<std::string>& stems, const Vocabulary& v);

struct SentimentScores {
  double positive_sum = 0.0;
  double negative_sum = 0.0;
  double neutral_fraction = 1.0;  // 1.0 for an empty token list
};

SentimentScores sentiment_scores(const std::vector<std::string>& tokens_clean,
                                 const SentimentLexicon& lex);

// Heuristic entity count: maximal runs of capitalized tokens, skipping
// tokens in sentence-initial position (index 0 or preceded by a token
// ending in '.', '!' or '?').
std::int64_t named_entity_count(const std::vector<std::string>& tokens_raw);

// Family sizes (excluding the embedding family, whose size is data-driven).
inline constexpr int kMtDims = 32;
inline constexpr int kTwDims = 6;
inline constexpr int kAcDims = 16;
inline constexpr int kTeSentDims = 6;

// Mt: 16 per-side measurements, parent block then reply block.
Eigen::VectorXd meta_text_features(const ProcessedText& parent, const ProcessedText& reply,
                                   const AssetBundle& assets);
const std::vector<std::string>& meta_text_feature_names();

// Tw: parent post metadata plus reply sentiment and entity scalars.
Eigen::VectorXd tweet_features(const PostMeta& parent_meta, const ProcessedText& parent,
                               const ProcessedText& reply, const SentimentLexicon& lex);
const std::vector<std::string>& tweet_feature_names();

// Ac: the 16 account fields after account_id, booleans as 0/1.
Eigen::VectorXd account_features(const AccountMeta& a);
const std::vector<std::string>& account_feature_names();

// Te's dense scalars: reply then parent sentiment triples.
Eigen::VectorXd te_sentiment_features(const ProcessedText& parent, const ProcessedText& reply,
                                      const SentimentLexicon& lex);
const std::vector<std::string>& te_sentiment_feature_names();

// Describes one dense range and the family that produced it.
struct FamilyRange {
  std::string family;  // "mt", "tw", "ac", "emb", "te"
  int begin = 0;
  int end = 0;
};

// The dense layout implied by a mask. Canonical order: mt, tw, ac, emb,
// then te's sentiment scalars.
struct DenseLayout {
  std::vector<std::string> names;
  std::vector<FamilyRange> ranges;

  int dims() const { return static_cast<int>(names.size()); }
};

DenseLayout dense_layout(const FamilyMask& mask, int embedding_dim);

// Geometry of the full feature space for a mask: the sparse text block
// (|V| for rt, 2|V| for te, reply range first) plus the dense layout.
struct FeatureSpace {
  FamilyMask mask;
  std::int32_t vocab_size = 0;
  int embedding_dim = 0;
  DenseLayout dense;

  std::int32_t sparse_dims() const {
    return mask.te ? 2 * vocab_size : (mask.rt ? vocab_size : 0);
  }
  std::int64_t total_dims() const { return sparse_dims() + dense.dims(); }
};

FeatureSpace make_feature_space(const FamilyMask& mask, const Vocabulary* vocab,
                                int embedding_dim);

struct FeatureVector {
  SparseVec sparse;
  Eigen::VectorXd dense;
};

struct ScalerParams;  // models/scaler.hpp

// Builds the feature vector for one instance under `mask`. `vocab` is
// required when a text family is active; `scaler`, when given,
// z-standardizes the dense block with training-fold parameters.
FeatureVector assemble(const Instance& inst, const ProcessedText& parent_pt,
                       const ProcessedText& reply_pt, const FamilyMask& mask,
                       const Vocabulary* vocab, const AssetBundle& assets,
                       const ScalerParams* scaler);

}  // namespace ctxabuse
