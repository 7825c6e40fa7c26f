#include "ctxabuse/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ctxabuse/models/scaler.hpp"
#include "ctxabuse/util.hpp"

namespace ctxabuse {

FamilyMask parse_mask(const std::string& s) {
  FamilyMask m;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (part == "rt") m.rt = true;
    else if (part == "te") m.te = true;
    else if (part == "mt") m.mt = true;
    else if (part == "tw") m.tw = true;
    else if (part == "ac") m.ac = true;
    else if (part == "emb") m.emb = true;
    else throw ConfigError("unknown feature family '" + part + "' in mask '" + s + "'");
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (!m.legal())
    throw ConfigError("illegal mask '" + s + "': rt and te are mutually exclusive");
  return m;
}

std::string mask_to_string(const FamilyMask& m) {
  std::string s;
  const auto add = [&](bool flag, const char* name) {
    if (!flag) return;
    if (!s.empty()) s += '+';
    s += name;
  };
  add(m.rt, "rt");
  add(m.te, "te");
  add(m.mt, "mt");
  add(m.tw, "tw");
  add(m.ac, "ac");
  add(m.emb, "emb");
  return s;
}

std::vector<FamilyMask> paper16_masks() {
  std::vector<FamilyMask> masks;
  // Rows 1-15: every non-empty subset of {te, mt, tw, ac} in the grid's
  // published order; row 16 is the rt baseline.
  const char* rows[] = {"te",       "mt",       "tw",       "ac",       "te+mt",
                        "te+tw",    "te+ac",    "mt+tw",    "mt+ac",    "tw+ac",
                        "te+mt+tw", "te+mt+ac", "te+tw+ac", "mt+tw+ac", "te+mt+tw+ac",
                        "rt"};
  for (const char* r : rows) masks.push_back(parse_mask(r));
  return masks;
}

Vocabulary fit_vectorizer(const std::vector<const std::vector<std::string>*>& texts,
                          std::int32_t max_dims) {
  if (texts.empty()) throw ConfigError("fit_vectorizer: no training texts");
  if (max_dims <= 0) throw ConfigError("fit_vectorizer: max_dims must be positive");

  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto* stems : texts) {
    for (std::size_t i = 0; i < stems->size(); ++i) {
      ++counts[(*stems)[i]];
      if (i + 1 < stems->size()) ++counts[(*stems)[i] + " " + (*stems)[i + 1]];
    }
  }
  std::vector<std::pair<const std::string*, std::int64_t>> ranked;
  ranked.reserve(counts.size());
  for (const auto& [gram, n] : counts) ranked.emplace_back(&gram, n);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return *a.first < *b.first;
  });
  if (static_cast<std::int64_t>(ranked.size()) > max_dims) ranked.resize(max_dims);

  Vocabulary v;
  v.max_dims = max_dims;
  v.grams.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    v.grams.push_back(*ranked[i].first);
    v.index.emplace(v.grams.back(), static_cast<std::int32_t>(i));
  }
  return v;
}

Vocabulary fit_vectorizer(const std::vector<std::vector<std::string>>& texts,
                          std::int32_t max_dims) {
  std::vector<const std::vector<std::string>*> ptrs;
  ptrs.reserve(texts.size());
  for (const auto& t : texts) ptrs.push_back(&t);
  return fit_vectorizer(ptrs, max_dims);
}

SparseVec vectorize(const std::vector<std::string>& stems, const Vocabulary& v) {
  std::map<std::int32_t, double> counts;
  const auto bump = [&](const std::string& gram) {
    auto it = v.index.find(gram);
    if (it != v.index.end()) counts[it->second] += 1.0;
  };
  for (std::size_t i = 0; i < stems.size(); ++i) {
    bump(stems[i]);
    if (i + 1 < stems.size()) bump(stems[i] + " " + stems[i + 1]);
  }
  return SparseVec(counts.begin(), counts.end());
}

SentimentScores sentiment_scores(const std::vector<std::string>& tokens_clean,
                                 const SentimentLexicon& lex) {
  SentimentScores s;
  if (tokens_clean.empty()) return s;
  std::int64_t unmatched = 0;
  for (const auto& t : tokens_clean) {
    if (const double* score = lex.find(t)) {
      s.positive_sum += std::max(*score, 0.0);
      s.negative_sum += std::max(-*score, 0.0);
    } else {
      ++unmatched;
    }
  }
  s.neutral_fraction = static_cast<double>(unmatched) / static_cast<double>(tokens_clean.size());
  return s;
}

std::int64_t named_entity_count(const std::vector<std::string>& tokens_raw) {
  std::int64_t runs = 0;
  bool in_run = false;
  bool sentence_initial = true;
  for (const auto& token : tokens_raw) {
    bool counts = is_capitalized_token(token) && !sentence_initial;
    if (counts && !in_run) ++runs;
    in_run = counts;
    char last = token.empty() ? '\0' : token.back();
    sentence_initial = last == '.' || last == '!' || last == '?';
  }
  return runs;
}

namespace {

std::int64_t stem_match_count(const std::vector<std::string>& stems, const WordSet& set) {
  std::int64_t n = 0;
  for (const auto& s : stems) n += set.count(s) ? 1 : 0;
  return n;
}

std::int64_t stemmed_char_count(const std::vector<std::string>& stems) {
  std::int64_t n = 0;
  for (const auto& s : stems) n += static_cast<std::int64_t>(s.size());
  return n;
}

void side_meta_features(const ProcessedText& pt, const AssetBundle& assets, double* out) {
  const RawTextCounts& c = pt.counts;
  std::int64_t positive = 0, negative = 0;
  for (const auto& t : pt.tokens_clean) {
    if (const double* score = assets.lexicon.find(t)) {
      if (*score > 0) ++positive;
      if (*score < 0) ++negative;
    }
  }
  int i = 0;
  out[i++] = static_cast<double>(c.word_count);
  out[i++] = static_cast<double>(c.char_count);
  out[i++] = static_cast<double>(c.sentence_count);
  out[i++] = c.avg_word_length;
  out[i++] = c.avg_sentence_length;
  out[i++] = static_cast<double>(c.hashtag_count);
  out[i++] = static_cast<double>(c.mention_count);
  out[i++] = static_cast<double>(c.url_count);
  out[i++] = static_cast<double>(c.punctuation_count);
  out[i++] = static_cast<double>(c.stopword_count);
  out[i++] = static_cast<double>(c.capitalized_word_count);
  out[i++] = static_cast<double>(stem_match_count(pt.stems, assets.hate_stems));
  out[i++] = static_cast<double>(stem_match_count(pt.stems, assets.abusive_stems));
  out[i++] = static_cast<double>(positive);
  out[i++] = static_cast<double>(negative);
  out[i++] = static_cast<double>(stemmed_char_count(pt.stems));
}

const char* kSideFeatureNames[] = {
    "word_count",         "char_count",      "sentence_count",   "avg_word_length",
    "avg_sentence_length", "hashtag_count",  "mention_count",    "url_count",
    "punctuation_count",  "stopword_count",  "capitalized_word_count",
    "hate_word_count",    "abusive_word_count", "positive_word_count",
    "negative_word_count", "stemmed_char_count"};

}  // namespace

Eigen::VectorXd meta_text_features(const ProcessedText& parent, const ProcessedText& reply,
                                   const AssetBundle& assets) {
  Eigen::VectorXd v(kMtDims);
  side_meta_features(parent, assets, v.data());
  side_meta_features(reply, assets, v.data() + kMtDims / 2);
  return v;
}

const std::vector<std::string>& meta_text_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const char* s : kSideFeatureNames) n.push_back(std::string("parent_") + s);
    for (const char* s : kSideFeatureNames) n.push_back(std::string("reply_") + s);
    return n;
  }();
  return names;
}

Eigen::VectorXd tweet_features(const PostMeta& parent_meta, const ProcessedText& parent,
                               const ProcessedText& reply, const SentimentLexicon& lex) {
  (void)parent;
  SentimentScores s = sentiment_scores(reply.tokens_clean, lex);
  Eigen::VectorXd v(kTwDims);
  v << static_cast<double>(parent_meta.retweet_count),
      static_cast<double>(parent_meta.favourite_count), s.positive_sum, s.negative_sum,
      s.neutral_fraction, static_cast<double>(named_entity_count(reply.tokens_raw));
  return v;
}

const std::vector<std::string>& tweet_feature_names() {
  static const std::vector<std::string> names = {
      "parent_retweet_count",    "parent_favourite_count",
      "reply_positive_sentiment", "reply_negative_sentiment",
      "reply_neutral_fraction",  "reply_named_entity_count"};
  return names;
}

Eigen::VectorXd account_features(const AccountMeta& a) {
  Eigen::VectorXd v(kAcDims);
  v << static_cast<double>(a.followers_count), static_cast<double>(a.friends_count),
      static_cast<double>(a.favourites_count), static_cast<double>(a.listed_count),
      static_cast<double>(a.statuses_count), a.geo_enabled ? 1.0 : 0.0,
      a.verified ? 1.0 : 0.0, a.contributors_enabled ? 1.0 : 0.0, a.is_translator ? 1.0 : 0.0,
      a.is_translation_enabled ? 1.0 : 0.0, a.default_profile ? 1.0 : 0.0,
      a.default_profile_image ? 1.0 : 0.0, a.following ? 1.0 : 0.0,
      a.follow_request_sent ? 1.0 : 0.0, a.notifications ? 1.0 : 0.0,
      a.has_extended_profile ? 1.0 : 0.0;
  return v;
}

const std::vector<std::string>& account_feature_names() {
  static const std::vector<std::string> names = {
      "followers_count",      "friends_count",       "favourites_count",
      "listed_count",         "statuses_count",      "geo_enabled",
      "verified",             "contributors_enabled", "is_translator",
      "is_translation_enabled", "default_profile",   "default_profile_image",
      "following",            "follow_request_sent", "notifications",
      "has_extended_profile"};
  return names;
}

Eigen::VectorXd te_sentiment_features(const ProcessedText& parent, const ProcessedText& reply,
                                      const SentimentLexicon& lex) {
  SentimentScores r = sentiment_scores(reply.tokens_clean, lex);
  SentimentScores p = sentiment_scores(parent.tokens_clean, lex);
  Eigen::VectorXd v(kTeSentDims);
  v << r.positive_sum, r.negative_sum, r.neutral_fraction, p.positive_sum, p.negative_sum,
      p.neutral_fraction;
  return v;
}

const std::vector<std::string>& te_sentiment_feature_names() {
  static const std::vector<std::string> names = {
      "te_reply_positive_sentiment", "te_reply_negative_sentiment",
      "te_reply_neutral_fraction",   "te_parent_positive_sentiment",
      "te_parent_negative_sentiment", "te_parent_neutral_fraction"};
  return names;
}

DenseLayout dense_layout(const FamilyMask& mask, int embedding_dim) {
  DenseLayout layout;
  const auto add_family = [&](const char* family, const std::vector<std::string>& names) {
    FamilyRange r{family, layout.dims(), layout.dims() + static_cast<int>(names.size())};
    layout.ranges.push_back(r);
    layout.names.insert(layout.names.end(), names.begin(), names.end());
  };
  if (mask.mt) add_family("mt", meta_text_feature_names());
  if (mask.tw) add_family("tw", tweet_feature_names());
  if (mask.ac) add_family("ac", account_feature_names());
  if (mask.emb) {
    std::vector<std::string> names;
    for (int i = 0; i < embedding_dim; ++i) names.push_back("embedding_" + std::to_string(i));
    add_family("emb", names);
  }
  if (mask.te) add_family("te", te_sentiment_feature_names());
  return layout;
}

FeatureSpace make_feature_space(const FamilyMask& mask, const Vocabulary* vocab,
                                int embedding_dim) {
  if (!mask.legal()) throw ConfigError("illegal family mask");
  if (mask.has_text() && vocab == nullptr)
    throw ConfigError("mask with a text family requires a fitted vocabulary");
  if (mask.emb && embedding_dim <= 0)
    throw ConfigError("mask includes emb but the corpus declares no embeddings");
  FeatureSpace space;
  space.mask = mask;
  space.vocab_size = mask.has_text() ? vocab->size() : 0;
  space.embedding_dim = mask.emb ? embedding_dim : 0;
  space.dense = dense_layout(mask, space.embedding_dim);
  return space;
}

FeatureVector assemble(const Instance& inst, const ProcessedText& parent_pt,
                       const ProcessedText& reply_pt, const FamilyMask& mask,
                       const Vocabulary* vocab, const AssetBundle& assets,
                       const ScalerParams* scaler) {
  if (!mask.legal()) throw ConfigError("assemble: illegal family mask");
  if (mask.has_text() && vocab == nullptr)
    throw ConfigError("assemble: text family active but no vocabulary given");

  FeatureVector fv;
  if (mask.rt) {
    fv.sparse = vectorize(reply_pt.stems, *vocab);
  } else if (mask.te) {
    fv.sparse = vectorize(reply_pt.stems, *vocab);
    SparseVec parent_block = vectorize(parent_pt.stems, *vocab);
    std::int32_t offset = vocab->size();
    fv.sparse.reserve(fv.sparse.size() + parent_block.size());
    for (const auto& [idx, val] : parent_block) fv.sparse.emplace_back(idx + offset, val);
  }

  int emb_dim = mask.emb ? static_cast<int>(inst.dense_embedding.size()) : 0;
  if (mask.emb && emb_dim == 0)
    throw DataError("assemble: mask includes emb but instance has no dense_embedding");
  DenseLayout layout = dense_layout(mask, emb_dim);
  fv.dense.resize(layout.dims());
  int at = 0;
  const auto put = [&](const Eigen::VectorXd& block) {
    fv.dense.segment(at, block.size()) = block;
    at += static_cast<int>(block.size());
  };
  if (mask.mt) put(meta_text_features(parent_pt, reply_pt, assets));
  if (mask.tw) put(tweet_features(inst.parent_meta, parent_pt, reply_pt, assets.lexicon));
  if (mask.ac) put(account_features(inst.target_account));
  if (mask.emb)
    put(Eigen::Map<const Eigen::VectorXd>(inst.dense_embedding.data(), emb_dim));
  if (mask.te) put(te_sentiment_features(parent_pt, reply_pt, assets.lexicon));

  if (scaler != nullptr) apply_scaler_in_place(fv.dense, *scaler);
  return fv;
}

}  // namespace ctxabuse
