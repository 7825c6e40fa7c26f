#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ctxabuse {

enum class Label : std::uint8_t { non_abusive = 0, abusive = 1 };

inline const char* label_name(Label l) {
  return l == Label::abusive ? "abusive" : "non_abusive";
}
std::optional<Label> label_from_name(const std::string& s);

// Metadata snapshot of the account that authored the parent post.
struct AccountMeta {
  std::string account_id;
  std::int64_t followers_count = 0;
  std::int64_t friends_count = 0;
  std::int64_t favourites_count = 0;
  std::int64_t listed_count = 0;
  std::int64_t statuses_count = 0;
  bool geo_enabled = false;
  bool verified = false;
  bool contributors_enabled = false;
  bool is_translator = false;
  bool is_translation_enabled = false;
  bool default_profile = false;
  bool default_profile_image = false;
  bool following = false;           // optional in input; defaults to false
  bool follow_request_sent = false; // optional in input; defaults to false
  bool notifications = false;       // optional in input; defaults to false
  bool has_extended_profile = false;

  bool operator==(const AccountMeta&) const = default;
};

struct PostMeta {
  std::int64_t retweet_count = 0;
  std::int64_t favourite_count = 0;

  bool operator==(const PostMeta&) const = default;
};

// One classification unit: a parent post, one direct reply to it, the
// targeted account's metadata and the reply's label.
struct Instance {
  std::string conversation_id;
  std::string parent_text;
  std::string reply_text;
  PostMeta parent_meta;
  AccountMeta target_account;
  Label label = Label::non_abusive;
  std::vector<double> dense_embedding;  // empty when absent

  bool operator==(const Instance&) const = default;
};

struct Corpus {
  std::vector<Instance> instances;
  int embedding_dim = 0;  // 0 when no instance carries an embedding
};

struct CorpusStats {
  std::int64_t n_accounts = 0;
  std::int64_t n_conversations = 0;
  std::int64_t n_conversations_with_abusive = 0;
  std::int64_t n_conversations_without_abusive = 0;
  std::int64_t n_replies = 0;
  std::int64_t n_abusive = 0;
  std::int64_t n_non_abusive = 0;

  bool operator==(const CorpusStats&) const = default;
};

struct ParseIssue {
  std::int64_t line = 0;
  std::string message;
};

struct ParseResult {
  Corpus corpus;
  std::vector<ParseIssue> errors;
};

// Reads one JSON record per line. Records that fail validation are
// reported in `errors` with their 1-based line number and excluded from
// the corpus; parsable records are kept. Instances are stable-sorted by
// conversation_id so conversation groups are contiguous.
ParseResult parse_conversations(std::istream& in);

// Canonical line-delimited serialization; parse(serialize(c)) == c.
void serialize_corpus(const Corpus& c, std::ostream& out);

CorpusStats corpus_stats(const Corpus& c);

// Returns one description per violated invariant; empty means valid.
std::vector<std::string> validate_corpus(const Corpus& c);

}  // namespace ctxabuse
