#include "ctxabuse/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ctxabuse/util.hpp"

namespace ctxabuse {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::optional<Label> label_from_name(const std::string& s) {
  if (s == "abusive") return Label::abusive;
  if (s == "non_abusive") return Label::non_abusive;
  return std::nullopt;
}

namespace {

struct FieldReader {
  const json& rec;
  std::string error;  // first problem found, empty if none

  void fail(const std::string& msg) {
    if (error.empty()) error = msg;
  }

  std::string required_string(const char* name) {
    auto it = rec.find(name);
    if (it == rec.end()) {
      fail(std::string("missing required field '") + name + "'");
      return {};
    }
    if (!it->is_string()) {
      fail(std::string("field '") + name + "' must be a string");
      return {};
    }
    return utf8::sanitize(it->get<std::string>());
  }

  std::int64_t required_count(const char* name) {
    auto it = rec.find(name);
    if (it == rec.end()) {
      fail(std::string("missing required field '") + name + "'");
      return 0;
    }
    if (!it->is_number_integer()) {
      fail(std::string("field '") + name + "' must be an integer");
      return 0;
    }
    auto v = it->get<std::int64_t>();
    if (v < 0) {
      fail(std::string("field '") + name + "' is negative");
      return 0;
    }
    return v;
  }

  bool required_bool(const char* name) {
    auto it = rec.find(name);
    if (it == rec.end()) {
      fail(std::string("missing required field '") + name + "'");
      return false;
    }
    if (!it->is_boolean()) {
      fail(std::string("field '") + name + "' must be a boolean");
      return false;
    }
    return it->get<bool>();
  }

  bool optional_bool(const char* name) {
    auto it = rec.find(name);
    if (it == rec.end() || it->is_null()) return false;
    if (!it->is_boolean()) {
      fail(std::string("field '") + name + "' must be a boolean");
      return false;
    }
    return it->get<bool>();
  }
};

// Returns the parsed instance, or an error message.
std::string parse_record(const json& rec, Instance& inst, std::vector<double>& embedding) {
  if (!rec.is_object()) return "record is not an object";
  FieldReader r{rec, {}};

  inst.conversation_id = r.required_string("conversation_id");
  inst.parent_text = r.required_string("parent_text");
  inst.reply_text = r.required_string("reply_text");
  std::string label = r.required_string("label");
  inst.parent_meta.retweet_count = r.required_count("parent_retweet_count");
  inst.parent_meta.favourite_count = r.required_count("parent_favourite_count");

  AccountMeta& a = inst.target_account;
  a.account_id = r.required_string("account_id");
  a.followers_count = r.required_count("followers_count");
  a.friends_count = r.required_count("friends_count");
  a.favourites_count = r.required_count("favourites_count");
  a.listed_count = r.required_count("listed_count");
  a.statuses_count = r.required_count("statuses_count");
  a.geo_enabled = r.required_bool("geo_enabled");
  a.verified = r.required_bool("verified");
  a.contributors_enabled = r.required_bool("contributors_enabled");
  a.is_translator = r.required_bool("is_translator");
  a.is_translation_enabled = r.required_bool("is_translation_enabled");
  a.default_profile = r.required_bool("default_profile");
  a.default_profile_image = r.required_bool("default_profile_image");
  a.following = r.optional_bool("following");
  a.follow_request_sent = r.optional_bool("follow_request_sent");
  a.notifications = r.optional_bool("notifications");
  a.has_extended_profile = r.required_bool("has_extended_profile");

  if (!r.error.empty()) return r.error;

  if (auto l = label_from_name(label)) {
    inst.label = *l;
  } else {
    return "label '" + label + "' is not one of {abusive, non_abusive}";
  }
  if (inst.parent_text.empty()) return "parent_text is empty";
  if (inst.reply_text.empty()) return "reply_text is empty";
  if (a.account_id.empty()) return "account_id is empty";

  embedding.clear();
  if (auto it = rec.find("dense_embedding"); it != rec.end() && !it->is_null()) {
    if (!it->is_array()) return "dense_embedding must be an array of numbers";
    for (const auto& v : *it) {
      if (!v.is_number()) return "dense_embedding must be an array of numbers";
      embedding.push_back(v.get<double>());
    }
    if (embedding.empty()) return "dense_embedding must be non-empty when present";
  }
  return {};
}

}  // namespace

ParseResult parse_conversations(std::istream& in) {
  ParseResult result;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (blank) continue;

    json rec = json::parse(utf8::sanitize(line), nullptr, false);
    if (rec.is_discarded()) {
      result.errors.push_back({line_no, "malformed record (invalid JSON)"});
      continue;
    }
    Instance inst;
    std::vector<double> embedding;
    std::string err = parse_record(rec, inst, embedding);
    if (err.empty() && !embedding.empty()) {
      if (result.corpus.embedding_dim == 0) {
        result.corpus.embedding_dim = static_cast<int>(embedding.size());
      } else if (static_cast<int>(embedding.size()) != result.corpus.embedding_dim) {
        err = "dense_embedding length " + std::to_string(embedding.size()) +
              " does not match corpus dimension " +
              std::to_string(result.corpus.embedding_dim);
      }
    }
    if (!err.empty()) {
      result.errors.push_back({line_no, err});
      continue;
    }
    inst.dense_embedding = std::move(embedding);
    result.corpus.instances.push_back(std::move(inst));
  }
  std::stable_sort(result.corpus.instances.begin(), result.corpus.instances.end(),
                   [](const Instance& a, const Instance& b) {
                     return a.conversation_id < b.conversation_id;
                   });
  return result;
}

void serialize_corpus(const Corpus& c, std::ostream& out) {
  for (const auto& inst : c.instances) {
    const AccountMeta& a = inst.target_account;
    ordered_json rec;
    rec["conversation_id"] = inst.conversation_id;
    rec["parent_text"] = inst.parent_text;
    rec["reply_text"] = inst.reply_text;
    rec["label"] = label_name(inst.label);
    rec["parent_retweet_count"] = inst.parent_meta.retweet_count;
    rec["parent_favourite_count"] = inst.parent_meta.favourite_count;
    rec["account_id"] = a.account_id;
    rec["followers_count"] = a.followers_count;
    rec["friends_count"] = a.friends_count;
    rec["favourites_count"] = a.favourites_count;
    rec["listed_count"] = a.listed_count;
    rec["statuses_count"] = a.statuses_count;
    rec["geo_enabled"] = a.geo_enabled;
    rec["verified"] = a.verified;
    rec["contributors_enabled"] = a.contributors_enabled;
    rec["is_translator"] = a.is_translator;
    rec["is_translation_enabled"] = a.is_translation_enabled;
    rec["default_profile"] = a.default_profile;
    rec["default_profile_image"] = a.default_profile_image;
    rec["following"] = a.following;
    rec["follow_request_sent"] = a.follow_request_sent;
    rec["notifications"] = a.notifications;
    rec["has_extended_profile"] = a.has_extended_profile;
    if (!inst.dense_embedding.empty()) rec["dense_embedding"] = inst.dense_embedding;
    out << rec.dump() << '\n';
  }
}

CorpusStats corpus_stats(const Corpus& c) {
  CorpusStats s;
  s.n_replies = static_cast<std::int64_t>(c.instances.size());
  std::set<std::string> accounts;
  std::map<std::string, bool> conversation_has_abusive;
  for (const auto& inst : c.instances) {
    accounts.insert(inst.target_account.account_id);
    bool& flag = conversation_has_abusive[inst.conversation_id];
    if (inst.label == Label::abusive) {
      flag = true;
      ++s.n_abusive;
    } else {
      ++s.n_non_abusive;
    }
  }
  s.n_accounts = static_cast<std::int64_t>(accounts.size());
  s.n_conversations = static_cast<std::int64_t>(conversation_has_abusive.size());
  for (const auto& [id, has] : conversation_has_abusive)
    has ? ++s.n_conversations_with_abusive : ++s.n_conversations_without_abusive;
  return s;
}

std::vector<std::string> validate_corpus(const Corpus& c) {
  std::vector<std::string> violations;
  const auto where = [](std::size_t i) { return "instance " + std::to_string(i) + ": "; };

  std::unordered_map<std::string, std::pair<std::size_t, const AccountMeta*>> first_seen;
  std::set<std::string> closed_conversations;
  std::string current_conversation;

  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const Instance& inst = c.instances[i];
    const AccountMeta& a = inst.target_account;

    if (inst.conversation_id != current_conversation) {
      if (!closed_conversations.insert(inst.conversation_id).second)
        violations.push_back(where(i) + "conversation_id group '" + inst.conversation_id +
                             "' is not contiguous");
      current_conversation = inst.conversation_id;
    }

    if (inst.parent_text.empty()) violations.push_back(where(i) + "parent_text is empty");
    if (inst.reply_text.empty()) violations.push_back(where(i) + "reply_text is empty");
    if (a.account_id.empty()) violations.push_back(where(i) + "account_id is empty");

    struct CountField {
      const char* name;
      std::int64_t value;
    };
    const CountField counts[] = {
        {"followers_count", a.followers_count},   {"friends_count", a.friends_count},
        {"favourites_count", a.favourites_count}, {"listed_count", a.listed_count},
        {"statuses_count", a.statuses_count},     {"parent_retweet_count",
                                                   inst.parent_meta.retweet_count},
        {"parent_favourite_count", inst.parent_meta.favourite_count},
    };
    for (const auto& f : counts)
      if (f.value < 0)
        violations.push_back(where(i) + std::string(f.name) + " is negative");

    if (!inst.dense_embedding.empty() &&
        static_cast<int>(inst.dense_embedding.size()) != c.embedding_dim)
      violations.push_back(where(i) + "dense_embedding length does not match corpus dimension");

    auto [it, inserted] = first_seen.emplace(a.account_id, std::make_pair(i, &a));
    if (!inserted && !(*it->second.second == a))
      violations.push_back(where(i) + "account '" + a.account_id +
                           "' differs from the snapshot at instance " +
                           std::to_string(it->second.first));
  }
  return violations;
}

}  // namespace ctxabuse
