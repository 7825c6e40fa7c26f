#include "ctxabuse/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ctxabuse/util.hpp"

namespace ctxabuse {

using ordered_json = nlohmann::ordered_json;

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
  if (!j.is_object()) throw ConfigError("config file must hold a single JSON object");

  RunConfig cfg;
  std::set<std::string> seen;
  const auto take = [&](const char* key) -> const ordered_json* {
    auto it = j.find(key);
    if (it == j.end()) return nullptr;
    seen.insert(key);
    return &*it;
  };
  const auto get_string = [&](const char* key, std::string& out) {
    if (const auto* v = take(key)) {
      if (!v->is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
      out = v->get<std::string>();
    }
  };
  const auto get_bool = [&](const char* key, bool& out) {
    if (const auto* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(std::string("config key '") + key + "' must be a boolean");
      out = v->get<bool>();
    }
  };
  const auto get_double = [&](const char* key, double& out) {
    if (const auto* v = take(key)) {
      if (!v->is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
      out = v->get<double>();
    }
  };
  const auto get_int = [&](const char* key, auto& out) {
    if (const auto* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
      out = v->get<std::decay_t<decltype(out)>>();
    }
  };
  const auto get_string_list = [&](const char* key, std::vector<std::string>& out) {
    if (const auto* v = take(key)) {
      if (v->is_string()) {
        out = {v->get<std::string>()};
      } else if (v->is_array()) {
        out.clear();
        for (const auto& e : *v) {
          if (!e.is_string()) throw ConfigError(std::string("config key '") + key + "' must hold strings");
          out.push_back(e.get<std::string>());
        }
      } else {
        throw ConfigError(std::string("config key '") + key + "' must be a string or string array");
      }
    }
  };

  get_string("input", cfg.input);
  get_string("out", cfg.out);
  get_int("seed", cfg.seed);
  get_int("k", cfg.k);
  get_string_list("masks", cfg.masks);
  get_string_list("models", cfg.models);
  get_string("mask", cfg.mask);
  get_string("model", cfg.model);
  get_string("family", cfg.family);
  get_int("workers", cfg.workers);
  get_int("sample_size", cfg.sample_size);
  get_string("group_by", cfg.group_by);
  get_int("vocab_max_dims", cfg.vocab_max_dims);
  get_bool("keep_hashtag_body", cfg.keep_hashtag_body);
  get_string("stopword_path", cfg.stopword_path);
  get_string("sentiment_lexicon_path", cfg.sentiment_lexicon_path);
  get_string("hate_words_path", cfg.hate_words_path);
  get_string("abusive_words_path", cfg.abusive_words_path);
  get_double("lr_lambda", cfg.hp.lr_lambda);
  get_int("lr_max_iter", cfg.hp.lr_max_iter);
  get_double("lr_tol", cfg.hp.lr_tol);
  get_double("svm_lambda", cfg.hp.svm_lambda);
  get_int("svm_epochs", cfg.hp.svm_epochs);
  get_double("svm_eta0", cfg.hp.svm_eta0);
  get_int("rf_trees", cfg.hp.rf_trees);
  get_int("rf_max_depth", cfg.hp.rf_max_depth);
  get_int("rf_min_leaf", cfg.hp.rf_min_leaf);
  get_int("rf_min_split", cfg.hp.rf_min_split);
  get_int("smote_k", cfg.hp.smote_k);
  get_string("smote_strategy", cfg.hp.smote_strategy);
  get_double("threshold", cfg.hp.threshold);
  get_bool("save_models", cfg.save_models);
  get_bool("emit_vocab", cfg.emit_vocab);

  for (const auto& [key, value] : j.items())
    if (!seen.count(key)) throw ConfigError("unknown config key '" + key + "'");

  if (cfg.k < 2) throw ConfigError("config: k must be at least 2");
  if (cfg.workers < 1) throw ConfigError("config: workers must be positive");
  if (cfg.vocab_max_dims < 1) throw ConfigError("config: vocab_max_dims must be positive");
  if (cfg.sample_size < 0) throw ConfigError("config: sample_size must be non-negative");
  if (cfg.group_by != "none" && cfg.group_by != "conversation" && cfg.group_by != "account")
    throw ConfigError("config: group_by must be none, conversation or account");
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["input"] = cfg.input;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  j["k"] = cfg.k;
  j["masks"] = cfg.masks;
  j["models"] = cfg.models;
  j["mask"] = cfg.mask;
  j["model"] = cfg.model;
  j["family"] = cfg.family;
  j["workers"] = cfg.workers;
  j["sample_size"] = cfg.sample_size;
  j["group_by"] = cfg.group_by;
  j["vocab_max_dims"] = cfg.vocab_max_dims;
  j["keep_hashtag_body"] = cfg.keep_hashtag_body;
  j["stopword_path"] = cfg.stopword_path;
  j["sentiment_lexicon_path"] = cfg.sentiment_lexicon_path;
  j["hate_words_path"] = cfg.hate_words_path;
  j["abusive_words_path"] = cfg.abusive_words_path;
  j["lr_lambda"] = cfg.hp.lr_lambda;
  j["lr_max_iter"] = cfg.hp.lr_max_iter;
  j["lr_tol"] = cfg.hp.lr_tol;
  j["svm_lambda"] = cfg.hp.svm_lambda;
  j["svm_epochs"] = cfg.hp.svm_epochs;
  j["svm_eta0"] = cfg.hp.svm_eta0;
  j["rf_trees"] = cfg.hp.rf_trees;
  j["rf_max_depth"] = cfg.hp.rf_max_depth;
  j["rf_min_leaf"] = cfg.hp.rf_min_leaf;
  j["rf_min_split"] = cfg.hp.rf_min_split;
  j["smote_k"] = cfg.hp.smote_k;
  j["smote_strategy"] = cfg.hp.smote_strategy;
  j["threshold"] = cfg.hp.threshold;
  j["save_models"] = cfg.save_models;
  j["emit_vocab"] = cfg.emit_vocab;
  return j.dump(1);
}

}  // namespace ctxabuse
