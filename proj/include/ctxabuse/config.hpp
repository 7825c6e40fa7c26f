#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctxabuse/assets.hpp"
#include "ctxabuse/models/model.hpp"

namespace ctxabuse {

// One flat, declarative description of a run. Every key can live in the
// JSON config file; CLI flags override keys one-for-one. Unknown keys in
// the file are rejected.
struct RunConfig {
  std::string input;
  std::string out = "out";
  std::uint64_t seed = 42;
  int k = 5;
  std::vector<std::string> masks = {"paper16"};
  std::vector<std::string> models = {"lr", "svm", "rf"};
  std::string mask;    // single-cell commands (run, usersplit)
  std::string model = "rf";
  std::string family;  // importance
  int workers = 1;
  std::int64_t sample_size = 0;  // 0 = whole corpus
  std::string group_by = "none";
  std::int32_t vocab_max_dims = 5000;
  bool keep_hashtag_body = true;
  std::string stopword_path;
  std::string sentiment_lexicon_path;
  std::string hate_words_path;
  std::string abusive_words_path;
  Hyperparams hp;
  bool save_models = false;
  bool emit_vocab = false;

  AssetPaths asset_paths() const {
    return {stopword_path, sentiment_lexicon_path, hate_words_path, abusive_words_path};
  }
};

// Throws ConfigError on unreadable files, bad values or unknown keys.
RunConfig load_config(const std::string& path);

// Canonical JSON of the resolved configuration (used for manifests and
// reproducibility checks).
std::string config_to_json(const RunConfig& cfg);

}  // namespace ctxabuse
