#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctxabuse/assets.hpp"
#include "ctxabuse/corpus.hpp"
#include "ctxabuse/features.hpp"
#include "ctxabuse/models/model.hpp"

namespace ctxabuse {

struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;  // instance index -> fold id
  std::uint64_t seed = 0;
};

// Shuffles within each class with the seeded rng and deals round-robin
// (continuing the fold cursor across classes, so overall fold sizes also
// differ by at most one). Throws ConfigError when k < 2 or a class has
// fewer than k members.
FoldPlan stratified_folds(const std::vector<Label>& labels, int k, std::uint64_t seed);

// Group-level dealing (whole conversations or accounts stay together).
// Per-fold class balance is best effort in this mode.
FoldPlan grouped_folds(const std::vector<std::string>& group_keys, int k, std::uint64_t seed);

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Positive class = abusive. Throws DataError on length mismatch.
ConfusionMatrix confusion(const std::vector<std::uint8_t>& y_true,
                          const std::vector<std::uint8_t>& y_pred);

// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R); zero denominators give 0.
Metrics prf(const ConfusionMatrix& cm);

enum class GroupBy { none, conversation, account };

// Per-instance inputs that do not depend on fold or mask: stems for the
// text families and the full static dense block (mt | tw | ac | emb | te
// sentiment scalars), from which any mask selects its ranges.
struct PreparedInstance {
  std::vector<std::string> reply_stems;
  std::vector<std::string> parent_stems;
  Eigen::VectorXd dense_base;
};

struct PreparedCorpus {
  Corpus corpus;  // owned; instances parallel `items`
  std::vector<PreparedInstance> items;
  DenseLayout base_layout;  // layout of dense_base (all families active)
  int embedding_dim = 0;

  std::vector<Label> labels() const;
};

PreparedCorpus prepare_corpus(Corpus corpus, const AssetBundle& assets,
                              const PreprocessConfig& cfg);

struct ExperimentOptions {
  int k = 5;
  std::uint64_t seed = 42;
  GroupBy group_by = GroupBy::none;
  std::int32_t vocab_max_dims = 5000;
  int workers = 1;          // RF tree-building threads
  bool keep_models = false; // retain per-fold models in the result
};

struct PooledPrediction {
  std::uint8_t label = 0;
  double score = 0.0;
  int fold = -1;
};

struct ExperimentResult {
  std::vector<Metrics> fold_metrics;
  Metrics mean_metrics;    // arithmetic mean over folds (headline)
  Metrics pooled_metrics;  // from pooled out-of-fold predictions
  std::vector<PooledPrediction> pooled;  // one entry per instance
  std::vector<TrainedModel> models;      // per fold, when keep_models
};

// One experiment cell: per fold, fit vectorizer and scaler on the
// training fold only, oversample the training fold with SMOTE, train,
// and predict the held-out fold. Every instance is predicted exactly once.
ExperimentResult run_experiment(const PreparedCorpus& prepared, const FamilyMask& mask,
                                const ModelSpec& spec, const ExperimentOptions& opts);

struct GridRow {
  FamilyMask mask;
  ModelKind kind = ModelKind::logistic_regression;
  Hyperparams hp;
  std::uint64_t cell_seed = 0;
  ExperimentResult result;
};

struct GridReport {
  std::vector<GridRow> rows;
  int k = 0;
  std::uint64_t seed = 0;
};

// masks x kinds cells, each with an rng stream derived from
// (seed, mask, model); cells may run in parallel without changing output.
GridReport run_grid(const PreparedCorpus& prepared, const std::vector<FamilyMask>& masks,
                    const std::vector<ModelKind>& kinds, const ModelSpec& base_spec,
                    const ExperimentOptions& opts);

struct AccountSplitRow {
  std::string account_id;
  double f1 = 0.0;
  std::int64_t n_instances = 0;
  bool degenerate = false;  // no abusive ground truth for this account
  bool above = false;
};

struct UserSplitReport {
  std::vector<AccountSplitRow> accounts;  // sorted by ascending f1
  double median_f1 = 0.0;
  bool all_tied = false;
  std::vector<std::string> feature_names;  // mt | tw | ac (| emb) dense features
  std::vector<double> above_mean_raw, below_mean_raw;
  std::vector<double> above_mean_norm, below_mean_norm;  // min-max over the two means
};

// Splits target accounts at the median per-account F1 of the pooled
// out-of-fold predictions and contrasts group feature averages.
UserSplitReport user_median_split(const PreparedCorpus& prepared,
                                  const std::vector<PooledPrediction>& pooled);

struct ImportanceEntry {
  std::string name;
  double importance = 0.0;
};

// Trains an RF on a single dense family over the full corpus
// (after SMOTE) and returns the normalized importances, descending.
std::vector<ImportanceEntry> importance_report(const PreparedCorpus& prepared,
                                               const std::string& family,
                                               const ModelSpec& spec,
                                               const ExperimentOptions& opts);

// Seeded stratified subsample preserving the positive rate; returns
// selected instance indices in corpus order.
std::vector<std::size_t> stratified_sample(const std::vector<Label>& labels,
                                           std::size_t sample_size, std::uint64_t seed);

}  // namespace ctxabuse
