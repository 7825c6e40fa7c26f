#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ctxabuse/features.hpp"
#include "ctxabuse/models/scaler.hpp"

namespace ctxabuse {

enum class ModelKind { logistic_regression, linear_svm, random_forest };

const char* model_kind_name(ModelKind k);
std::optional<ModelKind> model_kind_from_name(const std::string& s);

struct Hyperparams {
  double lr_lambda = 1e-4;
  int lr_max_iter = 2000;
  double lr_tol = 1e-6;         // gradient infinity-norm stop
  double svm_lambda = 1e-4;
  int svm_epochs = 50;          // full-batch subgradient steps
  double svm_eta0 = 1.0;
  int rf_trees = 100;
  int rf_max_depth = 0;         // 0 = unlimited
  int rf_min_leaf = 1;
  int rf_min_split = 2;
  int smote_k = 5;
  std::string smote_strategy = "parity";  // "parity" | "none"
  double threshold = 0.5;

  bool operator==(const Hyperparams&) const = default;
};

struct ModelSpec {
  ModelKind kind = ModelKind::logistic_regression;
  Hyperparams hp;
  std::uint64_t rng_seed = 42;
};

// Training/prediction rows plus the space geometry they live in.
struct DataSet {
  std::vector<FeatureVector> rows;
  std::vector<std::uint8_t> y;  // 1 = abusive
  std::int32_t sparse_dims = 0;
  int dense_dims = 0;

  std::size_t size() const { return rows.size(); }
};

// Value of feature `f` in the combined space: sparse columns first,
// then dense columns.
double feature_value(const FeatureVector& row, std::int32_t f, std::int32_t sparse_dims);

struct LinearParams {
  Eigen::VectorXd w_sparse;
  Eigen::VectorXd w_dense;
  double bias = 0.0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left when value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double p_abusive = 0.0;
  std::int32_t n_samples = 0;

  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  bool operator==(const Tree&) const = default;
  double predict_p(const FeatureVector& row, std::int32_t sparse_dims) const;
};

struct Forest {
  std::vector<Tree> trees;
  Eigen::VectorXd importance;  // normalized mean decrease in Gini
  double oob_accuracy = 0.0;
  bool single_class = false;   // degenerate training set flag
};

struct TrainedModel {
  ModelKind kind = ModelKind::logistic_regression;
  Hyperparams hp;
  std::uint64_t seed = 0;
  std::int32_t sparse_dims = 0;  // feature geometry seen at training time
  int dense_dims = 0;
  FeatureSpace space;
  std::optional<Vocabulary> vocab;      // fold-local, when a text family is active
  std::optional<ScalerParams> scaler;   // fold-local dense standardization
  LinearParams linear;                  // lr / svm
  Forest forest;                        // rf
  double threshold = 0.5;
};

struct Predictions {
  std::vector<std::uint8_t> labels;
  std::vector<double> scores;  // in [0, 1]
};

// Scores are sigmoid(z) for LR, sigmoid(margin) for SVM (calibration-free
// squashing; labels at the default threshold match the margin sign) and
// the abusive vote fraction for RF. label = score >= threshold.
Predictions predict(const TrainedModel& m, const std::vector<FeatureVector>& rows);

// Normalized per-feature Gini importance; throws ConfigError for
// non-forest models.
Eigen::VectorXd rf_importance(const TrainedModel& m);

// Trains one model on the prepared dataset. For RF, `n_threads` trees may
// build in parallel; results are bit-identical at any thread count.
TrainedModel train_model(const DataSet& ds, const ModelSpec& spec, int n_threads = 1);

void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace ctxabuse
