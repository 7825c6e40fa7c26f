#include "ctxabuse/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ctxabuse/models/forest.hpp"
#include "ctxabuse/models/linear.hpp"
#include "ctxabuse/util.hpp"

namespace ctxabuse {

using ordered_json = nlohmann::ordered_json;

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::linear_svm: return "linear_svm";
    case ModelKind::random_forest: return "random_forest";
  }
  return "?";
}

std::optional<ModelKind> model_kind_from_name(const std::string& s) {
  if (s == "logistic_regression" || s == "lr") return ModelKind::logistic_regression;
  if (s == "linear_svm" || s == "svm") return ModelKind::linear_svm;
  if (s == "random_forest" || s == "rf") return ModelKind::random_forest;
  return std::nullopt;
}

double feature_value(const FeatureVector& row, std::int32_t f, std::int32_t sparse_dims) {
  if (f < sparse_dims) {
    auto it = std::lower_bound(
        row.sparse.begin(), row.sparse.end(), f,
        [](const SparseEntry& e, std::int32_t key) { return e.first < key; });
    return it != row.sparse.end() && it->first == f ? it->second : 0.0;
  }
  return row.dense[f - sparse_dims];
}

namespace {

double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

TrainedModel train_model(const DataSet& ds, const ModelSpec& spec, int n_threads) {
  TrainedModel m;
  m.kind = spec.kind;
  m.hp = spec.hp;
  m.seed = spec.rng_seed;
  m.sparse_dims = ds.sparse_dims;
  m.dense_dims = ds.dense_dims;
  m.threshold = spec.hp.threshold;
  switch (spec.kind) {
    case ModelKind::logistic_regression:
      m.linear = train_logistic(ds, spec.hp);
      break;
    case ModelKind::linear_svm:
      m.linear = train_linear_svm(ds, spec.hp);
      break;
    case ModelKind::random_forest:
      m.forest = train_random_forest(ds, spec.hp, spec.rng_seed, n_threads);
      break;
  }
  return m;
}

Predictions predict(const TrainedModel& m, const std::vector<FeatureVector>& rows) {
  const std::int32_t sparse_dims = m.sparse_dims;
  const int dense_dims = m.dense_dims;
  Predictions out;
  out.labels.reserve(rows.size());
  out.scores.reserve(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.dense.size()) != dense_dims)
      throw DataError("predict: dense block has " + std::to_string(row.dense.size()) +
                      " dims, model expects " + std::to_string(dense_dims));
    if (!row.sparse.empty() && row.sparse.back().first >= sparse_dims)
      throw DataError("predict: sparse index " + std::to_string(row.sparse.back().first) +
                      " out of range for model space " + std::to_string(sparse_dims));
    double score = 0.0;
    if (m.kind == ModelKind::random_forest) {
      int votes = 0;
      for (const auto& tree : m.forest.trees)
        votes += tree.predict_p(row, sparse_dims) >= 0.5 ? 1 : 0;
      score = m.forest.trees.empty()
                  ? 0.0
                  : static_cast<double>(votes) / static_cast<double>(m.forest.trees.size());
    } else {
      double z = m.linear.bias;
      for (const auto& [idx, v] : row.sparse) z += m.linear.w_sparse[idx] * v;
      if (row.dense.size() > 0) z += m.linear.w_dense.dot(row.dense);
      score = sigmoid(z);
    }
    out.scores.push_back(score);
    out.labels.push_back(score >= m.threshold ? 1 : 0);
  }
  return out;
}

Eigen::VectorXd rf_importance(const TrainedModel& m) {
  if (m.kind != ModelKind::random_forest)
    throw ConfigError("rf_importance: model is not a random forest");
  return m.forest.importance;
}

namespace {

ordered_json hyperparams_to_json(const Hyperparams& hp) {
  ordered_json j;
  j["lr_lambda"] = hp.lr_lambda;
  j["lr_max_iter"] = hp.lr_max_iter;
  j["lr_tol"] = hp.lr_tol;
  j["svm_lambda"] = hp.svm_lambda;
  j["svm_epochs"] = hp.svm_epochs;
  j["svm_eta0"] = hp.svm_eta0;
  j["rf_trees"] = hp.rf_trees;
  j["rf_max_depth"] = hp.rf_max_depth;
  j["rf_min_leaf"] = hp.rf_min_leaf;
  j["rf_min_split"] = hp.rf_min_split;
  j["smote_k"] = hp.smote_k;
  j["smote_strategy"] = hp.smote_strategy;
  j["threshold"] = hp.threshold;
  return j;
}

Hyperparams hyperparams_from_json(const ordered_json& j) {
  Hyperparams hp;
  hp.lr_lambda = j.at("lr_lambda").get<double>();
  hp.lr_max_iter = j.at("lr_max_iter").get<int>();
  hp.lr_tol = j.at("lr_tol").get<double>();
  hp.svm_lambda = j.at("svm_lambda").get<double>();
  hp.svm_epochs = j.at("svm_epochs").get<int>();
  hp.svm_eta0 = j.at("svm_eta0").get<double>();
  hp.rf_trees = j.at("rf_trees").get<int>();
  hp.rf_max_depth = j.at("rf_max_depth").get<int>();
  hp.rf_min_leaf = j.at("rf_min_leaf").get<int>();
  hp.rf_min_split = j.at("rf_min_split").get<int>();
  hp.smote_k = j.at("smote_k").get<int>();
  hp.smote_strategy = j.at("smote_strategy").get<std::string>();
  hp.threshold = j.at("threshold").get<double>();
  return hp;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const ordered_json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

constexpr int kFormatVersion = 1;

}  // namespace

void save_model(const TrainedModel& m, const std::string& path) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = model_kind_name(m.kind);
  j["seed"] = m.seed;
  j["threshold"] = m.threshold;
  j["sparse_dims"] = m.sparse_dims;
  j["dense_dims"] = m.dense_dims;
  j["hyperparameters"] = hyperparams_to_json(m.hp);

  j["mask"] = mask_to_string(m.space.mask);
  j["embedding_dim"] = m.space.embedding_dim;
  j["dense_feature_names"] = m.space.dense.names;

  if (m.vocab) {
    j["vocabulary"] = {{"max_dims", m.vocab->max_dims}, {"grams", m.vocab->grams}};
  }
  if (m.scaler) {
    j["scaler"] = {{"mean", vector_to_json(m.scaler->mean)},
                   {"stddev", vector_to_json(m.scaler->stddev)}};
  }

  if (m.kind == ModelKind::random_forest) {
    ordered_json trees = ordered_json::array();
    for (const auto& tree : m.forest.trees) {
      ordered_json nodes = ordered_json::array();
      for (const auto& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p_abusive, n.n_samples});
      trees.push_back(std::move(nodes));
    }
    j["forest"] = {{"trees", std::move(trees)},
                   {"importance", vector_to_json(m.forest.importance)},
                   {"oob_accuracy", m.forest.oob_accuracy},
                   {"single_class", m.forest.single_class}};
  } else {
    j["linear"] = {{"w_sparse", vector_to_json(m.linear.w_sparse)},
                   {"w_dense", vector_to_json(m.linear.w_dense)},
                   {"bias", m.linear.bias}};
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << j.dump(1) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("model file is not valid JSON: " + path);
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw DataError("unsupported model format version in " + path);

  TrainedModel m;
  auto kind = model_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw DataError("unknown model kind in " + path);
  m.kind = *kind;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.threshold = j.at("threshold").get<double>();
  m.sparse_dims = j.at("sparse_dims").get<std::int32_t>();
  m.dense_dims = j.at("dense_dims").get<int>();
  m.hp = hyperparams_from_json(j.at("hyperparameters"));

  FamilyMask mask = parse_mask(j.at("mask").get<std::string>());
  int embedding_dim = j.at("embedding_dim").get<int>();

  if (j.contains("vocabulary")) {
    Vocabulary v;
    v.max_dims = j["vocabulary"].at("max_dims").get<std::int32_t>();
    v.grams = j["vocabulary"].at("grams").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < v.grams.size(); ++i)
      v.index.emplace(v.grams[i], static_cast<std::int32_t>(i));
    m.vocab = std::move(v);
  }
  m.space = make_feature_space(mask, m.vocab ? &*m.vocab : nullptr, embedding_dim);

  if (j.contains("scaler")) {
    ScalerParams s;
    s.mean = vector_from_json(j["scaler"].at("mean"));
    s.stddev = vector_from_json(j["scaler"].at("stddev"));
    m.scaler = std::move(s);
  }

  if (m.kind == ModelKind::random_forest) {
    const auto& f = j.at("forest");
    for (const auto& tnodes : f.at("trees")) {
      Tree tree;
      for (const auto& n : tnodes) {
        TreeNode node;
        node.feature = n.at(0).get<std::int32_t>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<std::int32_t>();
        node.right = n.at(3).get<std::int32_t>();
        node.p_abusive = n.at(4).get<double>();
        node.n_samples = n.at(5).get<std::int32_t>();
        tree.nodes.push_back(node);
      }
      m.forest.trees.push_back(std::move(tree));
    }
    m.forest.importance = vector_from_json(f.at("importance"));
    m.forest.oob_accuracy = f.at("oob_accuracy").get<double>();
    m.forest.single_class = f.at("single_class").get<bool>();
  } else {
    const auto& l = j.at("linear");
    m.linear.w_sparse = vector_from_json(l.at("w_sparse"));
    m.linear.w_dense = vector_from_json(l.at("w_dense"));
    m.linear.bias = l.at("bias").get<double>();
  }
  return m;
}

}  // namespace ctxabuse
