#include "ctxabuse/models/forest.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ctxabuse/util.hpp"

namespace ctxabuse {

namespace {

double gini(std::int64_t pos, std::int64_t n) {
  if (n == 0) return 0.0;
  double p = static_cast<double>(pos) / static_cast<double>(n);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct NodeTask {
  std::int32_t node;
  std::int32_t begin;
  std::int32_t end;    // rows[begin, end) belong to this node
  int depth;
};

struct TreeBuilder {
  const DataSet& ds;
  const Hyperparams& hp;
  rng::Engine rng;
  std::int64_t total_dims;
  int n_candidates;

  std::vector<std::int32_t> rows;          // bootstrap indices, partitioned in place
  std::vector<std::int32_t> feature_perm;  // for candidate sampling with undo
  std::vector<std::pair<double, std::uint8_t>> scratch;
  Tree tree;
  Eigen::VectorXd importance;

  TreeBuilder(const DataSet& d, const Hyperparams& h, std::uint64_t seed)
      : ds(d), hp(h), rng(seed), total_dims(d.sparse_dims + d.dense_dims) {
    n_candidates = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total_dims))));
    n_candidates = std::max(1, std::min<int>(n_candidates, static_cast<int>(total_dims)));
    feature_perm.resize(total_dims);
    for (std::int64_t f = 0; f < total_dims; ++f) feature_perm[f] = static_cast<std::int32_t>(f);
    importance = Eigen::VectorXd::Zero(total_dims);
  }

  std::int64_t count_pos(std::int32_t begin, std::int32_t end) const {
    std::int64_t pos = 0;
    for (std::int32_t i = begin; i < end; ++i) pos += ds.y[rows[i]];
    return pos;
  }

  struct Split {
    double gain = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
    double child_weighted_gini = 0.0;
  };

  // Best split on one candidate feature; gain must beat `best` strictly.
  void consider_feature(std::int32_t f, std::int32_t begin, std::int32_t end,
                        double parent_gini, Split& best) {
    const std::int32_t n = end - begin;
    scratch.clear();
    scratch.reserve(n);
    for (std::int32_t i = begin; i < end; ++i)
      scratch.emplace_back(feature_value(ds.rows[rows[i]], f, ds.sparse_dims), ds.y[rows[i]]);
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (scratch.front().first == scratch.back().first) return;

    std::int64_t pos_left = 0, pos_total = 0;
    for (const auto& [v, y] : scratch) pos_total += y;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::int32_t i = 0; i < n - 1; ++i) {
      pos_left += scratch[i].second;
      if (scratch[i].first == scratch[i + 1].first) continue;
      std::int32_t nl = i + 1, nr = n - nl;
      if (nl < hp.rf_min_leaf || nr < hp.rf_min_leaf) continue;
      double child =
          (static_cast<double>(nl) * gini(pos_left, nl) +
           static_cast<double>(nr) * gini(pos_total - pos_left, nr)) *
          inv_n;
      double gain = parent_gini - child;
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = f;
        best.threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
        best.child_weighted_gini = child;
      }
    }
  }

  void build(std::int32_t n_root) {
    std::vector<NodeTask> stack;
    tree.nodes.push_back({});
    stack.push_back({0, 0, static_cast<std::int32_t>(rows.size()), 0});

    while (!stack.empty()) {
      NodeTask task = stack.back();
      stack.pop_back();
      const std::int32_t n = task.end - task.begin;
      std::int64_t pos = count_pos(task.begin, task.end);
      TreeNode& node = tree.nodes[task.node];
      node.n_samples = n;
      node.p_abusive = n > 0 ? static_cast<double>(pos) / static_cast<double>(n) : 0.0;

      double parent_gini = gini(pos, n);
      bool splittable = n >= hp.rf_min_split && pos != 0 && pos != n &&
                        (hp.rf_max_depth == 0 || task.depth < hp.rf_max_depth);
      if (!splittable) continue;

      // Sample distinct candidate features via partial Fisher-Yates,
      // undone afterwards so the permutation array is reusable.
      Split best;
      best.gain = 1e-12;  // require strictly positive gain
      best.feature = -1;
      std::vector<std::pair<std::int32_t, std::int32_t>> swaps;
      swaps.reserve(n_candidates);
      for (int t = 0; t < n_candidates; ++t) {
        std::int32_t j =
            t + static_cast<std::int32_t>(rng.index(static_cast<std::size_t>(total_dims - t)));
        std::swap(feature_perm[t], feature_perm[j]);
        swaps.emplace_back(t, j);
      }
      for (int t = 0; t < n_candidates; ++t)
        consider_feature(feature_perm[t], task.begin, task.end, parent_gini, best);
      for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
        std::swap(feature_perm[it->first], feature_perm[it->second]);

      if (best.feature < 0) continue;

      auto mid_it = std::partition(rows.begin() + task.begin, rows.begin() + task.end,
                                   [&](std::int32_t r) {
                                     return feature_value(ds.rows[r], best.feature,
                                                          ds.sparse_dims) <= best.threshold;
                                   });
      std::int32_t mid = static_cast<std::int32_t>(mid_it - rows.begin());
      if (mid == task.begin || mid == task.end) continue;  // numeric guard

      importance[best.feature] +=
          static_cast<double>(n) / static_cast<double>(n_root) * (parent_gini - best.child_weighted_gini);

      std::int32_t left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      TreeNode& parent = tree.nodes[task.node];
      parent.feature = best.feature;
      parent.threshold = best.threshold;
      parent.left = left;
      parent.right = left + 1;
      // Left child is popped (and consumes rng) first.
      stack.push_back({left + 1, mid, task.end, task.depth + 1});
      stack.push_back({left, task.begin, mid, task.depth + 1});
    }
  }
};

}  // namespace

double Tree::predict_p(const FeatureVector& row, std::int32_t sparse_dims) const {
  const TreeNode* node = &nodes[0];
  while (node->feature >= 0) {
    double v = feature_value(row, node->feature, sparse_dims);
    node = &nodes[v <= node->threshold ? node->left : node->right];
  }
  return node->p_abusive;
}

Forest train_random_forest(const DataSet& ds, const Hyperparams& hp, std::uint64_t seed,
                           int n_threads) {
  const std::size_t n = ds.size();
  if (n == 0) throw DataError("random forest: empty training set");
  if (ds.sparse_dims + ds.dense_dims == 0)
    throw DataError("random forest: dataset has no features");
  if (hp.rf_trees <= 0) throw ConfigError("random forest: rf_trees must be positive");
  bool has_pos = false, has_neg = false;
  for (auto y : ds.y) (y ? has_pos : has_neg) = true;

  Forest forest;
  forest.single_class = !(has_pos && has_neg);
  forest.trees.resize(hp.rf_trees);

  std::vector<Eigen::VectorXd> tree_importance(hp.rf_trees);
  std::vector<std::vector<std::int32_t>> oob_rows(hp.rf_trees);
  std::vector<std::vector<std::uint8_t>> oob_votes(hp.rf_trees);

  const auto build_tree = [&](int t) {
    TreeBuilder builder(ds, hp, rng::mix(seed, static_cast<std::uint64_t>(t)));
    builder.rows.resize(n);
    std::vector<std::uint8_t> in_bag(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = builder.rng.index(n);
      builder.rows[i] = static_cast<std::int32_t>(r);
      in_bag[r] = 1;
    }
    builder.build(static_cast<std::int32_t>(n));
    forest.trees[t] = std::move(builder.tree);
    tree_importance[t] = std::move(builder.importance);
    for (std::size_t r = 0; r < n; ++r) {
      if (in_bag[r]) continue;
      oob_rows[t].push_back(static_cast<std::int32_t>(r));
      oob_votes[t].push_back(forest.trees[t].predict_p(ds.rows[r], ds.sparse_dims) >= 0.5 ? 1
                                                                                          : 0);
    }
  };

  n_threads = std::max(1, n_threads);
  if (n_threads == 1 || hp.rf_trees == 1) {
    for (int t = 0; t < hp.rf_trees; ++t) build_tree(t);
  } else {
    std::vector<std::thread> threads;
    int n_workers = std::min(n_threads, hp.rf_trees);
    threads.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
      threads.emplace_back([&, w] {
        for (int t = w; t < hp.rf_trees; t += n_workers) build_tree(t);
      });
    for (auto& th : threads) th.join();
  }

  // Merge in tree order so sums do not depend on scheduling.
  std::int64_t total_dims = ds.sparse_dims + ds.dense_dims;
  Eigen::VectorXd importance = Eigen::VectorXd::Zero(total_dims);
  for (const auto& imp : tree_importance) importance += imp;
  double total = importance.sum();
  forest.importance = total > 0 ? Eigen::VectorXd(importance / total)
                                : Eigen::VectorXd::Zero(total_dims);

  std::vector<std::int32_t> votes(n, 0), counts(n, 0);
  for (int t = 0; t < hp.rf_trees; ++t)
    for (std::size_t i = 0; i < oob_rows[t].size(); ++i) {
      votes[oob_rows[t][i]] += oob_votes[t][i];
      counts[oob_rows[t][i]] += 1;
    }
  std::int64_t correct = 0, evaluated = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (counts[r] == 0) continue;
    ++evaluated;
    std::uint8_t pred =
        2 * votes[r] >= counts[r] ? 1 : 0;  // vote fraction >= 0.5 -> abusive
    if (pred == ds.y[r]) ++correct;
  }
  forest.oob_accuracy =
      evaluated > 0 ? static_cast<double>(correct) / static_cast<double>(evaluated) : 0.0;
  return forest;
}

}  // namespace ctxabuse
