#include "ctxabuse/models/smote.hpp"

#include <algorithm>
#include <cmath>

namespace ctxabuse {

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double d2 = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.sparse.size() || j < b.sparse.size()) {
    if (j >= b.sparse.size() || (i < a.sparse.size() && a.sparse[i].first < b.sparse[j].first)) {
      d2 += a.sparse[i].second * a.sparse[i].second;
      ++i;
    } else if (i >= a.sparse.size() || b.sparse[j].first < a.sparse[i].first) {
      d2 += b.sparse[j].second * b.sparse[j].second;
      ++j;
    } else {
      double diff = a.sparse[i].second - b.sparse[j].second;
      d2 += diff * diff;
      ++i;
      ++j;
    }
  }
  d2 += (a.dense - b.dense).squaredNorm();
  return d2;
}

namespace {

FeatureVector interpolate(const FeatureVector& a, const FeatureVector& b, double u) {
  FeatureVector out;
  out.sparse.reserve(a.sparse.size() + b.sparse.size());
  std::size_t i = 0, j = 0;
  const auto push = [&](std::int32_t idx, double va, double vb) {
    double v = va + u * (vb - va);
    if (v != 0.0) out.sparse.emplace_back(idx, v);
  };
  while (i < a.sparse.size() || j < b.sparse.size()) {
    if (j >= b.sparse.size() || (i < a.sparse.size() && a.sparse[i].first < b.sparse[j].first)) {
      push(a.sparse[i].first, a.sparse[i].second, 0.0);
      ++i;
    } else if (i >= a.sparse.size() || b.sparse[j].first < a.sparse[i].first) {
      push(b.sparse[j].first, 0.0, b.sparse[j].second);
      ++j;
    } else {
      push(a.sparse[i].first, a.sparse[i].second, b.sparse[j].second);
      ++i;
      ++j;
    }
  }
  out.dense = a.dense + u * (b.dense - a.dense);
  return out;
}

}  // namespace

std::vector<FeatureVector> smote(const std::vector<FeatureVector>& minority_rows, int k,
                                 std::int64_t n_synthetic, rng::Engine& rng) {
  const std::size_t n = minority_rows.size();
  if (n < 2) throw DataError("smote: need at least 2 minority rows");
  if (k < 1) throw ConfigError("smote: k must be positive");
  k = std::min<int>(k, static_cast<int>(n) - 1);

  // k nearest neighbours per row; ties broken by row index.
  std::vector<std::vector<std::int32_t>> knn(n);
  std::vector<std::pair<double, std::int32_t>> dists;
  for (std::size_t i = 0; i < n; ++i) {
    dists.clear();
    dists.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dists.emplace_back(squared_distance(minority_rows[i], minority_rows[j]),
                         static_cast<std::int32_t>(j));
    }
    std::partial_sort(dists.begin(), dists.begin() + k, dists.end());
    knn[i].reserve(k);
    for (int t = 0; t < k; ++t) knn[i].push_back(dists[t].second);
  }

  std::vector<FeatureVector> synthetic;
  synthetic.reserve(static_cast<std::size_t>(n_synthetic));
  for (std::int64_t s = 0; s < n_synthetic; ++s) {
    std::size_t i = rng.index(n);
    std::int32_t nn = knn[i][rng.index(knn[i].size())];
    double u = rng.real();
    synthetic.push_back(interpolate(minority_rows[i], minority_rows[nn], u));
  }
  return synthetic;
}

}  // namespace ctxabuse
