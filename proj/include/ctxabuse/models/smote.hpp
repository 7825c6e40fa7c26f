#pragma once

#include <cstdint>
#include <vector>

#include "ctxabuse/features.hpp"
#include "ctxabuse/util.hpp"

namespace ctxabuse {

// Synthetic minority oversampling: each synthetic row is x + u * (nn - x)
// for a sampled minority row x, one of its k Euclidean nearest minority
// neighbours nn, and u uniform on [0, 1]. Sparse and dense blocks are
// interpolated coordinate-wise, so synthetic sparse counts are
// real-valued. k is clamped to |minority| - 1. Deterministic given the
// engine state. Throws DataError when fewer than 2 minority rows exist.
std::vector<FeatureVector> smote(const std::vector<FeatureVector>& minority_rows, int k,
                                 std::int64_t n_synthetic, rng::Engine& rng);

// Squared Euclidean distance over the combined sparse + dense space.
double squared_distance(const FeatureVector& a, const FeatureVector& b);

}  // namespace ctxabuse
