#pragma once

#include "ctxabuse/models/model.hpp"

namespace ctxabuse {

// Bagged CART forest: Gini impurity, ceil(sqrt(d)) candidate features per
// split, bootstrap sample per tree, grown to purity subject to
// min-leaf/min-split/max-depth. Tree t draws its own rng stream from
// mix(seed, t), so serial and parallel builds are bit-identical.
Forest train_random_forest(const DataSet& ds, const Hyperparams& hp, std::uint64_t seed,
                           int n_threads = 1);

}  // namespace ctxabuse
