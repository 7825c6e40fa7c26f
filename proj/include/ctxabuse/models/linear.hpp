#pragma once

#include "ctxabuse/models/model.hpp"

namespace ctxabuse {

// L2-regularized logistic loss (mean over rows; bias unregularized).
double logistic_loss(const DataSet& ds, const LinearParams& p, double lambda);

// Analytic gradient of logistic_loss; exposed for finite-difference checks.
LinearParams logistic_gradient(const DataSet& ds, const LinearParams& p, double lambda);

// Full-batch gradient descent with backtracking line search, run until the
// gradient infinity-norm drops below hp.lr_tol or hp.lr_max_iter steps.
LinearParams train_logistic(const DataSet& ds, const Hyperparams& hp);

// L2-regularized mean hinge loss.
double hinge_objective(const DataSet& ds, const LinearParams& p, double lambda);

// Full-batch subgradient descent with decaying steps; returns the uniform
// average of the iterates. One "epoch" is one full-batch step. When
// `objective_trace` is given it records hinge_objective of the running
// average after every epoch.
LinearParams train_linear_svm(const DataSet& ds, const Hyperparams& hp,
                              std::vector<double>* objective_trace = nullptr);

}  // namespace ctxabuse
