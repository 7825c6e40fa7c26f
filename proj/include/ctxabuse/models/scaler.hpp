#pragma once

#include <Eigen/Core>

namespace ctxabuse {

// Per-column standardization parameters fitted on training-fold rows.
// Population (divide-by-n) convention; constant columns keep stddev 0 and
// standardize to 0.
struct ScalerParams {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  int dims() const { return static_cast<int>(mean.size()); }
};

// `rows` is instances x dims. Throws DataError on an empty matrix.
ScalerParams fit_scaler(const Eigen::MatrixXd& rows);

void apply_scaler_in_place(Eigen::VectorXd& row, const ScalerParams& p);
Eigen::VectorXd apply_scaler(const Eigen::VectorXd& row, const ScalerParams& p);

// Inverse transform; constant columns map back to their mean.
Eigen::VectorXd unapply_scaler(const Eigen::VectorXd& row, const ScalerParams& p);

}  // namespace ctxabuse
