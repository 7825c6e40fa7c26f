#include "ctxabuse/models/scaler.hpp"

#include "ctxabuse/util.hpp"

namespace ctxabuse {

ScalerParams fit_scaler(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw DataError("fit_scaler: no rows");
  ScalerParams p;
  p.mean = rows.colwise().mean();
  Eigen::VectorXd var =
      (rows.rowwise() - p.mean.transpose()).array().square().colwise().mean();
  p.stddev = var.array().sqrt();
  // A column whose values are all identical is constant by definition;
  // zero its stddev even when the mean subtraction left rounding dust.
  for (Eigen::Index c = 0; c < rows.cols(); ++c)
    if (rows.col(c).minCoeff() == rows.col(c).maxCoeff()) p.stddev[c] = 0.0;
  return p;
}

void apply_scaler_in_place(Eigen::VectorXd& row, const ScalerParams& p) {
  if (row.size() != p.mean.size())
    throw DataError("apply_scaler: row has " + std::to_string(row.size()) +
                    " dims, scaler has " + std::to_string(p.mean.size()));
  for (int i = 0; i < row.size(); ++i)
    row[i] = p.stddev[i] > 0.0 ? (row[i] - p.mean[i]) / p.stddev[i] : 0.0;
}

Eigen::VectorXd apply_scaler(const Eigen::VectorXd& row, const ScalerParams& p) {
  Eigen::VectorXd out = row;
  apply_scaler_in_place(out, p);
  return out;
}

Eigen::VectorXd unapply_scaler(const Eigen::VectorXd& row, const ScalerParams& p) {
  if (row.size() != p.mean.size()) throw DataError("unapply_scaler: dimension mismatch");
  Eigen::VectorXd out(row.size());
  for (int i = 0; i < row.size(); ++i)
    out[i] = p.stddev[i] > 0.0 ? row[i] * p.stddev[i] + p.mean[i] : p.mean[i];
  return out;
}

}  // namespace ctxabuse
