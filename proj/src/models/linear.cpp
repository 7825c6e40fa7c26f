#include "ctxabuse/models/linear.hpp"

#include <cmath>

#include "ctxabuse/util.hpp"

namespace ctxabuse {

namespace {

void check_trainable(const DataSet& ds) {
  if (ds.rows.empty()) throw DataError("linear trainer: empty training set");
  bool has_pos = false, has_neg = false;
  for (auto y : ds.y) (y ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw DataError("linear trainer: need at least one example of each class");
  for (const auto& row : ds.rows) {
    if (!row.dense.allFinite()) throw DataError("linear trainer: non-finite dense feature");
    for (const auto& [idx, v] : row.sparse)
      if (!std::isfinite(v)) throw DataError("linear trainer: non-finite sparse feature");
  }
}

double margin(const FeatureVector& row, const LinearParams& p) {
  double z = p.bias;
  for (const auto& [idx, v] : row.sparse) z += p.w_sparse[idx] * v;
  if (row.dense.size() > 0) z += p.w_dense.dot(row.dense);
  return z;
}

// log(1 + e^t) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

LinearParams zeros_like(const DataSet& ds) {
  LinearParams p;
  p.w_sparse = Eigen::VectorXd::Zero(ds.sparse_dims);
  p.w_dense = Eigen::VectorXd::Zero(ds.dense_dims);
  p.bias = 0.0;
  return p;
}

double grad_inf_norm(const LinearParams& g) {
  double m = std::abs(g.bias);
  if (g.w_sparse.size() > 0) m = std::max(m, g.w_sparse.cwiseAbs().maxCoeff());
  if (g.w_dense.size() > 0) m = std::max(m, g.w_dense.cwiseAbs().maxCoeff());
  return m;
}

double grad_sq_norm(const LinearParams& g) {
  return g.bias * g.bias + g.w_sparse.squaredNorm() + g.w_dense.squaredNorm();
}

void axpy(LinearParams& p, double a, const LinearParams& d) {
  p.w_sparse += a * d.w_sparse;
  p.w_dense += a * d.w_dense;
  p.bias += a * d.bias;
}

}  // namespace

double logistic_loss(const DataSet& ds, const LinearParams& p, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double s = ds.y[i] ? 1.0 : -1.0;
    loss += softplus(-s * margin(ds.rows[i], p));
  }
  loss /= static_cast<double>(ds.size());
  loss += 0.5 * lambda * (p.w_sparse.squaredNorm() + p.w_dense.squaredNorm());
  return loss;
}

LinearParams logistic_gradient(const DataSet& ds, const LinearParams& p, double lambda) {
  LinearParams g = zeros_like(ds);
  const double inv_n = 1.0 / static_cast<double>(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const FeatureVector& row = ds.rows[i];
    double s = ds.y[i] ? 1.0 : -1.0;
    double coeff = -s * sigmoid(-s * margin(row, p)) * inv_n;
    for (const auto& [idx, v] : row.sparse) g.w_sparse[idx] += coeff * v;
    if (row.dense.size() > 0) g.w_dense += coeff * row.dense;
    g.bias += coeff;
  }
  g.w_sparse += lambda * p.w_sparse;
  g.w_dense += lambda * p.w_dense;
  return g;
}

LinearParams train_logistic(const DataSet& ds, const Hyperparams& hp) {
  check_trainable(ds);
  LinearParams p = zeros_like(ds);
  double step = 1.0;
  double loss = logistic_loss(ds, p, hp.lr_lambda);
  for (int iter = 0; iter < hp.lr_max_iter; ++iter) {
    LinearParams g = logistic_gradient(ds, p, hp.lr_lambda);
    if (grad_inf_norm(g) < hp.lr_tol) break;
    double g2 = grad_sq_norm(g);
    step = std::min(step * 2.0, 1e10);
    LinearParams candidate = p;
    axpy(candidate, -step, g);
    double cand_loss = logistic_loss(ds, candidate, hp.lr_lambda);
    while (cand_loss > loss - 1e-4 * step * g2 && step > 1e-18) {
      step *= 0.5;
      candidate = p;
      axpy(candidate, -step, g);
      cand_loss = logistic_loss(ds, candidate, hp.lr_lambda);
    }
    if (cand_loss >= loss && step <= 1e-18) break;
    p = std::move(candidate);
    loss = cand_loss;
  }
  return p;
}

double hinge_objective(const DataSet& ds, const LinearParams& p, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double s = ds.y[i] ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - s * margin(ds.rows[i], p));
  }
  loss /= static_cast<double>(ds.size());
  loss += 0.5 * lambda * (p.w_sparse.squaredNorm() + p.w_dense.squaredNorm());
  return loss;
}

LinearParams train_linear_svm(const DataSet& ds, const Hyperparams& hp,
                              std::vector<double>* objective_trace) {
  check_trainable(ds);
  LinearParams p = zeros_like(ds);
  LinearParams avg = zeros_like(ds);
  const double inv_n = 1.0 / static_cast<double>(ds.size());

  for (int t = 0; t < hp.svm_epochs; ++t) {
    LinearParams g = zeros_like(ds);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const FeatureVector& row = ds.rows[i];
      double s = ds.y[i] ? 1.0 : -1.0;
      if (s * margin(row, p) < 1.0) {
        double coeff = -s * inv_n;
        for (const auto& [idx, v] : row.sparse) g.w_sparse[idx] += coeff * v;
        if (row.dense.size() > 0) g.w_dense += coeff * row.dense;
        g.bias += coeff;
      }
    }
    g.w_sparse += hp.svm_lambda * p.w_sparse;
    g.w_dense += hp.svm_lambda * p.w_dense;

    double eta = hp.svm_eta0 / (1.0 + hp.svm_eta0 * hp.svm_lambda * static_cast<double>(t));
    axpy(p, -eta, g);

    // Running uniform average of iterates w_1..w_{t+1}.
    double w_new = 1.0 / static_cast<double>(t + 1);
    avg.w_sparse += w_new * (p.w_sparse - avg.w_sparse);
    avg.w_dense += w_new * (p.w_dense - avg.w_dense);
    avg.bias += w_new * (p.bias - avg.bias);
    if (objective_trace != nullptr)
      objective_trace->push_back(hinge_objective(ds, avg, hp.svm_lambda));
  }
  return avg;
}

}  // namespace ctxabuse
