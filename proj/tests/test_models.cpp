#include <doctest.h>

#include <cmath>

#include "ctxabuse/models/forest.hpp"
#include "ctxabuse/models/linear.hpp"
#include "ctxabuse/models/model.hpp"
#include "ctxabuse/models/scaler.hpp"
#include "ctxabuse/models/smote.hpp"
#include "ctxabuse/util.hpp"

using namespace ctxabuse;

namespace {

DataSet dense_ds(const Eigen::MatrixXd& X, const std::vector<std::uint8_t>& y) {
  DataSet ds;
  ds.sparse_dims = 0;
  ds.dense_dims = static_cast<int>(X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    FeatureVector fv;
    fv.dense = X.row(r).transpose();
    ds.rows.push_back(std::move(fv));
  }
  ds.y = y;
  return ds;
}

FeatureVector dense_row(std::initializer_list<double> values) {
  FeatureVector fv;
  fv.dense = Eigen::VectorXd(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) fv.dense[i++] = v;
  return fv;
}

DataSet random_mixed_ds(rng::Engine& eng, std::size_t n, std::int32_t sparse_dims,
                        int dense_dims) {
  DataSet ds;
  ds.sparse_dims = sparse_dims;
  ds.dense_dims = dense_dims;
  for (std::size_t r = 0; r < n; ++r) {
    FeatureVector fv;
    for (std::int32_t f = 0; f < sparse_dims; ++f)
      if (eng.real() < 0.3) fv.sparse.emplace_back(f, 1.0 + static_cast<double>(eng.index(3)));
    fv.dense = Eigen::VectorXd(dense_dims);
    for (int d = 0; d < dense_dims; ++d) fv.dense[d] = eng.real() * 4 - 2;
    ds.rows.push_back(std::move(fv));
    ds.y.push_back(static_cast<std::uint8_t>(eng.real() < 0.5));
  }
  bool has0 = false, has1 = false;
  for (auto v : ds.y) (v ? has1 : has0) = true;
  if (!has0) ds.y[0] = 0;
  if (!has1) ds.y[1] = 1;
  return ds;
}

}  // namespace

TEST_CASE("scaler examples") {
  SUBCASE("population convention on [1,3]") {
    Eigen::MatrixXd X(2, 1);
    X << 1, 3;
    ScalerParams p = fit_scaler(X);
    CHECK(p.mean[0] == 2.0);
    CHECK(p.stddev[0] == 1.0);
    Eigen::VectorXd a(1), b(1);
    a << 1;
    b << 3;
    CHECK(apply_scaler(a, p)[0] == -1.0);
    CHECK(apply_scaler(b, p)[0] == 1.0);
  }
  SUBCASE("constant column maps to zero") {
    Eigen::MatrixXd X(3, 1);
    X << 5, 5, 5;
    ScalerParams p = fit_scaler(X);
    CHECK(p.stddev[0] == 0.0);
    Eigen::VectorXd v(1);
    v << 5;
    CHECK(apply_scaler(v, p)[0] == 0.0);
  }
  SUBCASE("refit of standardized data is near identity") {
    rng::Engine eng(9);
    Eigen::MatrixXd X(50, 2);
    for (int r = 0; r < 50; ++r)
      for (int c = 0; c < 2; ++c) X(r, c) = eng.real() * 7 - 3;
    ScalerParams p = fit_scaler(X);
    Eigen::MatrixXd Z(50, 2);
    for (int r = 0; r < 50; ++r) Z.row(r) = apply_scaler(X.row(r).transpose(), p).transpose();
    ScalerParams q = fit_scaler(Z);
    CHECK(std::abs(q.mean[0]) < 1e-12);
    CHECK(std::abs(q.stddev[0] - 1.0) < 1e-12);
  }
  SUBCASE("round trip within 1e-9") {
    rng::Engine eng(13);
    Eigen::MatrixXd X(20, 3);
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 3; ++c) X(r, c) = eng.real() * 100 - 50;
    ScalerParams p = fit_scaler(X);
    for (int r = 0; r < 20; ++r) {
      Eigen::VectorXd back = unapply_scaler(apply_scaler(X.row(r).transpose(), p), p);
      CHECK((back - X.row(r).transpose()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(fit_scaler(Eigen::MatrixXd(0, 3)), DataError);
  }
}

TEST_CASE("smote basics") {
  std::vector<FeatureVector> minority = {dense_row({0, 0}), dense_row({1, 1})};

  SUBCASE("zero synthetic rows") {
    rng::Engine eng(1);
    CHECK(smote(minority, 1, 0, eng).empty());
  }
  SUBCASE("interpolation stays on the segment") {
    rng::Engine eng(2);
    auto synth = smote(minority, 1, 25, eng);
    REQUIRE(synth.size() == 25);
    for (const auto& s : synth) {
      CHECK(s.dense[0] == doctest::Approx(s.dense[1]));  // the (t, t) diagonal
      CHECK(s.dense[0] >= 0.0);
      CHECK(s.dense[0] <= 1.0);
    }
  }
  SUBCASE("exact synthetic count for parity") {
    rng::Engine eng(3);
    std::vector<FeatureVector> thirty;
    rng::Engine gen(4);
    for (int i = 0; i < 30; ++i) thirty.push_back(dense_row({gen.real(), gen.real()}));
    CHECK(smote(thirty, 5, 70, eng).size() == 70);
  }
  SUBCASE("fewer than two minority rows is an error") {
    rng::Engine eng(5);
    std::vector<FeatureVector> one = {dense_row({1, 2})};
    CHECK_THROWS_AS(smote(one, 1, 3, eng), DataError);
  }
  SUBCASE("deterministic under a fixed seed") {
    rng::Engine a(77), b(77);
    std::vector<FeatureVector> rows;
    rng::Engine gen(6);
    for (int i = 0; i < 10; ++i) rows.push_back(dense_row({gen.real(), gen.real() * 3}));
    auto s1 = smote(rows, 3, 40, a);
    auto s2 = smote(rows, 3, 40, b);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
      CHECK(s1[i].sparse == s2[i].sparse);
      CHECK(s1[i].dense == s2[i].dense);
    }
  }
}

TEST_CASE("smote geometry on mixed sparse+dense rows") {
  rng::Engine gen(21);
  std::vector<FeatureVector> minority;
  for (int i = 0; i < 40; ++i) {
    FeatureVector fv;
    for (std::int32_t f = 0; f < 6; ++f)
      if (gen.real() < 0.4) fv.sparse.emplace_back(f, 1.0 + static_cast<double>(gen.index(4)));
    fv.dense = Eigen::VectorXd(3);
    for (int d = 0; d < 3; ++d) fv.dense[d] = gen.real() * 10 - 5;
    minority.push_back(std::move(fv));
  }
  const int k = 3;
  rng::Engine eng(22);
  auto synth = smote(minority, k, 200, eng);

  const auto value = [](const FeatureVector& fv, std::int32_t f) {
    return feature_value(fv, f, 6);
  };
  // Bounding box of the minority class over the full (sparse+dense) space.
  double lo[9], hi[9];
  for (std::int32_t f = 0; f < 9; ++f) {
    lo[f] = 1e300;
    hi[f] = -1e300;
    for (const auto& m : minority) {
      lo[f] = std::min(lo[f], value(m, f));
      hi[f] = std::max(hi[f], value(m, f));
    }
  }
  for (const auto& s : synth) {
    for (std::int32_t f = 0; f < 9; ++f) {
      CHECK(value(s, f) >= lo[f] - 1e-12);
      CHECK(value(s, f) <= hi[f] + 1e-12);
    }
    // Collinearity: s sits on a segment between some minority row and one
    // of that row's k nearest neighbours.
    double best_residual = 1e300;
    for (std::size_t i = 0; i < minority.size(); ++i) {
      std::vector<std::pair<double, std::size_t>> dists;
      for (std::size_t j = 0; j < minority.size(); ++j)
        if (j != i) dists.emplace_back(squared_distance(minority[i], minority[j]), j);
      std::sort(dists.begin(), dists.end());
      for (int t = 0; t < k; ++t) {
        const FeatureVector& nn = minority[dists[static_cast<std::size_t>(t)].second];
        double dx = std::sqrt(squared_distance(minority[i], s));
        double dn = std::sqrt(squared_distance(s, nn));
        double dd = std::sqrt(squared_distance(minority[i], nn));
        if (dx <= dd + 1e-9)
          best_residual = std::min(best_residual, std::abs(dx + dn - dd));
      }
    }
    CHECK(best_residual < 1e-9);
  }
}

TEST_CASE("logistic regression") {
  SUBCASE("separable two-point set reaches training accuracy 1") {
    Eigen::MatrixXd X(2, 1);
    X << 0, 1;
    DataSet ds = dense_ds(X, {0, 1});
    ModelSpec spec;
    spec.kind = ModelKind::logistic_regression;
    TrainedModel m = train_model(ds, spec);
    Predictions p = predict(m, ds.rows);
    CHECK(p.labels == std::vector<std::uint8_t>{0, 1});
  }

  SUBCASE("analytic gradient matches central finite differences") {
    rng::Engine eng(31);
    DataSet ds = random_mixed_ds(eng, 20, 0, 5);
    const double lambda = 1e-2;
    for (int point = 0; point < 10; ++point) {
      LinearParams p;
      p.w_sparse = Eigen::VectorXd::Zero(0);
      p.w_dense = Eigen::VectorXd(5);
      for (int d = 0; d < 5; ++d) p.w_dense[d] = eng.real() * 2 - 1;
      p.bias = eng.real() - 0.5;
      LinearParams g = logistic_gradient(ds, p, lambda);
      const double h = 1e-6;
      for (int d = 0; d <= 5; ++d) {
        LinearParams lo = p, hi = p;
        double analytic;
        if (d < 5) {
          lo.w_dense[d] -= h;
          hi.w_dense[d] += h;
          analytic = g.w_dense[d];
        } else {
          lo.bias -= h;
          hi.bias += h;
          analytic = g.bias;
        }
        double fd = (logistic_loss(ds, hi, lambda) - logistic_loss(ds, lo, lambda)) / (2 * h);
        CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
      }
    }
  }

  SUBCASE("label/feature symmetries move the optimum as the algebra says") {
    rng::Engine eng(33);
    DataSet ds = random_mixed_ds(eng, 40, 0, 4);
    Hyperparams hp;
    hp.lr_lambda = 0.1;
    hp.lr_tol = 1e-10;
    hp.lr_max_iter = 5000;
    LinearParams w = train_logistic(ds, hp);

    // Flipping labels negates weights and bias.
    DataSet flipped = ds;
    for (auto& v : flipped.y) v = static_cast<std::uint8_t>(1 - v);
    LinearParams wf = train_logistic(flipped, hp);
    CHECK((w.w_dense + wf.w_dense).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(w.bias + wf.bias) < 1e-6);

    // Flipping labels and negating features leaves the weights and negates
    // only the bias (the two negations cancel on w).
    DataSet mirrored = flipped;
    for (auto& row : mirrored.rows) row.dense = -row.dense;
    LinearParams wm = train_logistic(mirrored, hp);
    CHECK((w.w_dense - wm.w_dense).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(w.bias + wm.bias) < 1e-6);
  }

  SUBCASE("non-finite features are rejected") {
    Eigen::MatrixXd X(2, 1);
    X << 0, std::numeric_limits<double>::quiet_NaN();
    DataSet ds = dense_ds(X, {0, 1});
    CHECK_THROWS_AS(train_logistic(ds, Hyperparams{}), DataError);
  }

  SUBCASE("single-class input is rejected") {
    Eigen::MatrixXd X(2, 1);
    X << 0, 1;
    DataSet ds = dense_ds(X, {1, 1});
    CHECK_THROWS_AS(train_logistic(ds, Hyperparams{}), DataError);
  }
}

TEST_CASE("linear svm") {
  SUBCASE("separable toy set drives hinge loss to zero") {
    Eigen::MatrixXd X(4, 2);
    X << 2, 0.5, 3, -1, -2, 0.5, -3, -1;
    DataSet ds = dense_ds(X, {1, 1, 0, 0});
    Hyperparams hp;
    hp.svm_lambda = 1e-6;
    hp.svm_epochs = 4000;
    hp.svm_eta0 = 2.0;
    LinearParams w = train_linear_svm(ds, hp);
    double hinge_only = hinge_objective(ds, w, 0.0);
    CHECK(hinge_only <= 1e-9);
  }

  SUBCASE("objective over averaged iterates is non-increasing within tolerance") {
    rng::Engine eng(35);
    DataSet ds = random_mixed_ds(eng, 60, 0, 4);
    for (std::size_t r = 0; r < ds.rows.size(); ++r)
      ds.y[r] = static_cast<std::uint8_t>(ds.rows[r].dense[0] + 0.2 * ds.rows[r].dense[1] > 0);
    bool has0 = false, has1 = false;
    for (auto v : ds.y) (v ? has1 : has0) = true;
    REQUIRE(has0);
    REQUIRE(has1);
    Hyperparams hp;
    hp.svm_epochs = 300;
    std::vector<double> trace;
    train_linear_svm(ds, hp, &trace);
    REQUIRE(trace.size() == 300);
    for (std::size_t t = 5; t + 1 < trace.size(); ++t)
      CHECK(trace[t + 1] <= trace[t] + 1e-4 * (1.0 + std::abs(trace[t])));
  }

  SUBCASE("duplicating every row leaves the decision function unchanged") {
    rng::Engine eng(37);
    DataSet ds = random_mixed_ds(eng, 12, 3, 3);
    DataSet doubled;
    doubled.sparse_dims = ds.sparse_dims;
    doubled.dense_dims = ds.dense_dims;
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
      doubled.rows.push_back(ds.rows[r]);
      doubled.rows.push_back(ds.rows[r]);
      doubled.y.push_back(ds.y[r]);
      doubled.y.push_back(ds.y[r]);
    }
    Hyperparams hp;
    LinearParams w1 = train_linear_svm(ds, hp);
    LinearParams w2 = train_linear_svm(doubled, hp);
    ModelSpec spec;
    spec.kind = ModelKind::linear_svm;
    TrainedModel m1 = train_model(ds, spec);
    TrainedModel m2 = train_model(doubled, spec);
    Predictions p1 = predict(m1, ds.rows);
    Predictions p2 = predict(m2, ds.rows);
    for (std::size_t i = 0; i < p1.scores.size(); ++i)
      CHECK(std::abs(p1.scores[i] - p2.scores[i]) < 1e-6);
    CHECK((w1.w_dense - w2.w_dense).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("random forest") {
  const auto decisive_fixture = [](std::uint64_t seed, std::size_t n) {
    rng::Engine eng(seed);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 5);
    std::vector<std::uint8_t> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = static_cast<std::uint8_t>(eng.real() < 0.4);
      X(static_cast<Eigen::Index>(r), 0) = y[r];
      for (int d = 1; d < 5; ++d) X(static_cast<Eigen::Index>(r), d) = eng.real() * 2 - 1;
    }
    return dense_ds(X, y);
  };

  SUBCASE("a perfectly separating feature dominates") {
    DataSet ds = decisive_fixture(51, 200);
    Hyperparams hp;
    Forest f = train_random_forest(ds, hp, 99);
    CHECK(f.oob_accuracy == 1.0);
    CHECK(f.importance[0] >= 0.9);
    CHECK(std::abs(f.importance.sum() - 1.0) <= 1e-9);
  }

  SUBCASE("single-class input yields a flagged constant classifier") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 2, 3, 4, 5, 6, 7, 8;
    DataSet ds = dense_ds(X, {1, 1, 1, 1});
    ModelSpec spec;
    spec.kind = ModelKind::random_forest;
    TrainedModel m = train_model(ds, spec);
    CHECK(m.forest.single_class);
    Predictions p = predict(m, ds.rows);
    for (double s : p.scores) CHECK(s == 1.0);
  }

  SUBCASE("fixed seed gives structurally identical forests, serial or parallel") {
    DataSet ds = decisive_fixture(52, 120);
    Hyperparams hp;
    hp.rf_trees = 24;
    Forest a = train_random_forest(ds, hp, 1234, 1);
    Forest b = train_random_forest(ds, hp, 1234, 1);
    Forest c = train_random_forest(ds, hp, 1234, 4);
    REQUIRE(a.trees.size() == b.trees.size());
    REQUIRE(a.trees.size() == c.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
      CHECK(a.trees[t] == b.trees[t]);
      CHECK(a.trees[t] == c.trees[t]);
    }
    CHECK(a.importance == c.importance);
    CHECK(a.oob_accuracy == c.oob_accuracy);
    Forest d = train_random_forest(ds, hp, 1235, 1);
    CHECK(a.trees != d.trees);
  }

  SUBCASE("pure-noise labels produce no dominant importance") {
    rng::Engine eng(53);
    Eigen::MatrixXd X(300, 10);
    std::vector<std::uint8_t> y(300);
    for (int r = 0; r < 300; ++r) {
      y[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(eng.real() < 0.5);
      for (int d = 0; d < 10; ++d) X(r, d) = eng.real();
    }
    DataSet ds = dense_ds(X, y);
    Hyperparams hp;
    hp.rf_trees = 200;
    Forest f = train_random_forest(ds, hp, 7, 4);
    double mean = f.importance.mean();
    CHECK(f.importance.maxCoeff() < 3.0 * mean);
  }

  SUBCASE("forest training accuracy is at least a single bootstrapped tree's") {
    for (std::uint64_t seed = 60; seed < 65; ++seed) {
      rng::Engine eng(seed);
      Eigen::MatrixXd X(150, 6);
      std::vector<std::uint8_t> y(150);
      for (int r = 0; r < 150; ++r) {
        for (int d = 0; d < 6; ++d) X(r, d) = eng.real();
        bool signal = X(r, 0) + 0.5 * X(r, 1) > 0.75;
        y[static_cast<std::size_t>(r)] =
            static_cast<std::uint8_t>(eng.real() < 0.15 ? !signal : signal);
      }
      DataSet ds = dense_ds(X, y);
      const auto train_accuracy = [&](int trees) {
        Hyperparams hp;
        hp.rf_trees = trees;
        ModelSpec spec;
        spec.kind = ModelKind::random_forest;
        spec.hp = hp;
        spec.rng_seed = seed;
        TrainedModel m = train_model(ds, spec);
        Predictions p = predict(m, ds.rows);
        int correct = 0;
        for (std::size_t i = 0; i < p.labels.size(); ++i) correct += p.labels[i] == ds.y[i];
        return static_cast<double>(correct) / static_cast<double>(p.labels.size());
      };
      CHECK(train_accuracy(100) >= train_accuracy(1));
    }
  }
}

TEST_CASE("predict semantics") {
  SUBCASE("zero-weight logistic model scores one half everywhere") {
    TrainedModel m;
    m.kind = ModelKind::logistic_regression;
    m.sparse_dims = 0;
    m.dense_dims = 2;
    m.linear.w_sparse = Eigen::VectorXd::Zero(0);
    m.linear.w_dense = Eigen::VectorXd::Zero(2);
    Predictions p = predict(m, {dense_row({5, -3}), dense_row({0, 0})});
    CHECK(p.scores[0] == 0.5);
    CHECK(p.scores[1] == 0.5);
    CHECK(p.labels[0] == 1);  // 0.5 >= threshold 0.5
  }

  SUBCASE("threshold moves the label on a fixed score") {
    TrainedModel m;
    m.kind = ModelKind::logistic_regression;
    m.sparse_dims = 0;
    m.dense_dims = 1;
    m.linear.w_sparse = Eigen::VectorXd::Zero(0);
    m.linear.w_dense = Eigen::VectorXd::Ones(1);
    m.linear.bias = 0.0;
    FeatureVector x = dense_row({0.2006706954621511});  // sigmoid ~ 0.55
    m.threshold = 0.5;
    CHECK(predict(m, {x}).labels[0] == 1);
    m.threshold = 0.6;
    CHECK(predict(m, {x}).labels[0] == 0);
  }

  SUBCASE("label equals score >= threshold for every kind") {
    rng::Engine eng(71);
    DataSet ds = random_mixed_ds(eng, 50, 4, 3);
    for (auto kind :
         {ModelKind::logistic_regression, ModelKind::linear_svm, ModelKind::random_forest}) {
      ModelSpec spec;
      spec.kind = kind;
      spec.hp.rf_trees = 20;
      spec.hp.threshold = 0.45;
      TrainedModel m = train_model(ds, spec);
      Predictions p = predict(m, ds.rows);
      for (std::size_t i = 0; i < p.scores.size(); ++i) {
        CHECK(p.scores[i] >= 0.0);
        CHECK(p.scores[i] <= 1.0);
        CHECK(p.labels[i] == (p.scores[i] >= 0.45 ? 1 : 0));
      }
    }
  }

  SUBCASE("layout mismatches are rejected") {
    TrainedModel m;
    m.kind = ModelKind::logistic_regression;
    m.sparse_dims = 2;
    m.dense_dims = 1;
    m.linear.w_sparse = Eigen::VectorXd::Zero(2);
    m.linear.w_dense = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(predict(m, {dense_row({1, 2})}), DataError);
    FeatureVector bad;
    bad.sparse = {{5, 1.0}};
    bad.dense = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(predict(m, {bad}), DataError);
  }
}

TEST_CASE("model artifacts round-trip through JSON") {
  rng::Engine eng(81);
  DataSet ds = random_mixed_ds(eng, 40, 5, 3);
  for (auto kind :
       {ModelKind::logistic_regression, ModelKind::linear_svm, ModelKind::random_forest}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.hp.rf_trees = 12;
    spec.rng_seed = 2024;
    TrainedModel m = train_model(ds, spec);
    m.space = make_feature_space(parse_mask("mt"), nullptr, 0);
    std::string path = std::string("/tmp/ctxabuse_model_") + model_kind_name(kind) + ".json";
    save_model(m, path);
    TrainedModel loaded = load_model(path);
    CHECK(loaded.kind == m.kind);
    CHECK(loaded.seed == m.seed);
    CHECK(loaded.hp == m.hp);
    Predictions a = predict(m, ds.rows);
    Predictions b = predict(loaded, ds.rows);
    CHECK(a.scores == b.scores);
    CHECK(a.labels == b.labels);
  }
}
