#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "ctxabuse/eval.hpp"
#include "ctxabuse/util.hpp"
#include "testutil.hpp"

using namespace ctxabuse;

namespace {

PreprocessConfig pp() { return {&testutil::assets().stopwords, true}; }

PreparedCorpus prepare(const Corpus& c) { return prepare_corpus(c, testutil::assets(), pp()); }

std::vector<Label> labels_of(const Corpus& c) {
  std::vector<Label> out;
  for (const auto& i : c.instances) out.push_back(i.label);
  return out;
}

}  // namespace

TEST_CASE("stratified folds") {
  SUBCASE("balanced ten instances deal one of each class per fold") {
    std::vector<Label> labels;
    for (int i = 0; i < 5; ++i) labels.push_back(Label::abusive);
    for (int i = 0; i < 5; ++i) labels.push_back(Label::non_abusive);
    FoldPlan plan = stratified_folds(labels, 5, 3);
    std::vector<int> pos_per_fold(5, 0), neg_per_fold(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
      (labels[i] == Label::abusive ? pos_per_fold : neg_per_fold)[plan.assignment[i]] += 1;
    for (int f = 0; f < 5; ++f) {
      CHECK(pos_per_fold[f] == 1);
      CHECK(neg_per_fold[f] == 1);
    }
  }
  SUBCASE("k below 2 and small classes are rejected") {
    std::vector<Label> labels = {Label::abusive, Label::non_abusive, Label::non_abusive};
    CHECK_THROWS_AS(stratified_folds(labels, 1, 0), ConfigError);
    CHECK_THROWS_AS(stratified_folds(labels, 2, 0), ConfigError);  // one abusive only
  }
  SUBCASE("same seed reproduces the plan, different seed moves it") {
    testutil::SyntheticOptions opt;
    opt.n = 120;
    std::vector<Label> labels = labels_of(testutil::synthetic_corpus(opt));
    FoldPlan a = stratified_folds(labels, 5, 11);
    FoldPlan b = stratified_folds(labels, 5, 11);
    FoldPlan c = stratified_folds(labels, 5, 12);
    CHECK(a.assignment == b.assignment);
    CHECK(a.assignment != c.assignment);
  }
  SUBCASE("partition and balance invariants on random corpora") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      testutil::SyntheticOptions opt;
      opt.n = 60 + 7 * seed;
      opt.seed = seed;
      std::vector<Label> labels = labels_of(testutil::synthetic_corpus(opt));
      int k = 3 + static_cast<int>(seed % 4);
      FoldPlan plan = stratified_folds(labels, k, seed);
      std::vector<int> size(k, 0), pos(k, 0);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        REQUIRE(plan.assignment[i] >= 0);
        REQUIRE(plan.assignment[i] < k);
        size[plan.assignment[i]] += 1;
        pos[plan.assignment[i]] += labels[i] == Label::abusive;
      }
      int total = 0;
      for (int f = 0; f < k; ++f) total += size[f];
      CHECK(total == static_cast<int>(labels.size()));
      CHECK(*std::max_element(size.begin(), size.end()) -
                *std::min_element(size.begin(), size.end()) <=
            1);
      CHECK(*std::max_element(pos.begin(), pos.end()) -
                *std::min_element(pos.begin(), pos.end()) <=
            1);
    }
  }
  SUBCASE("grouped folds keep a group in one fold") {
    std::vector<std::string> groups = {"a", "a", "b", "b", "c", "d", "e", "e", "f", "g"};
    FoldPlan plan = grouped_folds(groups, 3, 5);
    std::map<std::string, std::set<int>> folds_of;
    for (std::size_t i = 0; i < groups.size(); ++i)
      folds_of[groups[i]].insert(plan.assignment[i]);
    for (const auto& [g, folds] : folds_of) CHECK(folds.size() == 1);
  }
}

TEST_CASE("confusion and prf") {
  SUBCASE("perfect predictions") {
    Metrics m = prf(confusion({1, 0, 1}, {1, 0, 1}));
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  SUBCASE("hand-computed 2/3 case") {
    // tp=2, fp=1, fn=1.
    Metrics m = prf(ConfusionMatrix{2, 1, 1, 0});
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("zero denominators give zero") {
    Metrics m = prf(ConfusionMatrix{0, 2, 3, 1});
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(prf(ConfusionMatrix{0, 0, 0, 5}).f1 == 0.0);
  }
  SUBCASE("length mismatch is an error") {
    CHECK_THROWS_AS(confusion({1, 0}, {1}), DataError);
  }
  SUBCASE("matches brute-force recomputation on 1000 random configurations") {
    rng::Engine eng(19);
    for (int round = 0; round < 1000; ++round) {
      std::size_t n = 1 + eng.index(40);
      std::vector<std::uint8_t> t(n), p(n);
      for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<std::uint8_t>(eng.index(2));
        p[i] = static_cast<std::uint8_t>(eng.index(2));
      }
      ConfusionMatrix cm = confusion(t, p);
      // Independent recount and direct metric formulas.
      std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += t[i] == 1 && p[i] == 1;
        fp += t[i] == 0 && p[i] == 1;
        fn += t[i] == 1 && p[i] == 0;
        tn += t[i] == 0 && p[i] == 0;
      }
      REQUIRE(cm.tp == tp);
      REQUIRE(cm.fp == fp);
      REQUIRE(cm.fn == fn);
      REQUIRE(cm.tn == tn);
      CHECK(cm.tp + cm.fp + cm.fn + cm.tn == static_cast<std::int64_t>(n));
      Metrics m = prf(cm);
      double precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
      double recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
      double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
      CHECK(m.precision == precision);
      CHECK(m.recall == recall);
      CHECK(m.f1 == f1);
    }
  }
}

TEST_CASE("prepared dense base equals assemble over all families") {
  testutil::SyntheticOptions opt;
  opt.n = 25;
  Corpus corpus = testutil::synthetic_corpus(opt);
  PreparedCorpus prepared = prepare(corpus);
  PreprocessConfig cfg = pp();
  FamilyMask all = parse_mask("te+mt+tw+ac");
  for (std::size_t i = 0; i < corpus.instances.size(); i += 7) {
    const Instance& inst = corpus.instances[i];
    ProcessedText parent = preprocess_text(inst.parent_text, cfg);
    ProcessedText reply = preprocess_text(inst.reply_text, cfg);
    Vocabulary vocab = fit_vectorizer(
        std::vector<std::vector<std::string>>{reply.stems, parent.stems}, 50);
    FeatureVector fv = assemble(inst, parent, reply, all, &vocab, testutil::assets(), nullptr);
    REQUIRE(fv.dense.size() == prepared.items[i].dense_base.size());
    CHECK(fv.dense == prepared.items[i].dense_base);
    CHECK(prepared.items[i].reply_stems == reply.stems);
  }
}

TEST_CASE("run_experiment bookkeeping and learning") {
  testutil::SyntheticOptions opt;
  opt.n = 900;
  opt.seed = 5;
  Corpus corpus = testutil::synthetic_corpus(opt);
  PreparedCorpus prepared = prepare(corpus);
  ExperimentOptions opts;
  opts.k = 5;
  opts.seed = 17;
  opts.workers = 4;
  ModelSpec rf;
  rf.kind = ModelKind::random_forest;
  rf.hp.rf_trees = 60;
  rf.rng_seed = 99;

  ExperimentResult te = run_experiment(prepared, parse_mask("te"), rf, opts);
  REQUIRE(te.fold_metrics.size() == 5);
  REQUIRE(te.pooled.size() == corpus.instances.size());
  std::vector<int> fold_seen(5, 0);
  for (const auto& p : te.pooled) {
    REQUIRE(p.fold >= 0);
    REQUIRE(p.fold < 5);
    fold_seen[p.fold] += 1;
  }
  for (int f = 0; f < 5; ++f) CHECK(fold_seen[f] > 0);

  // Mean metrics are the arithmetic mean of the fold metrics, exactly.
  double mean_f1 = 0;
  for (const auto& m : te.fold_metrics) mean_f1 += m.f1;
  mean_f1 /= 5;
  CHECK(std::abs(te.mean_metrics.f1 - mean_f1) <= 1e-12);

  // The parent carries the signal: te sees it, rt cannot.
  ExperimentResult rt = run_experiment(prepared, parse_mask("rt"), rf, opts);
  CHECK(te.mean_metrics.f1 >= 0.9);
  CHECK(rt.mean_metrics.f1 <= 0.65);
  CHECK(te.mean_metrics.f1 > rt.mean_metrics.f1 + 0.2);

  SUBCASE("deterministic across repeated runs and worker counts") {
    ExperimentOptions serial = opts;
    serial.workers = 1;
    ExperimentResult again = run_experiment(prepared, parse_mask("te"), rf, serial);
    REQUIRE(again.pooled.size() == te.pooled.size());
    for (std::size_t i = 0; i < te.pooled.size(); ++i) {
      CHECK(again.pooled[i].score == te.pooled[i].score);
      CHECK(again.pooled[i].label == te.pooled[i].label);
    }
  }
  SUBCASE("emb mask without embeddings is rejected") {
    CHECK_THROWS_AS(run_experiment(prepared, parse_mask("emb"), rf, opts), ConfigError);
  }
}

TEST_CASE("shuffled labels score near the class-prior baseline") {
  testutil::SyntheticOptions opt;
  opt.n = 400;
  opt.positive_rate = 0.5;
  opt.seed = 23;
  Corpus corpus = testutil::synthetic_corpus(opt);
  // Shuffle the labels to sever any text-label association.
  std::vector<Label> labels = labels_of(corpus);
  rng::Engine eng(31);
  eng.shuffle(labels);
  for (std::size_t i = 0; i < labels.size(); ++i) corpus.instances[i].label = labels[i];
  PreparedCorpus prepared = prepare(corpus);

  std::int64_t n_pos = 0;
  for (const auto& inst : corpus.instances) n_pos += inst.label == Label::abusive;
  double prior = static_cast<double>(n_pos) / static_cast<double>(corpus.instances.size());
  double baseline_f1 = prior;  // random classifier matching the prior

  ExperimentOptions opts;
  opts.k = 5;
  opts.seed = 41;
  opts.workers = 4;
  for (auto kind :
       {ModelKind::logistic_regression, ModelKind::linear_svm, ModelKind::random_forest}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.hp.rf_trees = 40;
    spec.rng_seed = 7;
    ExperimentResult r = run_experiment(prepared, parse_mask("rt"), spec, opts);
    CHECK(std::abs(r.mean_metrics.f1 - baseline_f1) <= 0.08);
  }
}

TEST_CASE("no leakage: perturbing held-out instances leaves fitted state identical") {
  testutil::SyntheticOptions opt;
  opt.n = 200;
  opt.seed = 9;
  Corpus corpus = testutil::synthetic_corpus(opt);
  ExperimentOptions opts;
  opts.k = 4;
  opts.seed = 77;
  opts.keep_models = true;
  ModelSpec spec;
  spec.kind = ModelKind::logistic_regression;
  spec.rng_seed = 3;

  FoldPlan plan = stratified_folds(labels_of(corpus), opts.k, opts.seed);
  for (int fold : {0, 2}) {
    Corpus perturbed = corpus;
    for (std::size_t i = 0; i < perturbed.instances.size(); ++i) {
      if (plan.assignment[i] != fold) continue;
      perturbed.instances[i].reply_text = "entirely different words here";
      perturbed.instances[i].parent_meta.retweet_count += 100;
    }
    ExperimentResult base = run_experiment(prepare(corpus), parse_mask("te+mt+tw+ac"),
                                           spec, opts);
    ExperimentResult other = run_experiment(prepare(perturbed), parse_mask("te+mt+tw+ac"),
                                            spec, opts);
    const TrainedModel& a = base.models[static_cast<std::size_t>(fold)];
    const TrainedModel& b = other.models[static_cast<std::size_t>(fold)];
    REQUIRE(a.vocab.has_value());
    REQUIRE(b.vocab.has_value());
    CHECK(*a.vocab == *b.vocab);
    REQUIRE(a.scaler.has_value());
    CHECK(a.scaler->mean == b.scaler->mean);
    CHECK(a.scaler->stddev == b.scaler->stddev);
  }
}

TEST_CASE("run_grid produces one row per cell, deterministically") {
  testutil::SyntheticOptions opt;
  opt.n = 150;
  opt.seed = 13;
  PreparedCorpus prepared = prepare(testutil::synthetic_corpus(opt));
  std::vector<FamilyMask> masks = {parse_mask("rt"), parse_mask("mt+tw")};
  std::vector<ModelKind> kinds = {ModelKind::logistic_regression, ModelKind::linear_svm};
  ModelSpec base;
  base.hp.lr_max_iter = 200;
  ExperimentOptions opts;
  opts.k = 3;
  opts.seed = 5;
  opts.workers = 1;
  GridReport a = run_grid(prepared, masks, kinds, base, opts);
  REQUIRE(a.rows.size() == 4);
  for (const auto& row : a.rows) {
    REQUIRE(row.result.fold_metrics.size() == 3);
    double mean = 0;
    for (const auto& m : row.result.fold_metrics) mean += m.f1;
    CHECK(std::abs(row.result.mean_metrics.f1 - mean / 3.0) <= 1e-12);
  }
  ExperimentOptions parallel = opts;
  parallel.workers = 4;
  GridReport b = run_grid(prepared, masks, kinds, base, parallel);
  REQUIRE(b.rows.size() == a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].cell_seed == b.rows[i].cell_seed);
    CHECK(a.rows[i].result.mean_metrics.f1 == b.rows[i].result.mean_metrics.f1);
    for (std::size_t j = 0; j < a.rows[i].result.pooled.size(); ++j)
      CHECK(a.rows[i].result.pooled[j].score == b.rows[i].result.pooled[j].score);
  }
}

TEST_CASE("user median split") {
  SUBCASE("two accounts straddle the median") {
    Corpus corpus;
    corpus.instances.push_back(
        testutil::make_instance("c1", "p", "bad reply", Label::abusive, "alice"));
    corpus.instances.push_back(
        testutil::make_instance("c1", "p", "fine reply", Label::non_abusive, "alice"));
    corpus.instances.push_back(
        testutil::make_instance("c2", "p", "mean reply", Label::abusive, "bob"));
    PreparedCorpus prepared = prepare(corpus);
    // alice: perfect; bob: missed abusive reply.
    std::vector<PooledPrediction> pooled = {{1, 0.9, 0}, {0, 0.1, 0}, {0, 0.2, 1}};
    UserSplitReport report = user_median_split(prepared, pooled);
    REQUIRE(report.accounts.size() == 2);
    CHECK(report.median_f1 == doctest::Approx(0.5));
    CHECK_FALSE(report.all_tied);
    CHECK(report.accounts[0].account_id == "bob");
    CHECK_FALSE(report.accounts[0].above);
    CHECK(report.accounts[1].account_id == "alice");
    CHECK(report.accounts[1].above);
  }
  SUBCASE("all-tied accounts all go above, flagged") {
    Corpus corpus;
    corpus.instances.push_back(
        testutil::make_instance("c1", "p", "r", Label::abusive, "a1"));
    corpus.instances.push_back(
        testutil::make_instance("c2", "p", "r", Label::abusive, "a2"));
    PreparedCorpus prepared = prepare(corpus);
    std::vector<PooledPrediction> pooled = {{1, 0.9, 0}, {1, 0.9, 1}};
    UserSplitReport report = user_median_split(prepared, pooled);
    CHECK(report.all_tied);
    for (const auto& a : report.accounts) CHECK(a.above);
  }
  SUBCASE("degenerate accounts score one without false positives, zero with") {
    Corpus corpus;
    corpus.instances.push_back(
        testutil::make_instance("c1", "p", "r", Label::non_abusive, "clean"));
    corpus.instances.push_back(
        testutil::make_instance("c2", "p", "r", Label::non_abusive, "framed"));
    corpus.instances.push_back(
        testutil::make_instance("c3", "p", "r", Label::abusive, "mixed"));
    PreparedCorpus prepared = prepare(corpus);
    std::vector<PooledPrediction> pooled = {{0, 0.1, 0}, {1, 0.8, 1}, {1, 0.9, 2}};
    UserSplitReport report = user_median_split(prepared, pooled);
    double clean_f1 = -1, framed_f1 = -1;
    for (const auto& a : report.accounts) {
      if (a.account_id == "clean") {
        clean_f1 = a.f1;
        CHECK(a.degenerate);
      }
      if (a.account_id == "framed") framed_f1 = a.f1;
    }
    CHECK(clean_f1 == 1.0);
    CHECK(framed_f1 == 0.0);
  }
  SUBCASE("constant features normalize to zero in both groups") {
    testutil::SyntheticOptions opt;
    opt.n = 60;
    opt.seed = 21;
    Corpus corpus = testutil::synthetic_corpus(opt);
    PreparedCorpus prepared = prepare(corpus);
    std::vector<PooledPrediction> pooled(corpus.instances.size());
    rng::Engine eng(2);
    for (std::size_t i = 0; i < pooled.size(); ++i)
      pooled[i] = {static_cast<std::uint8_t>(eng.index(2)), 0.5, 0};
    UserSplitReport report = user_median_split(prepared, pooled);
    // geo_enabled is false for every synthetic account: constant feature.
    for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
      if (report.feature_names[f] == "ac:geo_enabled") {
        CHECK(report.above_mean_norm[f] == 0.0);
        CHECK(report.below_mean_norm[f] == 0.0);
      }
      CHECK(report.above_mean_norm[f] >= 0.0);
      CHECK(report.above_mean_norm[f] <= 1.0);
    }
    // Rank split keeps the groups within one of each other.
    std::int64_t above = 0, below = 0;
    for (const auto& a : report.accounts) (a.above ? above : below) += 1;
    if (!report.all_tied) CHECK(std::abs(above - below) <= 1);
  }
  SUBCASE("empty predictions are rejected") {
    Corpus corpus;
    corpus.instances.push_back(testutil::make_instance("c", "p", "r", Label::abusive));
    PreparedCorpus prepared = prepare(corpus);
    CHECK_THROWS_AS(user_median_split(prepared, {}), DataError);
  }
}

TEST_CASE("importance_report ranks a decisive feature first") {
  // Accounts are label-pure; followers_count separates them, every other
  // account feature is constant.
  Corpus corpus;
  rng::Engine eng(47);
  for (int a = 0; a < 40; ++a) {
    bool abusive_account = a % 2 == 0;
    std::string id = "acct" + std::to_string(a);
    std::int64_t followers =
        abusive_account ? 5000 + static_cast<std::int64_t>(eng.index(500))
                        : 100 + static_cast<std::int64_t>(eng.index(50));
    for (int r = 0; r < 8; ++r) {
      Instance inst = testutil::make_instance(
          "conv" + std::to_string(a), "some parent words", "some reply words",
          abusive_account ? Label::abusive : Label::non_abusive, id);
      inst.target_account.followers_count = followers;
      corpus.instances.push_back(std::move(inst));
    }
  }
  PreparedCorpus prepared = prepare(corpus);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.hp.rf_trees = 100;
  spec.rng_seed = 11;
  ExperimentOptions opts;
  opts.workers = 4;
  auto entries = importance_report(prepared, "ac", spec, opts);
  REQUIRE(entries.size() == 16);
  CHECK(entries[0].name == "followers_count");
  CHECK(entries[0].importance >= 0.9);
  double sum = 0;
  for (const auto& e : entries) sum += e.importance;
  CHECK(std::abs(sum - 1.0) <= 1e-9);

  SUBCASE("only dense families are allowed") {
    CHECK_THROWS_AS(importance_report(prepared, "rt", spec, opts), ConfigError);
    ModelSpec lr = spec;
    lr.kind = ModelKind::logistic_regression;
    CHECK_THROWS_AS(importance_report(prepared, "ac", lr, opts), ConfigError);
  }
}

TEST_CASE("stratified_sample preserves the positive rate") {
  testutil::SyntheticOptions opt;
  opt.n = 5000;
  opt.positive_rate = 0.163;
  opt.seed = 3;
  std::vector<Label> labels = labels_of(testutil::synthetic_corpus(opt));
  std::int64_t n_pos = 0;
  for (auto l : labels) n_pos += l == Label::abusive;
  double rate = static_cast<double>(n_pos) / static_cast<double>(labels.size());

  auto chosen = stratified_sample(labels, 1000, 42);
  REQUIRE(chosen.size() == 1000);
  CHECK(std::is_sorted(chosen.begin(), chosen.end()));
  std::int64_t chosen_pos = 0;
  for (auto i : chosen) chosen_pos += labels[i] == Label::abusive;
  double chosen_rate = static_cast<double>(chosen_pos) / 1000.0;
  CHECK(std::abs(chosen_rate - rate) <= 0.001);  // within 0.1 percentage points

  auto all = stratified_sample(labels, labels.size() + 10, 42);
  CHECK(all.size() == labels.size());
  auto again = stratified_sample(labels, 1000, 42);
  CHECK(again == chosen);
}
