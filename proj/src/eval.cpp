#include "ctxabuse/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "ctxabuse/models/forest.hpp"
#include "ctxabuse/models/smote.hpp"
#include "ctxabuse/util.hpp"

namespace ctxabuse {

FoldPlan stratified_folds(const std::vector<Label>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("stratified_folds: k must be at least 2");
  if (static_cast<std::size_t>(k) > labels.size())
    throw ConfigError("stratified_folds: k exceeds the number of instances");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == Label::abusive ? pos : neg).push_back(i);
  for (const auto* cls : {&pos, &neg})
    if (cls->size() < static_cast<std::size_t>(k))
      throw ConfigError("stratified_folds: a class has fewer than k members");

  rng::Engine eng(rng::mix(seed, 0x464F4C44ULL));  // "FOLD"
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(labels.size(), -1);
  int cursor = 0;
  // Abusive class dealt first; the fold cursor continues across classes so
  // total fold sizes stay within one of each other.
  for (auto* cls : {&pos, &neg}) {
    eng.shuffle(*cls);
    for (std::size_t i : *cls) plan.assignment[i] = cursor++ % k;
  }
  return plan;
}

FoldPlan grouped_folds(const std::vector<std::string>& group_keys, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("grouped_folds: k must be at least 2");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < group_keys.size(); ++i) {
    auto [it, inserted] = members.try_emplace(group_keys[i]);
    if (inserted) order.push_back(group_keys[i]);
    it->second.push_back(i);
  }
  if (order.size() < static_cast<std::size_t>(k))
    throw ConfigError("grouped_folds: fewer groups than folds");

  rng::Engine eng(rng::mix(seed, 0x47525550ULL));  // "GRUP"
  eng.shuffle(order);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(group_keys.size(), -1);
  int cursor = 0;
  for (const auto& g : order) {
    int fold = cursor++ % k;
    for (std::size_t i : members[g]) plan.assignment[i] = fold;
  }
  return plan;
}

ConfusionMatrix confusion(const std::vector<std::uint8_t>& y_true,
                          const std::vector<std::uint8_t>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw DataError("confusion: y_true and y_pred lengths differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] && y_pred[i]) ++cm.tp;
    else if (!y_true[i] && y_pred[i]) ++cm.fp;
    else if (y_true[i] && !y_pred[i]) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

Metrics prf(const ConfusionMatrix& cm) {
  Metrics m;
  m.precision = cm.tp + cm.fp > 0 ? static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp) : 0.0;
  m.recall = cm.tp + cm.fn > 0 ? static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                    : 0.0;
  return m;
}

std::vector<Label> PreparedCorpus::labels() const {
  std::vector<Label> out;
  out.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances) out.push_back(inst.label);
  return out;
}

PreparedCorpus prepare_corpus(Corpus corpus, const AssetBundle& assets,
                              const PreprocessConfig& cfg) {
  PreparedCorpus prepared;
  prepared.embedding_dim = corpus.embedding_dim;

  FamilyMask all;
  all.te = all.mt = all.tw = all.ac = true;
  all.emb = corpus.embedding_dim > 0;
  prepared.base_layout = dense_layout(all, corpus.embedding_dim);

  prepared.items.reserve(corpus.instances.size());
  std::string cached_conversation, cached_parent;
  ProcessedText parent_pt;
  bool have_cache = false;
  for (const auto& inst : corpus.instances) {
    // Instances of one conversation are contiguous; reuse the parent's
    // preprocessing when the text repeats.
    if (!have_cache || cached_conversation != inst.conversation_id ||
        cached_parent != inst.parent_text) {
      parent_pt = preprocess_text(inst.parent_text, cfg);
      cached_conversation = inst.conversation_id;
      cached_parent = inst.parent_text;
      have_cache = true;
    }
    ProcessedText reply_pt = preprocess_text(inst.reply_text, cfg);

    PreparedInstance item;
    item.dense_base.resize(prepared.base_layout.dims());
    int at = 0;
    const auto put = [&](const Eigen::VectorXd& block) {
      item.dense_base.segment(at, block.size()) = block;
      at += static_cast<int>(block.size());
    };
    put(meta_text_features(parent_pt, reply_pt, assets));
    put(tweet_features(inst.parent_meta, parent_pt, reply_pt, assets.lexicon));
    put(account_features(inst.target_account));
    if (all.emb) {
      Eigen::VectorXd emb = Eigen::VectorXd::Zero(corpus.embedding_dim);
      if (!inst.dense_embedding.empty())
        emb = Eigen::Map<const Eigen::VectorXd>(inst.dense_embedding.data(),
                                                corpus.embedding_dim);
      put(emb);
    }
    put(te_sentiment_features(parent_pt, reply_pt, assets.lexicon));

    item.parent_stems = parent_pt.stems;
    item.reply_stems = reply_pt.stems;
    prepared.items.push_back(std::move(item));
  }
  prepared.corpus = std::move(corpus);
  return prepared;
}

namespace {

// Base-layout column indices selected by a mask, in canonical order.
std::vector<int> dense_selection(const PreparedCorpus& prepared, const FamilyMask& mask) {
  std::vector<int> idx;
  for (const auto& range : prepared.base_layout.ranges) {
    bool active = (range.family == "mt" && mask.mt) || (range.family == "tw" && mask.tw) ||
                  (range.family == "ac" && mask.ac) || (range.family == "emb" && mask.emb) ||
                  (range.family == "te" && mask.te);
    if (!active) continue;
    for (int i = range.begin; i < range.end; ++i) idx.push_back(i);
  }
  return idx;
}

FeatureVector build_row(const PreparedCorpus& prepared, std::size_t i, const FamilyMask& mask,
                        const Vocabulary* vocab, const std::vector<int>& dense_idx,
                        const ScalerParams* scaler) {
  const PreparedInstance& item = prepared.items[i];
  FeatureVector fv;
  if (mask.rt) {
    fv.sparse = vectorize(item.reply_stems, *vocab);
  } else if (mask.te) {
    fv.sparse = vectorize(item.reply_stems, *vocab);
    SparseVec parent_block = vectorize(item.parent_stems, *vocab);
    std::int32_t offset = vocab->size();
    for (const auto& [idx, val] : parent_block) fv.sparse.emplace_back(idx + offset, val);
  }
  fv.dense.resize(static_cast<int>(dense_idx.size()));
  for (std::size_t d = 0; d < dense_idx.size(); ++d)
    fv.dense[static_cast<int>(d)] = item.dense_base[dense_idx[d]];
  if (scaler != nullptr) apply_scaler_in_place(fv.dense, *scaler);
  return fv;
}

Metrics mean_of(const std::vector<Metrics>& folds) {
  Metrics m;
  if (folds.empty()) return m;
  for (const auto& f : folds) {
    m.precision += f.precision;
    m.recall += f.recall;
    m.f1 += f.f1;
  }
  double inv = 1.0 / static_cast<double>(folds.size());
  m.precision *= inv;
  m.recall *= inv;
  m.f1 *= inv;
  return m;
}

std::vector<std::string> group_keys_for(const Corpus& corpus, GroupBy group_by) {
  std::vector<std::string> keys;
  keys.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances)
    keys.push_back(group_by == GroupBy::conversation ? inst.conversation_id
                                                     : inst.target_account.account_id);
  return keys;
}

}  // namespace

ExperimentResult run_experiment(const PreparedCorpus& prepared, const FamilyMask& mask,
                                const ModelSpec& spec, const ExperimentOptions& opts) {
  if (!mask.legal()) throw ConfigError("run_experiment: illegal mask");
  if (mask.emb && prepared.embedding_dim == 0)
    throw ConfigError("run_experiment: mask includes emb but corpus has no embeddings");
  const std::size_t n = prepared.items.size();
  const std::vector<Label> labels = prepared.labels();

  FoldPlan plan = opts.group_by == GroupBy::none
                      ? stratified_folds(labels, opts.k, opts.seed)
                      : grouped_folds(group_keys_for(prepared.corpus, opts.group_by), opts.k,
                                      opts.seed);

  const std::vector<int> dense_idx = dense_selection(prepared, mask);
  ExperimentResult result;
  result.pooled.resize(n);

  for (int fold = 0; fold < opts.k; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < n; ++i)
      (plan.assignment[i] == fold ? test_idx : train_idx).push_back(i);

    std::optional<Vocabulary> vocab;
    if (mask.has_text()) {
      std::vector<const std::vector<std::string>*> texts;
      texts.reserve(train_idx.size() * (mask.te ? 2 : 1));
      for (std::size_t i : train_idx) texts.push_back(&prepared.items[i].reply_stems);
      if (mask.te)
        for (std::size_t i : train_idx) texts.push_back(&prepared.items[i].parent_stems);
      vocab = fit_vectorizer(texts, opts.vocab_max_dims);
    }
    FeatureSpace space =
        make_feature_space(mask, vocab ? &*vocab : nullptr, prepared.embedding_dim);

    Eigen::MatrixXd train_dense(static_cast<Eigen::Index>(train_idx.size()),
                                static_cast<Eigen::Index>(dense_idx.size()));
    for (std::size_t r = 0; r < train_idx.size(); ++r)
      for (std::size_t d = 0; d < dense_idx.size(); ++d)
        train_dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) =
            prepared.items[train_idx[r]].dense_base[dense_idx[d]];
    ScalerParams scaler = fit_scaler(train_dense);

    DataSet ds;
    ds.sparse_dims = space.sparse_dims();
    ds.dense_dims = static_cast<int>(dense_idx.size());
    ds.rows.reserve(train_idx.size());
    ds.y.reserve(train_idx.size());
    for (std::size_t i : train_idx) {
      ds.rows.push_back(build_row(prepared, i, mask, vocab ? &*vocab : nullptr, dense_idx,
                                  &scaler));
      ds.y.push_back(labels[i] == Label::abusive ? 1 : 0);
    }

    const std::uint64_t fold_seed = rng::mix(spec.rng_seed, static_cast<std::uint64_t>(fold));

    if (spec.hp.smote_strategy == "parity") {
      std::int64_t n_pos = 0;
      for (auto y : ds.y) n_pos += y;
      std::int64_t n_neg = static_cast<std::int64_t>(ds.y.size()) - n_pos;
      std::uint8_t minority = n_pos <= n_neg ? 1 : 0;
      std::int64_t n_synth = std::llabs(n_pos - n_neg);
      if (n_synth > 0) {
        std::vector<FeatureVector> minority_rows;
        for (std::size_t r = 0; r < ds.rows.size(); ++r)
          if (ds.y[r] == minority) minority_rows.push_back(ds.rows[r]);
        rng::Engine eng(rng::mix(fold_seed, 0x534D4F54ULL));  // "SMOT"
        auto synthetic = smote(minority_rows, spec.hp.smote_k, n_synth, eng);
        for (auto& row : synthetic) {
          ds.rows.push_back(std::move(row));
          ds.y.push_back(minority);
        }
      }
    } else if (spec.hp.smote_strategy != "none") {
      throw ConfigError("unknown smote_strategy '" + spec.hp.smote_strategy + "'");
    }

    ModelSpec fold_spec = spec;
    fold_spec.rng_seed = fold_seed;
    TrainedModel model = train_model(ds, fold_spec, opts.workers);
    model.space = space;
    model.vocab = vocab;
    model.scaler = scaler;

    std::vector<FeatureVector> test_rows;
    std::vector<std::uint8_t> test_y;
    test_rows.reserve(test_idx.size());
    for (std::size_t i : test_idx) {
      test_rows.push_back(build_row(prepared, i, mask, vocab ? &*vocab : nullptr, dense_idx,
                                    &scaler));
      test_y.push_back(labels[i] == Label::abusive ? 1 : 0);
    }
    Predictions preds = predict(model, test_rows);
    result.fold_metrics.push_back(prf(confusion(test_y, preds.labels)));
    for (std::size_t j = 0; j < test_idx.size(); ++j)
      result.pooled[test_idx[j]] = {preds.labels[j], preds.scores[j], fold};

    if (opts.keep_models) result.models.push_back(std::move(model));
  }

  result.mean_metrics = mean_of(result.fold_metrics);
  std::vector<std::uint8_t> all_y, all_pred;
  all_y.reserve(n);
  all_pred.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    all_y.push_back(labels[i] == Label::abusive ? 1 : 0);
    all_pred.push_back(result.pooled[i].label);
  }
  result.pooled_metrics = prf(confusion(all_y, all_pred));
  return result;
}

GridReport run_grid(const PreparedCorpus& prepared, const std::vector<FamilyMask>& masks,
                    const std::vector<ModelKind>& kinds, const ModelSpec& base_spec,
                    const ExperimentOptions& opts) {
  GridReport report;
  report.k = opts.k;
  report.seed = opts.seed;
  for (const auto& mask : masks)
    for (auto kind : kinds) {
      GridRow row;
      row.mask = mask;
      row.kind = kind;
      row.hp = base_spec.hp;
      row.cell_seed = rng::mix(rng::mix(opts.seed, rng::hash_str(mask_to_string(mask))),
                               static_cast<std::uint64_t>(kind));
      report.rows.push_back(std::move(row));
    }

  const int pool = std::max(1, opts.workers);
  ExperimentOptions cell_opts = opts;
  cell_opts.workers = pool > 1 ? 1 : opts.workers;

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto run_cell = [&](GridRow& row) {
    ModelSpec spec = base_spec;
    spec.kind = row.kind;
    spec.rng_seed = row.cell_seed;
    row.result = run_experiment(prepared, row.mask, spec, cell_opts);
  };

  if (pool == 1) {
    for (auto& row : report.rows) run_cell(row);
  } else {
    std::vector<std::thread> threads;
    int n_workers = static_cast<int>(std::min<std::size_t>(pool, report.rows.size()));
    for (int w = 0; w < n_workers; ++w)
      threads.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= report.rows.size()) break;
          try {
            run_cell(report.rows[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return report;
}

UserSplitReport user_median_split(const PreparedCorpus& prepared,
                                  const std::vector<PooledPrediction>& pooled) {
  const Corpus& corpus = prepared.corpus;
  if (pooled.empty() || pooled.size() != corpus.instances.size())
    throw DataError("user_median_split: predictions do not cover the corpus");

  std::map<std::string, std::vector<std::size_t>> by_account;
  for (std::size_t i = 0; i < corpus.instances.size(); ++i)
    by_account[corpus.instances[i].target_account.account_id].push_back(i);

  UserSplitReport report;
  for (const auto& [account, idx] : by_account) {
    ConfusionMatrix cm;
    for (std::size_t i : idx) {
      bool truth = corpus.instances[i].label == Label::abusive;
      bool pred = pooled[i].label != 0;
      if (truth && pred) ++cm.tp;
      else if (!truth && pred) ++cm.fp;
      else if (truth && !pred) ++cm.fn;
      else ++cm.tn;
    }
    AccountSplitRow row;
    row.account_id = account;
    row.n_instances = static_cast<std::int64_t>(idx.size());
    row.degenerate = cm.tp + cm.fn == 0;
    // Accounts with no abusive ground truth have an undefined F1; they
    // score 1 when the model raised no false alarms, else 0.
    row.f1 = row.degenerate ? (cm.fp == 0 ? 1.0 : 0.0) : prf(cm).f1;
    report.accounts.push_back(std::move(row));
  }

  std::sort(report.accounts.begin(), report.accounts.end(),
            [](const AccountSplitRow& a, const AccountSplitRow& b) {
              if (a.f1 != b.f1) return a.f1 < b.f1;
              return a.account_id < b.account_id;
            });
  const std::size_t n = report.accounts.size();
  report.median_f1 = n % 2 == 1
                         ? report.accounts[n / 2].f1
                         : 0.5 * (report.accounts[n / 2 - 1].f1 + report.accounts[n / 2].f1);
  report.all_tied = report.accounts.front().f1 == report.accounts.back().f1;
  if (report.all_tied) {
    for (auto& a : report.accounts) a.above = true;  // degenerate tie rule
  } else {
    // Rank split: the upper half (ties at the boundary resolved upward by
    // the sort order) forms the above-median group.
    for (std::size_t i = n / 2; i < n; ++i) report.accounts[i].above = true;
  }

  // Group averages over the standing dense families (te's text-attached
  // scalars excluded): per-account mean first, accounts weighted equally.
  std::vector<int> feature_idx;
  for (const auto& range : prepared.base_layout.ranges) {
    if (range.family == "te") continue;
    for (int i = range.begin; i < range.end; ++i) {
      feature_idx.push_back(i);
      report.feature_names.push_back(range.family + ":" +
                                     prepared.base_layout.names[i]);
    }
  }
  const std::size_t d = feature_idx.size();
  Eigen::VectorXd above_sum = Eigen::VectorXd::Zero(static_cast<int>(d));
  Eigen::VectorXd below_sum = Eigen::VectorXd::Zero(static_cast<int>(d));
  std::int64_t n_above = 0, n_below = 0;
  for (const auto& row : report.accounts) {
    const auto& idx = by_account[row.account_id];
    Eigen::VectorXd account_mean = Eigen::VectorXd::Zero(static_cast<int>(d));
    for (std::size_t i : idx)
      for (std::size_t f = 0; f < d; ++f)
        account_mean[static_cast<int>(f)] += prepared.items[i].dense_base[feature_idx[f]];
    account_mean /= static_cast<double>(idx.size());
    if (row.above) {
      above_sum += account_mean;
      ++n_above;
    } else {
      below_sum += account_mean;
      ++n_below;
    }
  }
  report.above_mean_raw.resize(d, 0.0);
  report.below_mean_raw.resize(d, 0.0);
  report.above_mean_norm.resize(d, 0.0);
  report.below_mean_norm.resize(d, 0.0);
  for (std::size_t f = 0; f < d; ++f) {
    double above = n_above > 0 ? above_sum[static_cast<int>(f)] / n_above : 0.0;
    double below = n_below > 0 ? below_sum[static_cast<int>(f)] / n_below : 0.0;
    report.above_mean_raw[f] = above;
    report.below_mean_raw[f] = below;
    double lo = std::min(above, below), hi = std::max(above, below);
    if (hi > lo) {
      report.above_mean_norm[f] = (above - lo) / (hi - lo);
      report.below_mean_norm[f] = (below - lo) / (hi - lo);
    }  // else both stay 0 (min-max degenerate rule)
  }
  return report;
}

std::vector<ImportanceEntry> importance_report(const PreparedCorpus& prepared,
                                               const std::string& family,
                                               const ModelSpec& spec,
                                               const ExperimentOptions& opts) {
  if (spec.kind != ModelKind::random_forest)
    throw ConfigError("importance_report: model kind must be random_forest");
  if (family != "mt" && family != "tw" && family != "ac")
    throw ConfigError("importance_report: family must be one of mt, tw, ac");
  FamilyMask mask = parse_mask(family);

  const std::vector<int> dense_idx = dense_selection(prepared, mask);
  const std::vector<Label> labels = prepared.labels();
  const std::size_t n = prepared.items.size();

  Eigen::MatrixXd dense(static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(dense_idx.size()));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t f = 0; f < dense_idx.size(); ++f)
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) =
          prepared.items[r].dense_base[dense_idx[f]];
  ScalerParams scaler = fit_scaler(dense);

  DataSet ds;
  ds.sparse_dims = 0;
  ds.dense_dims = static_cast<int>(dense_idx.size());
  ds.rows.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    FeatureVector fv;
    fv.dense = dense.row(static_cast<Eigen::Index>(r)).transpose();
    apply_scaler_in_place(fv.dense, scaler);
    ds.rows.push_back(std::move(fv));
    ds.y.push_back(labels[r] == Label::abusive ? 1 : 0);
  }

  if (spec.hp.smote_strategy == "parity") {
    std::int64_t n_pos = 0;
    for (auto y : ds.y) n_pos += y;
    std::int64_t n_neg = static_cast<std::int64_t>(ds.y.size()) - n_pos;
    std::uint8_t minority = n_pos <= n_neg ? 1 : 0;
    std::int64_t n_synth = std::llabs(n_pos - n_neg);
    if (n_synth > 0) {
      std::vector<FeatureVector> minority_rows;
      for (std::size_t r = 0; r < ds.rows.size(); ++r)
        if (ds.y[r] == minority) minority_rows.push_back(ds.rows[r]);
      rng::Engine eng(rng::mix(spec.rng_seed, 0x494D504FULL));  // "IMPO"
      auto synthetic = smote(minority_rows, spec.hp.smote_k, n_synth, eng);
      for (auto& row : synthetic) {
        ds.rows.push_back(std::move(row));
        ds.y.push_back(minority);
      }
    }
  }

  Forest forest = train_random_forest(ds, spec.hp, spec.rng_seed, opts.workers);
  DenseLayout layout = dense_layout(mask, 0);
  std::vector<ImportanceEntry> entries;
  for (int f = 0; f < layout.dims(); ++f)
    entries.push_back({layout.names[f], forest.importance[f]});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ImportanceEntry& a, const ImportanceEntry& b) {
                     return a.importance > b.importance;
                   });
  return entries;
}

std::vector<std::size_t> stratified_sample(const std::vector<Label>& labels,
                                           std::size_t sample_size, std::uint64_t seed) {
  const std::size_t n = labels.size();
  if (sample_size == 0) throw ConfigError("stratified_sample: sample size must be positive");
  if (sample_size >= n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i)
    (labels[i] == Label::abusive ? pos : neg).push_back(i);

  double pos_rate = static_cast<double>(pos.size()) / static_cast<double>(n);
  std::size_t target_pos =
      static_cast<std::size_t>(std::llround(pos_rate * static_cast<double>(sample_size)));
  target_pos = std::min(target_pos, pos.size());
  std::size_t target_neg = sample_size - target_pos;
  if (target_neg > neg.size()) {
    target_neg = neg.size();
    target_pos = sample_size - target_neg;
  }

  rng::Engine eng(rng::mix(seed, 0x53414D50ULL));  // "SAMP"
  eng.shuffle(pos);
  eng.shuffle(neg);
  std::vector<std::size_t> chosen;
  chosen.reserve(sample_size);
  chosen.insert(chosen.end(), pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(target_pos));
  chosen.insert(chosen.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(target_neg));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace ctxabuse
