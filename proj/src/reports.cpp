#include "ctxabuse/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctxabuse/util.hpp"

namespace ctxabuse {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string fmt2(double v) { return fmt(v, "%.2f"); }

std::string joined_folds(const std::vector<Metrics>& folds, double Metrics::*field) {
  std::string out;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (i) out += ';';
    out += fmt(folds[i].*field);
  }
  return out;
}

}  // namespace

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_stats_csv(const CorpusStats& s) {
  std::ostringstream out;
  out << "feature,count\n";
  out << "Number of user accounts," << s.n_accounts << "\n";
  out << "Number of conversations," << s.n_conversations << "\n";
  out << "Number of conversations with abusive replies," << s.n_conversations_with_abusive
      << "\n";
  out << "Number of conversations with non-abusive replies,"
      << s.n_conversations_without_abusive << "\n";
  out << "Number of replies," << s.n_replies << "\n";
  out << "Number of abusive replies," << s.n_abusive << "\n";
  out << "Number of non-abusive replies," << s.n_non_abusive << "\n";
  return out.str();
}

std::string format_stats_table(const CorpusStats& s) {
  struct Row {
    const char* name;
    std::int64_t value;
  };
  const Row rows[] = {
      {"Number of user accounts", s.n_accounts},
      {"Number of conversations", s.n_conversations},
      {"Number of conversations with abusive replies", s.n_conversations_with_abusive},
      {"Number of conversations with non-abusive replies", s.n_conversations_without_abusive},
      {"Number of replies", s.n_replies},
      {"Number of abusive replies", s.n_abusive},
      {"Number of non-abusive replies", s.n_non_abusive},
  };
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, std::string(r.name).size());
  std::ostringstream out;
  for (const auto& r : rows) {
    out << r.name;
    for (std::size_t i = std::string(r.name).size(); i < width + 2; ++i) out << ' ';
    out << r.value << "\n";
  }
  return out.str();
}

std::string format_grid_csv(const GridReport& report) {
  std::ostringstream out;
  out << "rt,te,mt,tw,ac,emb,model,f1,precision,recall,"
         "pooled_f1,pooled_precision,pooled_recall,"
         "fold_f1,fold_precision,fold_recall,seed,hyperparameters\n";
  for (const auto& row : report.rows) {
    const auto& m = row.result.mean_metrics;
    const auto& p = row.result.pooled_metrics;
    std::ostringstream hp;
    hp << "lr_lambda=" << row.hp.lr_lambda << " lr_max_iter=" << row.hp.lr_max_iter
       << " svm_lambda=" << row.hp.svm_lambda << " svm_epochs=" << row.hp.svm_epochs
       << " rf_trees=" << row.hp.rf_trees << " rf_max_depth=" << row.hp.rf_max_depth
       << " smote_k=" << row.hp.smote_k << " smote_strategy=" << row.hp.smote_strategy
       << " threshold=" << row.hp.threshold;
    out << (row.mask.rt ? 1 : 0) << ',' << (row.mask.te ? 1 : 0) << ',' << (row.mask.mt ? 1 : 0)
        << ',' << (row.mask.tw ? 1 : 0) << ',' << (row.mask.ac ? 1 : 0) << ','
        << (row.mask.emb ? 1 : 0) << ',' << model_kind_name(row.kind) << ',' << fmt(m.f1) << ','
        << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(p.f1) << ','
        << fmt(p.precision) << ',' << fmt(p.recall) << ','
        << csv_escape(joined_folds(row.result.fold_metrics, &Metrics::f1)) << ','
        << csv_escape(joined_folds(row.result.fold_metrics, &Metrics::precision)) << ','
        << csv_escape(joined_folds(row.result.fold_metrics, &Metrics::recall)) << ','
        << row.cell_seed << ',' << csv_escape(hp.str()) << "\n";
  }
  return out.str();
}

std::string format_grid_markdown(const GridReport& report) {
  // Collect the distinct masks (rows) and model kinds (column groups),
  // preserving first-appearance order.
  std::vector<FamilyMask> masks;
  std::vector<ModelKind> kinds;
  for (const auto& row : report.rows) {
    if (std::find(masks.begin(), masks.end(), row.mask) == masks.end())
      masks.push_back(row.mask);
    if (std::find(kinds.begin(), kinds.end(), row.kind) == kinds.end())
      kinds.push_back(row.kind);
  }
  const auto cell = [&](const FamilyMask& mask, ModelKind kind) -> const GridRow* {
    for (const auto& row : report.rows)
      if (row.mask == mask && row.kind == kind) return &row;
    return nullptr;
  };
  std::vector<double> best_f1(kinds.size(), -1.0);
  for (std::size_t c = 0; c < kinds.size(); ++c)
    for (const auto& mask : masks)
      if (const GridRow* row = cell(mask, kinds[c]))
        best_f1[c] = std::max(best_f1[c], row->result.mean_metrics.f1);

  std::ostringstream out;
  out << "| # | Rt | Te | Mt | Tw | Ac |";
  for (auto kind : kinds) {
    std::string name = kind == ModelKind::logistic_regression
                           ? "LR"
                           : kind == ModelKind::linear_svm ? "SVM" : "RF";
    out << ' ' << name << " F1 | " << name << " Prec | " << name << " Rec |";
  }
  out << "\n|---|----|----|----|----|----|";
  for (std::size_t c = 0; c < kinds.size(); ++c) out << "------|------|------|";
  out << "\n";
  for (std::size_t r = 0; r < masks.size(); ++r) {
    const FamilyMask& mask = masks[r];
    const auto x = [](bool b) { return b ? "X" : " "; };
    out << "| " << r + 1 << " | " << x(mask.rt) << " | " << x(mask.te) << " | " << x(mask.mt)
        << " | " << x(mask.tw) << " | " << x(mask.ac) << " |";
    for (std::size_t c = 0; c < kinds.size(); ++c) {
      const GridRow* row = cell(mask, kinds[c]);
      if (row == nullptr) {
        out << " - | - | - |";
        continue;
      }
      const Metrics& m = row->result.mean_metrics;
      bool best = m.f1 == best_f1[c];
      std::string f1 = best ? "**" + fmt2(m.f1) + "**" : fmt2(m.f1);
      out << ' ' << f1 << " | " << fmt2(m.precision) << " | " << fmt2(m.recall) << " |";
    }
    out << "\n";
  }
  out << "\nMean of F1, precision and recall over " << report.k
      << "-fold cross-validation (seed " << report.seed << ").\n";
  return out.str();
}

std::string format_user_f1_csv(const UserSplitReport& report) {
  std::ostringstream out;
  out << "account_id,f1,n_instances,degenerate,group\n";
  for (const auto& a : report.accounts)
    out << csv_escape(a.account_id) << ',' << fmt(a.f1) << ',' << a.n_instances << ','
        << (a.degenerate ? 1 : 0) << ',' << (a.above ? "above" : "below") << "\n";
  return out.str();
}

std::string format_group_averages_csv(const UserSplitReport& report) {
  std::ostringstream out;
  out << "feature,above_norm,below_norm,above_raw,below_raw\n";
  for (std::size_t f = 0; f < report.feature_names.size(); ++f)
    out << csv_escape(report.feature_names[f]) << ',' << fmt(report.above_mean_norm[f]) << ','
        << fmt(report.below_mean_norm[f]) << ',' << fmt(report.above_mean_raw[f]) << ','
        << fmt(report.below_mean_raw[f]) << "\n";
  return out.str();
}

std::string format_importance_csv(const std::vector<ImportanceEntry>& entries) {
  std::ostringstream out;
  out << "rank,feature,importance\n";
  for (std::size_t i = 0; i < entries.size(); ++i)
    out << i + 1 << ',' << csv_escape(entries[i].name) << ',' << fmt(entries[i].importance)
        << "\n";
  return out.str();
}

std::string format_feature_manifest_csv(const FeatureSpace& space, const Vocabulary* vocab) {
  std::ostringstream out;
  out << "name,family,index\n";
  std::int64_t at = 0;
  if (space.mask.has_text() && vocab != nullptr) {
    const char* family = space.mask.rt ? "rt" : "te";
    const char* side = space.mask.rt ? "reply" : "te_reply";
    for (std::int32_t i = 0; i < vocab->size(); ++i)
      out << csv_escape(std::string(side) + ":" + vocab->grams[i]) << ',' << family << ','
          << at++ << "\n";
    if (space.mask.te)
      for (std::int32_t i = 0; i < vocab->size(); ++i)
        out << csv_escape(std::string("te_parent:") + vocab->grams[i]) << ',' << family << ','
            << at++ << "\n";
  } else {
    at = space.sparse_dims();
  }
  for (std::size_t r = 0; r < space.dense.ranges.size(); ++r) {
    const auto& range = space.dense.ranges[r];
    for (int i = range.begin; i < range.end; ++i)
      out << csv_escape(space.dense.names[i]) << ',' << range.family << ',' << at + i << "\n";
  }
  return out.str();
}

std::string format_manifest_json(const RunConfig& cfg, const AssetBundle& assets) {
  nlohmann::ordered_json j;
  j["tool"] = "ctxabuse";
  j["version"] = "0.1.0";
  j["model_format_version"] = 1;
  j["seed"] = cfg.seed;
  j["config_hash"] = fnv1a_hex(config_to_json(cfg));
  nlohmann::ordered_json sums = nlohmann::ordered_json::object();
  for (const auto& [path, sum] : assets.checksums) sums[path] = sum;
  j["asset_checksums"] = sums;
  return j.dump(1) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path);
  out << content;
}

}  // namespace ctxabuse
