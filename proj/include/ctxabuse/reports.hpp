#pragma once

#include <string>
#include <vector>

#include "ctxabuse/config.hpp"
#include "ctxabuse/corpus.hpp"
#include "ctxabuse/eval.hpp"

namespace ctxabuse {

// CSV field quoting per RFC 4180 (quotes doubled, fields with separators
// or quotes wrapped).
std::string csv_escape(const std::string& field);

std::string format_stats_csv(const CorpusStats& stats);
std::string format_stats_table(const CorpusStats& stats);

std::string format_grid_csv(const GridReport& report);
// Aligned markdown table shaped like the experiment grid; the best F1 per
// model column is bolded.
std::string format_grid_markdown(const GridReport& report);

std::string format_user_f1_csv(const UserSplitReport& report);
std::string format_group_averages_csv(const UserSplitReport& report);
std::string format_importance_csv(const std::vector<ImportanceEntry>& entries);

// name,family,index rows for the dense features of a mask (and the text
// block ranges when a vocabulary is attached).
std::string format_feature_manifest_csv(const FeatureSpace& space, const Vocabulary* vocab);

// Run manifest: version, seed, config hash, asset checksums.
std::string format_manifest_json(const RunConfig& cfg, const AssetBundle& assets);

void write_file(const std::string& path, const std::string& content);

}  // namespace ctxabuse
