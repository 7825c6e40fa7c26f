#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ctxabuse/config.hpp"
#include "ctxabuse/corpus.hpp"
#include "ctxabuse/eval.hpp"
#include "ctxabuse/reports.hpp"
#include "ctxabuse/util.hpp"

namespace fs = std::filesystem;
using namespace ctxabuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

Corpus read_corpus_file(const std::string& path, std::vector<ParseIssue>* errors = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  ParseResult result = parse_conversations(in);
  if (errors != nullptr) {
    *errors = std::move(result.errors);
  } else if (!result.errors.empty()) {
    throw DataError(path + ": " + std::to_string(result.errors.size()) +
                    " record(s) failed validation (run `ingest` for the full report)");
  }
  return std::move(result.corpus);
}

Corpus apply_sample(Corpus corpus, const RunConfig& cfg) {
  if (cfg.sample_size == 0 ||
      static_cast<std::size_t>(cfg.sample_size) >= corpus.instances.size())
    return corpus;
  std::vector<Label> labels;
  labels.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances) labels.push_back(inst.label);
  auto chosen = stratified_sample(labels, static_cast<std::size_t>(cfg.sample_size), cfg.seed);
  Corpus sampled;
  sampled.embedding_dim = corpus.embedding_dim;
  sampled.instances.reserve(chosen.size());
  for (std::size_t i : chosen) sampled.instances.push_back(std::move(corpus.instances[i]));
  return sampled;
}

ExperimentOptions experiment_options(const RunConfig& cfg) {
  ExperimentOptions opts;
  opts.k = cfg.k;
  opts.seed = cfg.seed;
  opts.group_by = cfg.group_by == "conversation"
                      ? GroupBy::conversation
                      : cfg.group_by == "account" ? GroupBy::account : GroupBy::none;
  opts.vocab_max_dims = cfg.vocab_max_dims;
  opts.workers = cfg.workers;
  return opts;
}

ModelSpec model_spec(const RunConfig& cfg, const std::string& name) {
  auto kind = model_kind_from_name(name);
  if (!kind) throw ConfigError("unknown model '" + name + "'");
  ModelSpec spec;
  spec.kind = *kind;
  spec.hp = cfg.hp;
  spec.rng_seed = cfg.seed;
  return spec;
}

std::vector<FamilyMask> resolve_masks(const std::vector<std::string>& names) {
  std::vector<FamilyMask> masks;
  for (const auto& name : names) {
    if (name == "paper16") {
      auto p16 = paper16_masks();
      masks.insert(masks.end(), p16.begin(), p16.end());
    } else {
      masks.push_back(parse_mask(name));
    }
  }
  if (masks.empty()) throw ConfigError("no masks configured");
  return masks;
}

struct RunContext {
  RunConfig cfg;
  AssetBundle assets;
  Corpus corpus;
  PreparedCorpus prepared;
};

RunContext make_context(const RunConfig& cfg, bool sample) {
  RunContext ctx{cfg, load_assets(cfg.asset_paths()), {}, {}};
  if (cfg.input.empty()) throw ConfigError("no input file given (config key 'input' or flag)");
  ctx.corpus = read_corpus_file(cfg.input);
  if (sample) ctx.corpus = apply_sample(std::move(ctx.corpus), cfg);
  PreprocessConfig pp{&ctx.assets.stopwords, cfg.keep_hashtag_body};
  ctx.prepared = prepare_corpus(ctx.corpus, ctx.assets, pp);
  return ctx;
}

void ensure_out_dir(const RunConfig& cfg) { fs::create_directories(cfg.out); }

void write_manifest(const RunContext& ctx) {
  write_file(ctx.cfg.out + "/manifest.json", format_manifest_json(ctx.cfg, ctx.assets));
}

int cmd_ingest(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("ingest: no input file given");
  std::vector<ParseIssue> errors;
  Corpus corpus = read_corpus_file(cfg.input, &errors);
  std::vector<std::string> violations = validate_corpus(corpus);

  ensure_out_dir(cfg);
  std::ofstream canonical(cfg.out + "/corpus.jsonl", std::ios::binary);
  if (!canonical) throw DataError("cannot write " + cfg.out + "/corpus.jsonl");
  serialize_corpus(corpus, canonical);

  std::ostringstream report;
  for (const auto& e : errors) report << "line " << e.line << ": " << e.message << "\n";
  for (const auto& v : violations) report << v << "\n";
  write_file(cfg.out + "/ingest_errors.txt", report.str());

  std::cout << "ingested " << corpus.instances.size() << " instance(s), " << errors.size()
            << " rejected record(s), " << violations.size() << " violation(s)\n";
  if (!errors.empty() || !violations.empty()) {
    std::cout << "error report: " << cfg.out << "/ingest_errors.txt\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, bool csv) {
  Corpus corpus = read_corpus_file(cfg.input);
  CorpusStats stats = corpus_stats(corpus);
  std::cout << (csv ? format_stats_csv(stats) : format_stats_table(stats));
  return kExitOk;
}

void write_models(const RunContext& ctx, const ExperimentResult& result,
                  const std::string& prefix) {
  if (!ctx.cfg.save_models) return;
  for (std::size_t f = 0; f < result.models.size(); ++f)
    save_model(result.models[f], ctx.cfg.out + "/" + prefix + "_fold" + std::to_string(f) +
                                     ".model.json");
}

void write_vocab(const RunContext& ctx, const ExperimentResult& result) {
  if (!ctx.cfg.emit_vocab) return;
  for (std::size_t f = 0; f < result.models.size(); ++f) {
    const auto& model = result.models[f];
    if (!model.vocab) continue;
    std::ostringstream out;
    out << "gram,index\n";
    for (std::int32_t i = 0; i < model.vocab->size(); ++i)
      out << csv_escape(model.vocab->grams[i]) << ',' << i << "\n";
    write_file(ctx.cfg.out + "/vocab_fold" + std::to_string(f) + ".csv", out.str());
  }
}

int cmd_run(const RunConfig& cfg) {
  if (cfg.mask.empty()) throw ConfigError("run: a --mask is required");
  RunContext ctx = make_context(cfg, true);
  FamilyMask mask = parse_mask(cfg.mask);
  ModelSpec spec = model_spec(cfg, cfg.model);
  ExperimentOptions opts = experiment_options(cfg);
  opts.keep_models = cfg.save_models || cfg.emit_vocab;

  ExperimentResult result = run_experiment(ctx.prepared, mask, spec, opts);

  GridReport report;
  report.k = opts.k;
  report.seed = opts.seed;
  GridRow row;
  row.mask = mask;
  row.kind = spec.kind;
  row.hp = spec.hp;
  row.cell_seed = spec.rng_seed;
  row.result = result;
  report.rows.push_back(std::move(row));

  ensure_out_dir(cfg);
  write_file(cfg.out + "/run_report.csv", format_grid_csv(report));
  FeatureSpace space = make_feature_space(
      mask,
      result.models.empty() || !result.models[0].vocab ? nullptr : &*result.models[0].vocab,
      ctx.prepared.embedding_dim);
  const Vocabulary* manifest_vocab =
      result.models.empty() || !result.models[0].vocab ? nullptr : &*result.models[0].vocab;
  write_file(cfg.out + "/feature_manifest.csv",
             format_feature_manifest_csv(space, manifest_vocab));
  write_models(ctx, result, "run");
  write_vocab(ctx, result);
  write_manifest(ctx);

  const Metrics& m = result.mean_metrics;
  std::cout << "mask=" << mask_to_string(mask) << " model=" << model_kind_name(spec.kind)
            << " f1=" << m.f1 << " precision=" << m.precision << " recall=" << m.recall
            << "\n";
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg) {
  RunContext ctx = make_context(cfg, true);
  std::vector<FamilyMask> masks = resolve_masks(cfg.masks);
  std::vector<ModelKind> kinds;
  for (const auto& name : cfg.models) {
    auto kind = model_kind_from_name(name);
    if (!kind) throw ConfigError("unknown model '" + name + "'");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw ConfigError("no models configured");

  ModelSpec base;
  base.hp = cfg.hp;
  GridReport report = run_grid(ctx.prepared, masks, kinds, base, experiment_options(cfg));

  ensure_out_dir(cfg);
  write_file(cfg.out + "/grid_report.csv", format_grid_csv(report));
  write_file(cfg.out + "/grid_report.md", format_grid_markdown(report));
  FamilyMask dense_only;
  dense_only.mt = dense_only.tw = dense_only.ac = true;
  dense_only.emb = ctx.prepared.embedding_dim > 0;
  write_file(cfg.out + "/feature_manifest.csv",
             format_feature_manifest_csv(
                 make_feature_space(dense_only, nullptr, ctx.prepared.embedding_dim), nullptr));
  write_manifest(ctx);
  std::cout << "grid: " << report.rows.size() << " cells -> " << cfg.out << "/grid_report.csv\n";
  return kExitOk;
}

int cmd_importance(const RunConfig& cfg) {
  if (cfg.family.empty()) throw ConfigError("importance: a --family (mt|tw|ac) is required");
  RunContext ctx = make_context(cfg, true);
  ModelSpec spec = model_spec(cfg, "rf");
  auto entries = importance_report(ctx.prepared, cfg.family, spec, experiment_options(cfg));
  ensure_out_dir(cfg);
  write_file(cfg.out + "/importance_" + cfg.family + ".csv", format_importance_csv(entries));
  write_manifest(ctx);
  for (std::size_t i = 0; i < entries.size() && i < 5; ++i)
    std::cout << i + 1 << ". " << entries[i].name << " " << entries[i].importance << "\n";
  return kExitOk;
}

int cmd_usersplit(const RunConfig& cfg) {
  if (cfg.mask.empty()) throw ConfigError("usersplit: a --mask is required");
  RunContext ctx = make_context(cfg, true);
  FamilyMask mask = parse_mask(cfg.mask);
  ModelSpec spec = model_spec(cfg, cfg.model);
  ExperimentResult result = run_experiment(ctx.prepared, mask, spec, experiment_options(cfg));
  UserSplitReport report = user_median_split(ctx.prepared, result.pooled);
  ensure_out_dir(cfg);
  write_file(cfg.out + "/user_f1.csv", format_user_f1_csv(report));
  write_file(cfg.out + "/group_feature_averages.csv", format_group_averages_csv(report));
  write_manifest(ctx);
  std::cout << "median per-account F1 " << report.median_f1 << " over "
            << report.accounts.size() << " accounts"
            << (report.all_tied ? " (degenerate: all tied)" : "") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware abusive reply classification experiments"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override its keys)");

  // Global overrides; CLI11 applies these after parsing the subcommand.
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::int64_t> sample;
  app.add_option("--seed", seed, "rng seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--sample", sample, "stratified subsample size (0 = all)");

  std::string input, mask, model, family, masks_arg, models_arg;
  bool stats_csv = false;

  auto* ingest = app.add_subcommand("ingest", "parse, validate and canonicalize a corpus");
  ingest->add_option("input", input, "corpus JSONL file");
  auto* stats = app.add_subcommand("stats", "print the corpus summary table");
  stats->add_option("input", input, "corpus JSONL file");
  stats->add_flag("--csv", stats_csv, "emit CSV instead of the aligned table");
  auto* grid = app.add_subcommand("grid", "run the mask x model experiment grid");
  grid->add_option("--input", input, "corpus JSONL file");
  grid->add_option("--masks", masks_arg, "comma-separated masks or 'paper16'");
  grid->add_option("--models", models_arg, "comma-separated models (lr,svm,rf)");
  auto* run = app.add_subcommand("run", "run a single mask + model experiment");
  run->add_option("--input", input, "corpus JSONL file");
  run->add_option("--mask", mask, "family mask, e.g. te+mt");
  run->add_option("--model", model, "lr, svm or rf");
  auto* importance = app.add_subcommand("importance", "RF feature importance for one family");
  importance->add_option("--input", input, "corpus JSONL file");
  importance->add_option("--family", family, "mt, tw or ac");
  auto* usersplit = app.add_subcommand("usersplit", "median split of per-account F1");
  usersplit->add_option("--input", input, "corpus JSONL file");
  usersplit->add_option("--mask", mask, "family mask");
  usersplit->add_option("--model", model, "lr, svm or rf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!input.empty()) cfg.input = input;
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    if (workers) cfg.workers = *workers;
    if (sample) cfg.sample_size = *sample;
    if (!mask.empty()) cfg.mask = mask;
    if (!model.empty()) cfg.model = model;
    if (!family.empty()) cfg.family = family;
    const auto split_csv = [](const std::string& s) {
      std::vector<std::string> parts;
      std::size_t pos = 0;
      while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        parts.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      return parts;
    };
    if (!masks_arg.empty()) cfg.masks = split_csv(masks_arg);
    if (!models_arg.empty()) cfg.models = split_csv(models_arg);
    if (cfg.workers < 1) throw ConfigError("workers must be positive");
    if (cfg.sample_size < 0) throw ConfigError("sample must be non-negative");

    if (ingest->parsed()) return cmd_ingest(cfg);
    if (stats->parsed()) return cmd_stats(cfg, stats_csv);
    if (grid->parsed()) return cmd_grid(cfg);
    if (run->parsed()) return cmd_run(cfg);
    if (importance->parsed()) return cmd_importance(cfg);
    if (usersplit->parsed()) return cmd_usersplit(cfg);
    throw ConfigError("no subcommand given");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
