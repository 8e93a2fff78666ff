// Copyright 2026 The Chitin Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chitin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "chitin/augment.hpp"
#include "chitin/dataset.hpp"
#include "chitin/error.hpp"
#include "chitin/evaluation.hpp"
#include "chitin/fileio.hpp"
#include "chitin/synth.hpp"

namespace chitin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kToolVersion = "chitin 1.0.0";

std::string join_families(const std::vector<Family>& families) {
  std::string s;
  for (Family f : families) s += (s.empty() ? "" : ",") + std::string(to_string(f));
  return s;
}

}  // namespace

json to_json(const RunConfig& cfg) {
  return {{"sample_rate", cfg.sample_rate},
          {"window_seconds", cfg.window_seconds},
          {"n_mfcc", cfg.n_mfcc},
          {"stats", to_string(cfg.stats)},
          {"per_class", cfg.per_class},
          {"seed", cfg.seed},
          {"models", join_families(cfg.families)},
          {"out", cfg.out.generic_string()}};
}

namespace {

// Options for the feature source shared by train/evaluate/cv/importance/embed.
struct FeatureSource {
  std::string features;  // CSV written by extract
  std::string manifest;  // or extract on the fly
};

struct Context {
  RunConfig cfg;
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
};

json provenance(const Context& ctx, std::string_view command, const std::vector<fs::path>& inputs,
                json extra = json::object()) {
  json digests = json::object();
  for (const auto& p : inputs) {
    if (!p.empty() && fs::is_regular_file(p)) digests[p.generic_string()] = sha256_file(p);
  }
  json j = {{"tool", kToolVersion},
            {"command", command},
            {"argv", ctx.argv},
            {"config", to_json(ctx.cfg)},
            {"inputs", std::move(digests)}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

void write_with_provenance(const fs::path& path, const std::string& text, const json& prov) {
  write_file_atomic(path, text);
  write_file_atomic(fs::path(path.string() + ".provenance.json"), prov.dump(2) + "\n");
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

MfccConfig mfcc_from_run(const RunConfig& cfg) {
  MfccConfig m;
  m.n_mfcc = cfg.n_mfcc;
  m.stats = cfg.stats;
  return m;
}

// Recovers the extraction settings of a feature CSV: from its provenance
// sidecar when present, else from the column names.
MfccConfig mfcc_of_csv(const fs::path& csv, const FeatureMatrix& fm) {
  const fs::path sidecar = csv.string() + ".provenance.json";
  if (fs::is_regular_file(sidecar)) {
    const json j = json::parse(read_file_text(sidecar), nullptr, false);
    if (j.is_object() && j.contains("mfcc_config")) return mfcc_config_from_json(j["mfcc_config"]);
  }
  MfccConfig m;
  std::size_t mean_cols = 0, std_cols = 0;
  for (const auto& name : fm.column_names) {
    if (name.rfind("mfcc_mean_", 0) == 0) ++mean_cols;
    if (name.rfind("mfcc_std_", 0) == 0) ++std_cols;
  }
  if (mean_cols == 0 || (std_cols != 0 && std_cols != mean_cols) || mean_cols + std_cols != fm.cols()) {
    throw Error(ErrorCode::SchemaViolation, csv.string() + ": columns are not mfcc_mean_*/mfcc_std_* blocks");
  }
  m.n_mfcc = static_cast<int>(mean_cols);
  m.stats = std_cols ? Stats::MeanStd : Stats::Mean;
  return m;
}

struct LoadedFeatures {
  FeatureMatrix fm;
  MfccConfig mfcc;
  fs::path input;
};

LoadedFeatures load_features(const Context& ctx, const FeatureSource& src, int n_mfcc) {
  if (src.features.empty() == src.manifest.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --features or --manifest");
  }
  LoadedFeatures lf;
  if (!src.features.empty()) {
    lf.input = src.features;
    lf.fm = read_feature_csv(lf.input);
    lf.mfcc = mfcc_of_csv(lf.input, lf.fm);
    if (n_mfcc > 0 && n_mfcc != lf.mfcc.n_mfcc) {
      lf.fm = lf.fm.truncate(n_mfcc);
      lf.mfcc.n_mfcc = n_mfcc;
    }
    return lf;
  }
  lf.input = src.manifest;
  const auto manifest = load_manifest(lf.input);
  const auto instances = load_instances(manifest, ctx.cfg.sample_rate);
  lf.mfcc = mfcc_from_run(ctx.cfg);
  if (n_mfcc > 0) lf.mfcc.n_mfcc = n_mfcc;
  lf.fm = build_feature_matrix(instances, lf.mfcc);
  return lf;
}

void check_family_width(const FeatureMatrix& fm) {
  if (fm.rows() == 0) throw Error(ErrorCode::DegenerateData, "no feature rows");
}

// ---- subcommands ------------------------------------------------------------

struct SynthOpts {
  int clips = 5;
  double duration = 5.0;
};

int cmd_synth(Context& ctx, const SynthOpts& o) {
  SynthSpec spec;
  spec.clips_per_class = o.clips;
  spec.clip_duration = o.duration;
  spec.seed = ctx.cfg.seed;
  spec.sample_rate = ctx.cfg.sample_rate;
  spec.window_seconds = ctx.cfg.window_seconds;
  auto manifest = synth_generate(spec, ctx.cfg.out);
  manifest.provenance = provenance(ctx, "synth", {}, {{"clips_per_class", o.clips}, {"clip_duration", o.duration}});
  const fs::path path = ctx.cfg.out / "clips.json";
  save_manifest(manifest, path);
  ctx.out << path.generic_string() << "\n";
  return kExitOk;
}

struct SegmentOpts {
  std::string manifest;
  std::string input_dir;
};

int cmd_segment(Context& ctx, const SegmentOpts& o) {
  if (o.manifest.empty() == o.input_dir.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --manifest or --input-dir");
  }
  const DatasetManifest clips = o.manifest.empty() ? manifest_from_directory(o.input_dir) : load_manifest(o.manifest);
  auto segmented = segment_manifest(clips, ctx.cfg.window_seconds, ctx.cfg.sample_rate, ctx.cfg.out / "instances");
  if (ctx.cfg.per_class > 0) {
    auto sampled = sample_instances(segmented, ctx.cfg.per_class, ctx.cfg.seed);
    for (const auto& w : sampled.warnings) ctx.err << "warning: " << w << "\n";
    segmented = std::move(sampled.manifest);
  }
  segmented.provenance = provenance(ctx, "segment", {o.manifest});
  const fs::path path = ctx.cfg.out / "dataset.json";
  save_manifest(segmented, path);
  ctx.out << path.generic_string() << " (" << segmented.instance_count() << " instances)\n";
  return kExitOk;
}

struct ExtractOpts {
  std::string manifest;
  std::string output;
};

int cmd_extract(Context& ctx, const ExtractOpts& o) {
  const auto manifest = load_manifest(o.manifest);
  const auto instances = load_instances(manifest, ctx.cfg.sample_rate);
  const MfccConfig mfcc = mfcc_from_run(ctx.cfg);
  const auto fm = build_feature_matrix(instances, mfcc);
  const fs::path path = o.output.empty() ? ctx.cfg.out / "features.csv" : fs::path(o.output);
  write_feature_csv(fm, path);
  write_file_atomic(fs::path(path.string() + ".provenance.json"),
                    provenance(ctx, "extract", {o.manifest}, {{"mfcc_config", to_json(mfcc)}}).dump(2) + "\n");
  ctx.out << path.generic_string() << " (" << fm.rows() << " rows, " << fm.cols() + 3 << " columns)\n";
  return kExitOk;
}

struct AugmentOpts {
  std::string manifest;
  std::vector<double> speed{0.9, 1.1};
  std::vector<double> pitch{0.9, 1.1};
};

int cmd_augment(Context& ctx, const AugmentOpts& o) {
  const auto manifest = load_manifest(o.manifest);
  AugmentSpec spec;
  spec.speed_factors = o.speed;
  spec.pitch_factors = o.pitch;
  spec.seed = ctx.cfg.seed;
  auto augmented = augment_dataset(manifest, spec, ctx.cfg.sample_rate, ctx.cfg.out / "augmented");
  augmented.provenance =
      provenance(ctx, "augment", {o.manifest}, {{"speed_factors", o.speed}, {"pitch_factors", o.pitch}});
  const fs::path path = ctx.cfg.out / "dataset_augmented.json";
  save_manifest(augmented, path);
  ctx.out << path.generic_string() << " (" << augmented.instance_count() << " instances)\n";
  return kExitOk;
}

double parse_split(const std::string& text) {
  if (text == "none") return 0.0;
  const auto dash = text.find('-');
  if (dash == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--split expects TRAIN-TEST, e.g. 80-20");
  const double a = std::stod(text.substr(0, dash));
  const double b = std::stod(text.substr(dash + 1));
  if (!(a > 0 && b > 0)) throw Error(ErrorCode::InvalidArgument, "--split parts must be positive");
  return b / (a + b);
}

struct TrainOpts {
  FeatureSource src;
  std::string model = "random_forest";
  std::string split = "80-20";
  std::string output;
  int n_mfcc = 0;
  int knn_k = 5;
  int n_estimators = 100;
};

ModelParams params_for(const Context& ctx, int knn_k, int n_estimators) {
  ModelParams p;
  p.set_seed(ctx.cfg.seed);
  p.knn_k = knn_k;
  p.forest.n_estimators = n_estimators;
  return p;
}

int cmd_train(Context& ctx, const TrainOpts& o) {
  const Family family = parse_family(o.model);
  auto lf = load_features(ctx, o.src, o.n_mfcc);
  check_family_width(lf.fm);
  const double fraction = parse_split(o.split);

  std::vector<std::size_t> train_rows, test_rows;
  if (fraction > 0.0) {
    const auto split = random_split(lf.fm.rows(), fraction, ctx.cfg.seed);
    train_rows = split.train;
    test_rows = split.test;
  } else {
    train_rows.resize(lf.fm.rows());
    for (std::size_t i = 0; i < train_rows.size(); ++i) train_rows[i] = i;
  }
  const FeatureMatrix train = lf.fm.select(train_rows);

  ModelArtifact art;
  art.labels = encode_labels(lf.fm.labels);
  art.mfcc = lf.mfcc;
  art.standardizer = fit_standardizer(train.values);
  const auto y_train = art.labels.encode_all(train.labels);
  art.payload = train_model(family, apply_standardizer(*art.standardizer, train.values), y_train,
                            static_cast<int>(art.labels.size()), params_for(ctx, o.knn_k, o.n_estimators));
  art.provenance = provenance(ctx, "train", {lf.input},
                              {{"model", to_string(family)}, {"split", o.split}, {"mfcc_config", to_json(lf.mfcc)}});
  if (const auto* svm = std::get_if<SvmModel>(&art.payload); svm && !svm->converged()) {
    ctx.err << "warning: " << to_string(ErrorCode::NonConvergence) << ": SVM hit its iteration cap\n";
  }

  const fs::path path = o.output.empty() ? ctx.cfg.out / ("model_" + std::string(to_string(family)) + ".json")
                                         : fs::path(o.output);
  save_model(art, path);
  ctx.out << path.generic_string() << "\n";

  if (!test_rows.empty()) {
    const FeatureMatrix test = lf.fm.select(test_rows);
    const auto pred = art.predict_all(test.values);
    const auto report = evaluate(pred, art.labels.encode_all(test.labels), art.labels);
    const std::string text = std::string(display_name(family)) + " (" + o.split + " split, seed " +
                             std::to_string(ctx.cfg.seed) + ")\n\n" + format_report(report);
    ctx.out << "\n" << text;
    const fs::path stem = path.parent_path() / path.stem();
    write_file_atomic(fs::path(stem.string() + "_report.txt"), text);
    json rj = to_json(report);
    rj["provenance"] = art.provenance;
    write_json(fs::path(stem.string() + "_report.json"), rj);
  }
  return kExitOk;
}

struct EvaluateOpts {
  FeatureSource src;
  std::string model;
};

int cmd_evaluate(Context& ctx, const EvaluateOpts& o) {
  const auto art = load_model(o.model);
  RunConfig saved = ctx.cfg;
  ctx.cfg.n_mfcc = art.mfcc.n_mfcc;
  ctx.cfg.stats = art.mfcc.stats;
  auto lf = load_features(ctx, o.src, art.mfcc.n_mfcc);
  ctx.cfg = saved;
  std::vector<int> truth;
  for (const auto& label : lf.fm.labels) {
    if (!art.labels.contains(label)) throw Error(ErrorCode::SchemaViolation, "label '" + label + "' unknown to the model");
    truth.push_back(art.labels.encode(label));
  }
  const auto pred = art.predict_all(lf.fm.values);
  const auto report = evaluate(pred, truth, art.labels);
  const std::string text = format_report(report);
  ctx.out << text;
  write_file_atomic(ctx.cfg.out / "evaluation.txt", text);
  json rj = to_json(report);
  rj["provenance"] = provenance(ctx, "evaluate", {o.model, lf.input}, {{"model", to_string(art.family())}});
  write_json(ctx.cfg.out / "evaluation.json", rj);
  return kExitOk;
}

struct CvOpts {
  FeatureSource src;
  std::string models = "all";
  std::vector<int> sweep;
  std::string train_pool = "both";
  bool svg = false;
  int knn_k = 5;
  int n_estimators = 100;
};

std::vector<int> unique_groups(const FeatureMatrix& fm) {
  std::set<int> s(fm.groups.begin(), fm.groups.end());
  return {s.begin(), s.end()};
}

int cmd_cv(Context& ctx, const CvOpts& o) {
  const auto families = parse_families(o.models);
  ctx.cfg.families = families;
  std::vector<int> sweep = o.sweep.empty() ? std::vector<int>{ctx.cfg.n_mfcc} : o.sweep;
  for (int n : sweep) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "MFCC counts must be positive");
  }
  const int widest = *std::max_element(sweep.begin(), sweep.end());
  // The first k coefficients do not depend on how many are kept, so one
  // extraction at the widest count serves the whole sweep.
  auto lf = load_features(ctx, o.src, o.src.features.empty() ? widest : 0);
  check_family_width(lf.fm);
  const LocvPlan plan = build_locv_plan(unique_groups(lf.fm));

  ComparisonOptions opts;
  opts.params = params_for(ctx, o.knn_k, o.n_estimators);
  opts.pool = parse_train_pool(o.train_pool);

  const fs::path dir = ctx.cfg.out / "cv";
  std::vector<SweepResult> results;
  std::size_t failed = 0;
  for (int n : sweep) {
    const FeatureMatrix fm = n == lf.mfcc.n_mfcc ? lf.fm : lf.fm.truncate(n);
    SweepResult res{n, run_comparison(fm, families, plan, opts)};
    MfccConfig mfcc = lf.mfcc;
    mfcc.n_mfcc = n;
    const json prov = provenance(ctx, "cv", {lf.input},
                                 {{"mfcc_config", to_json(mfcc)},
                                  {"train_pool", o.train_pool},
                                  {"protocol", "leave-one-clip-out"}});
    const std::string tag = "mfcc" + std::to_string(n);
    write_with_provenance(dir / ("comparison_" + tag + ".csv"), comparison_csv(res.table), prov);

    for (const auto& cell : res.table.cells) {
      const std::string name = std::string(to_string(cell.family)) + "_cond" + std::to_string(cell.condition_id);
      const fs::path base = dir / "reports" / tag / name;
      if (cell.ok) {
        const std::string header = std::string(display_name(cell.family)) + ", condition " +
                                   std::to_string(cell.condition_id) + " (test clip " + std::to_string(cell.test_clip) +
                                   ")\n\n";
        write_file_atomic(fs::path(base.string() + ".txt"), header + format_report(cell.report));
        json rj = to_json(cell.report);
        rj["condition"] = cell.condition_id;
        rj["test_clip"] = cell.test_clip;
        rj["converged"] = cell.converged;
        rj["provenance"] = prov;
        write_json(fs::path(base.string() + ".json"), rj);
      } else {
        ++failed;
        ctx.err << "warning: " << name << " (" << tag << ") failed: " << cell.error << "\n";
      }
    }

    ctx.out << "n_mfcc = " << n << "\n";
    for (Family f : families) {
      ctx.out << "  " << to_string(f) << ":";
      for (const auto& cond : plan.conditions) {
        const auto& cell = res.table.cell(f, cond.condition_id);
        ctx.out << " " << (cell.ok ? format_double(std::round(cell.accuracy * 1e4) / 1e4) : std::string("failed"));
      }
      ctx.out << "  avg " << format_double(std::round(res.table.average(f) * 1e4) / 1e4) << "\n";
    }
    results.push_back(std::move(res));
  }

  const json prov = provenance(ctx, "cv", {lf.input}, {{"mfcc_sweep", sweep}, {"train_pool", o.train_pool}});
  write_with_provenance(dir / "boxplot.csv", boxplot_csv(results), prov);
  write_with_provenance(dir / "bar.csv", bar_csv(results), prov);
  if (o.svg) {
    write_file_atomic(dir / "boxplot.svg", boxplot_svg(results));
    write_file_atomic(dir / "bar.svg", bar_svg(results));
  }
  if (failed > 0) ctx.err << failed << " cell(s) failed; see the comparison CSVs\n";
  ctx.out << dir.generic_string() << "\n";
  return kExitOk;
}

struct ImportanceOpts {
  std::string model;
  FeatureSource src;
  int n_estimators = 100;
};

int cmd_importance(Context& ctx, const ImportanceOpts& o) {
  RandomForest forest;
  std::vector<std::string> names;
  std::vector<fs::path> inputs;
  MfccConfig mfcc;
  if (!o.model.empty()) {
    const auto art = load_model(o.model);
    const auto* f = std::get_if<RandomForest>(&art.payload);
    if (f == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "importance needs a random_forest model, got " +
                                                  std::string(to_string(art.family())));
    }
    forest = *f;
    mfcc = art.mfcc;
    names = feature_column_names(mfcc.n_mfcc, mfcc.stats);
    inputs.push_back(o.model);
  } else {
    auto lf = load_features(ctx, o.src, 0);
    check_family_width(lf.fm);
    const auto enc = encode_labels(lf.fm.labels);
    ForestParams fp;
    fp.base_seed = ctx.cfg.seed;
    fp.n_estimators = o.n_estimators;
    const auto scaler = fit_standardizer(lf.fm.values);
    forest = train_random_forest(apply_standardizer(scaler, lf.fm.values), enc.encode_all(lf.fm.labels),
                                 static_cast<int>(enc.size()), fp);
    names = lf.fm.column_names;
    mfcc = lf.mfcc;
    inputs.push_back(lf.input);
  }
  const auto rep = feature_importance(forest);
  json cumulative = json::array();
  for (const auto& [k, v] : rep.cumulative) cumulative.push_back({{"top_k", k}, {"cumulative", v}});
  const json prov = provenance(ctx, "importance", inputs,
                               {{"mfcc_config", to_json(mfcc)}, {"cumulative", cumulative},
                                {"uniform_fallback", rep.uniform_fallback}});
  const fs::path path = ctx.cfg.out / "importance.csv";
  write_with_provenance(path, importance_csv(rep, names), prov);
  if (rep.uniform_fallback) ctx.err << "warning: the forest made no splits; importances are uniform\n";
  for (const auto& [k, v] : rep.cumulative) ctx.out << "top " << k << ": " << format_double(v) << "\n";
  ctx.out << path.generic_string() << "\n";
  return kExitOk;
}

struct EmbedOpts {
  FeatureSource src;
  bool standardize = true;
};

int cmd_embed(Context& ctx, const EmbedOpts& o) {
  auto lf = load_features(ctx, o.src, 0);
  check_family_width(lf.fm);
  const Matrix x = o.standardize ? apply_standardizer(fit_standardizer(lf.fm.values), lf.fm.values) : lf.fm.values;
  const auto e = embed_2d(x);
  const fs::path path = ctx.cfg.out / "embedding_pca2.csv";
  write_with_provenance(path, embedding_csv(lf.fm, e),
                        provenance(ctx, "embed", {lf.input},
                                   {{"method", "pca2"},
                                    {"standardized", o.standardize},
                                    {"explained_variance", e.explained_variance},
                                    {"total_variance", e.total_variance},
                                    {"mfcc_config", to_json(lf.mfcc)}}));
  ctx.out << path.generic_string() << "\n";
  return kExitOk;
}

void add_source(CLI::App* sub, FeatureSource& src) {
  sub->add_option("--features", src.features, "Feature CSV written by extract");
  sub->add_option("--manifest", src.manifest, "Dataset manifest (features are extracted on the fly)");
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Context ctx{RunConfig{}, std::vector<std::string>(args.begin(), args.end()), out, err};
  RunConfig& cfg = ctx.cfg;

  CLI::App app{"Insect sound classification pipeline: synthesis, segmentation, MFCC features, "
               "augmentation, classifiers and leave-one-clip-out evaluation.",
               "chitin"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string out_dir = cfg.out.string();
  std::string stats = "mean";
  app.add_option("--seed", cfg.seed, "Base seed for every stochastic step")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--sample-rate", cfg.sample_rate, "Working sample rate in Hz")->capture_default_str();
  app.add_option("--window", cfg.window_seconds, "Instance length in seconds")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate the synthetic four-class fixture");
  SynthOpts synth_o;
  synth->add_option("--clips", synth_o.clips, "Clips per class")->capture_default_str();
  synth->add_option("--duration", synth_o.duration, "Clip length in seconds")->capture_default_str();

  auto* segment = app.add_subcommand("segment", "Cut clips into fixed-length instances");
  SegmentOpts segment_o;
  segment->add_option("--manifest", segment_o.manifest, "Clip manifest (e.g. from synth)");
  segment->add_option("--input-dir", segment_o.input_dir, "Directory laid out as <class>/<clip>.wav");
  segment->add_option("--per-class", cfg.per_class, "Instances sampled per class (0 = all)")->capture_default_str();

  auto* extract = app.add_subcommand("extract", "Compute MFCC summary features");
  ExtractOpts extract_o;
  extract->add_option("--manifest", extract_o.manifest, "Dataset manifest")->required();
  extract->add_option("--output", extract_o.output, "Feature CSV path (default <out>/features.csv)");
  extract->add_option("--n-mfcc", cfg.n_mfcc, "Coefficients per frame")->capture_default_str();
  extract->add_option("--stats", stats, "mean or mean,std")->capture_default_str();

  auto* augment = app.add_subcommand("augment", "Add speed- and pitch-changed copies of every instance");
  AugmentOpts augment_o;
  augment->add_option("--manifest", augment_o.manifest, "Dataset manifest")->required();
  augment->add_option("--speed", augment_o.speed, "Speed factors")->delimiter(',')->capture_default_str();
  augment->add_option("--pitch", augment_o.pitch, "Pitch factors")->delimiter(',')->capture_default_str();

  auto* train = app.add_subcommand("train", "Train one classifier and report on a held-out split");
  TrainOpts train_o;
  add_source(train, train_o.src);
  train->add_option("--model", train_o.model, "decision_tree, random_forest, xgboost, knn or svm_rbf")
      ->capture_default_str();
  train->add_option("--split", train_o.split, "TRAIN-TEST percentages or 'none'")->capture_default_str();
  train->add_option("--output", train_o.output, "Model file path");
  train->add_option("--n-mfcc", train_o.n_mfcc, "Keep only the first N coefficients (manifest input: extract N)");
  train->add_option("--stats", stats, "mean or mean,std (manifest input)")->capture_default_str();
  train->add_option("--k", train_o.knn_k, "Neighbours for knn")->capture_default_str();
  train->add_option("--trees", train_o.n_estimators, "Trees for random_forest")->capture_default_str();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved model on a feature set");
  EvaluateOpts evaluate_o;
  evaluate_cmd->add_option("--model", evaluate_o.model, "Model file")->required();
  add_source(evaluate_cmd, evaluate_o.src);

  auto* cv = app.add_subcommand("cv", "Leave-one-clip-out comparison of model families");
  CvOpts cv_o;
  add_source(cv, cv_o.src);
  cv->add_option("--models", cv_o.models, "'all' or a comma-separated list of families")->capture_default_str();
  cv->add_option("--n-mfcc,--mfcc", cfg.n_mfcc, "Coefficients when no sweep is given")->capture_default_str();
  cv->add_option("--mfcc-sweep", cv_o.sweep, "Comma-separated coefficient counts")->delimiter(',');
  cv->add_option("--stats", stats, "mean or mean,std (manifest input)")->capture_default_str();
  cv->add_option("--train-pool", cv_o.train_pool, "original, augmented or both")->capture_default_str();
  cv->add_option("--k", cv_o.knn_k, "Neighbours for knn")->capture_default_str();
  cv->add_option("--trees", cv_o.n_estimators, "Trees for random_forest")->capture_default_str();
  cv->add_flag("--svg", cv_o.svg, "Also render boxplot.svg and bar.svg");

  auto* importance = app.add_subcommand("importance", "Random-forest feature importances");
  ImportanceOpts importance_o;
  importance->add_option("--model", importance_o.model, "Saved random_forest model");
  add_source(importance, importance_o.src);
  importance->add_option("--trees", importance_o.n_estimators, "Trees when training from features")
      ->capture_default_str();

  auto* embed = app.add_subcommand("embed", "Two-dimensional PCA embedding (pca2)");
  EmbedOpts embed_o;
  add_source(embed, embed_o.src);
  embed->add_option("--standardize", embed_o.standardize, "z-score columns first")->capture_default_str();

  std::vector<const char*> argv{"chitin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    cfg.out = out_dir;
    cfg.stats = parse_stats(stats);
    if (!(cfg.sample_rate > 0.0) || !(cfg.window_seconds > 0.0) || cfg.n_mfcc < 1) {
      throw Error(ErrorCode::InvalidConfig, "sample rate, window and n_mfcc must be positive");
    }
    if (*synth) return cmd_synth(ctx, synth_o);
    if (*segment) return cmd_segment(ctx, segment_o);
    if (*extract) return cmd_extract(ctx, extract_o);
    if (*augment) return cmd_augment(ctx, augment_o);
    if (*train) return cmd_train(ctx, train_o);
    if (*evaluate_cmd) return cmd_evaluate(ctx, evaluate_o);
    if (*cv) return cmd_cv(ctx, cv_o);
    if (*importance) return cmd_importance(ctx, importance_o);
    if (*embed) return cmd_embed(ctx, embed_o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace chitin
