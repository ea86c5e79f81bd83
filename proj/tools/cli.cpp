// Copyright 2026 The pzsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pzsc/analysis.hpp"
#include "pzsc/bundle.hpp"
#include "pzsc/container.hpp"
#include "pzsc/core_model.hpp"
#include "pzsc/error.hpp"
#include "pzsc/evaluation.hpp"
#include "pzsc/model_io.hpp"
#include "pzsc/split.hpp"
#include "pzsc/synthetic.hpp"
#include "pzsc/text_featurizer.hpp"
#include "pzsc/trainer.hpp"
#include "run_config.hpp"

namespace pzsc::cli {

namespace fs = std::filesystem;

namespace {

// Flags shared by every subcommand. Unset flags leave the config alone.
struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  std::map<std::string, std::string> paths;
};

struct Run {
  Json config;
  std::string hash;
  fs::path out;
  int threads = 1;

  std::string path(const char* key) const { return config_path(config, key); }
  std::string require_path(const char* key, const char* flag) const {
    std::string p = path(key);
    if (p.empty()) throw InputError(std::string("missing --") + flag);
    return p;
  }
  std::string file(const std::string& name) const { return (out / name).string(); }
};

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void append_log(const fs::path& out, const std::string& line) {
  std::ofstream log(out / "run.log", std::ios::app);
  log << now_utc() << ' ' << line << '\n';
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// ---- text directories -------------------------------------------------------

struct TextSource {
  TfIdfMatrix text;
  std::optional<FeaturizerConfig> featurizer;
  std::optional<Vector> idf;
};

void save_text_dir(const fs::path& dir, const TfIdfMatrix& text, const Vector& idf,
                   const FeaturizerConfig& featurizer) {
  save_matrix((dir / "text.pmtx").string(), text.values);
  save_lines((dir / "vocab.txt").string(), text.vocab);
  save_lines((dir / "classes.txt").string(), text.class_ids);
  save_matrix((dir / "idf.pmtx").string(), idf);
  save_text((dir / "featurizer.json").string(), dump(to_json(featurizer)));
}

TextSource load_text_dir(const fs::path& dir) {
  TextSource src;
  src.text.values = load_matrix((dir / "text.pmtx").string());
  src.text.vocab = load_lines((dir / "vocab.txt").string());
  src.text.class_ids = load_lines((dir / "classes.txt").string());
  src.text.validate();
  if (fs::exists(dir / "featurizer.json") && fs::exists(dir / "idf.pmtx")) {
    src.featurizer = featurizer_from_json(Json::parse(load_text((dir / "featurizer.json").string())));
    const Matrix idf = load_matrix((dir / "idf.pmtx").string());
    if (idf.cols() != 1 || idf.rows() != src.text.num_terms()) {
      throw IoError(IoErrorKind::kDimensionMismatch,
                    (dir / "idf.pmtx").string() + " does not match vocab.txt");
    }
    src.idf = idf.col(0);
  }
  return src;
}

StopwordSet stopwords_for(const Run& run) {
  const std::string p = run.path("stopwords");
  return p.empty() ? default_stopwords() : load_stopwords(p);
}

// Columns of `text` for `classes`, in that order.
Matrix columns_of(const TfIdfMatrix& text, const std::vector<std::string>& classes) {
  Matrix out(text.num_terms(), static_cast<Index>(classes.size()));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    out.col(static_cast<Index>(k)) = text.values.col(text.class_index(classes[k]));
  }
  return out;
}

// Position of every sample's class within `classes`.
std::vector<Index> remap_labels(const DatasetBundle& bundle, const std::vector<Index>& samples,
                                const std::vector<std::string>& classes) {
  std::map<std::string, Index> pos;
  for (std::size_t k = 0; k < classes.size(); ++k) pos[classes[k]] = static_cast<Index>(k);
  const auto all = bundle.labels.indices();
  std::vector<Index> out;
  for (Index n : samples) {
    const auto& id = bundle.labels.class_ids[static_cast<std::size_t>(all[static_cast<std::size_t>(n)])];
    out.push_back(pos.at(id));
  }
  return out;
}

void check_split_classes(const DatasetBundle& bundle, const SplitSpec& split) {
  for (const auto* group : {&split.seen, &split.unseen}) {
    for (const auto& c : *group) {
      if (std::find(bundle.class_ids.begin(), bundle.class_ids.end(), c) == bundle.class_ids.end()) {
        throw InputError("split class '" + c + "' is not in the bundle");
      }
    }
  }
}

// Class text in the model's vocabulary: a --text directory, else the bundle
// corpus run through the model's featurizer, else the bundle's own text.
TfIdfMatrix text_for_model(const Run& run, const DatasetBundle* bundle,
                           const SavedModel& model) {
  const std::string dir = run.path("text");
  if (!dir.empty()) {
    TextSource src = load_text_dir(dir);
    if (src.text.vocab != model.params.vocab) {
      throw InputError("vocabulary in " + dir + " does not match the model");
    }
    return std::move(src.text);
  }
  if (bundle != nullptr && bundle->corpus && model.featurizer && model.idf) {
    // Stopwords never made it into the vocabulary, so dropping them again
    // changes nothing.
    return transform(bundle->corpus->documents, model.vocabulary(), *model.featurizer, {});
  }
  if (bundle != nullptr && bundle->text && bundle->text->vocab == model.params.vocab) {
    return *bundle->text;
  }
  throw InputError("no class text in the model's vocabulary; pass --text");
}

Matrix sample_latent(const ModelParams& model, const PartFeatureSet& features) {
  if (features.num_parts() != model.num_parts() || features.part_dim() != model.part_dim()) {
    throw InputError("bundle features do not match the model's parts");
  }
  Matrix out = Matrix::Zero(model.latent_dim(), features.num_samples());
  for (Index p = 0; p < model.num_parts(); ++p) {
    out.noalias() += model.wx[static_cast<std::size_t>(p)] *
                     features.features[static_cast<std::size_t>(p)];
  }
  return out;
}

Matrix scores_for(const Run& run, const ModelParams& model, const PartFeatureSet& features,
                  const Matrix& text) {
  if (text.rows() != model.num_terms()) throw InputError("class text has the wrong vocabulary size");
  return parallel_scores(sample_latent(model, features), model.wt * text, run.threads);
}

// ---- subcommands ------------------------------------------------------------

int cmd_featurize(const Run& run) {
  TextCorpus corpus = load_corpus(run.require_path("corpus", "corpus"));
  corpus.stopwords = stopwords_for(run);
  const FeaturizerConfig config = featurizer_from_config(run.config);
  const std::string split_path = run.path("split");
  if (split_path.empty()) {
    const TfIdfFit f = fit(corpus, config);
    save_text_dir(run.out, f.matrix, f.vocabulary.idf(), config);
  } else {
    const SplitSpec split = load_split(split_path);
    const TfIdfFit f = fit(corpus.subset(split.seen), config);
    const TfIdfMatrix all = transform(corpus.documents, f.vocabulary, config, corpus.stopwords);
    save_text_dir(run.out, all, f.vocabulary.idf(), config);
  }
  return kExitOk;
}

int cmd_split(const Run& run) {
  const DatasetBundle bundle = load_bundle(run.require_path("bundle", "bundle"));
  const Json& s = run.config.at("split");
  const SplitSpec split = make_split(bundle.hierarchy, parse_split_mode(s.at("mode").get<std::string>()),
                                     s.at("fraction").get<double>(),
                                     run.config.at("seed").get<std::uint64_t>());
  save_split(run.file("split.json"), split);
  return kExitOk;
}

int cmd_synth(const Run& run) {
  const SyntheticData data = generate_synthetic(synthetic_from_config(run.config));
  save_bundle(data.bundle, run.out.string());
  save_text(run.file("truth.json"), dump(to_json(data.truth)));
  return kExitOk;
}

int cmd_train(const Run& run) {
  const DatasetBundle bundle = load_bundle(run.require_path("bundle", "bundle"));
  const SplitSpec split = load_split(run.require_path("split", "split"));
  check_split_classes(bundle, split);

  TextSource src;
  const std::string text_dir = run.path("text");
  if (!text_dir.empty()) {
    src = load_text_dir(text_dir);
  } else if (bundle.corpus) {
    TextCorpus corpus = *bundle.corpus;
    corpus.stopwords = stopwords_for(run);
    const FeaturizerConfig config = featurizer_from_config(run.config);
    const TfIdfFit f = fit(corpus.subset(split.seen), config);
    src.text = transform(corpus.documents, f.vocabulary, config, corpus.stopwords);
    src.featurizer = config;
    src.idf = f.vocabulary.idf();
  } else if (bundle.text) {
    src.text = *bundle.text;
  } else {
    throw InputError("bundle has neither text nor corpus; pass --text");
  }

  const auto samples = bundle.samples_of(split.seen, true, false);
  if (samples.empty()) throw InputError("no training samples for the seen classes");
  TrainingProblem problem;
  problem.text = columns_of(src.text, split.seen);
  problem.features = bundle.features.select(samples);
  problem.labels = LabelMatrix::from_indices(remap_labels(bundle, samples, split.seen), split.seen).values;

  SavedModel saved;
  saved.hyper = hyper_from_config(run.config);
  saved.featurizer = src.featurizer;
  saved.idf = src.idf;
  saved.provenance = {{"config_hash", run.hash},
                      {"split_mode", to_string(split.mode)},
                      {"split_seed", split.seed},
                      {"seen_classes", split.seen},
                      {"train_samples", samples.size()}};

  FitOptions options;
  options.lbfgs = lbfgs_from_config(run.config);
  options.block_part_solves = run.config.at("train").at("block_part_solves").get<bool>();
  options.checkpoint_every = run.config.at("train").at("checkpoint_every").get<int>();
  if (options.checkpoint_every < 0) throw InputError("train.checkpoint_every must be >= 0");
  options.on_checkpoint = [&](int iter, const ModelParams& params) {
    char name[32];
    std::snprintf(name, sizeof name, "iter_%04d", iter);
    SavedModel ck = saved;
    ck.params = params;
    save_model(ck, (run.out / "checkpoints" / name).string());
  };
  std::ofstream trace(run.out / "trace.jsonl", std::ios::trunc);
  options.on_record = [&](const TraceRecord& r) {
    // wall time stays out so reruns match byte for byte
    const Json line = {{"iter", r.iter},
                       {"phase", to_string(r.phase)},
                       {"objective", r.objective.total},
                       {"data_term", r.objective.data_term},
                       {"variance_term", r.objective.variance_term},
                       {"group_term", r.objective.group_term},
                       {"group_sparsity", r.group_sparsity},
                       {"inner_iterations", r.inner_iterations},
                       {"inner_converged", r.inner_converged}};
    trace << line.dump() << '\n' << std::flush;
  };

  try {
    saved.params = fit(problem, saved.hyper, options, bundle.features.parts, src.text.vocab).params;
  } catch (const TrainingError& e) {
    SavedModel last = saved;
    last.params = e.last_good();
    save_model(last, (run.out / "last_good").string());
    throw;
  }
  save_model(saved, run.out.string());
  return kExitOk;
}

int cmd_predict(const Run& run) {
  const SavedModel model = load_model(run.require_path("model", "model"));
  const DatasetBundle bundle = load_bundle(run.require_path("bundle", "bundle"));
  const TfIdfMatrix text = text_for_model(run, &bundle, model);
  const Matrix scores = scores_for(run, model.params, bundle.features, text.values);
  save_matrix(run.file("scores.pmtx"), scores);
  save_lines(run.file("classes.txt"), text.class_ids);
  const auto truth = bundle.labels.indices();
  std::ostringstream tsv;
  tsv << "sample_id\tpredicted\ttrue\n";
  for (Index n = 0; n < scores.rows(); ++n) {
    const Vector row = scores.row(n).transpose();
    tsv << bundle.features.sample_ids[static_cast<std::size_t>(n)] << '\t'
        << text.class_ids[static_cast<std::size_t>(argmax_lowest(row))] << '\t'
        << bundle.labels.class_ids[static_cast<std::size_t>(truth[static_cast<std::size_t>(n)])]
        << '\n';
  }
  save_text(run.file("predictions.tsv"), tsv.str());
  return kExitOk;
}

Json per_class_report(const ScoreTable& table, const std::vector<std::string>& classes) {
  std::vector<Index> hits(classes.size(), 0), counts(classes.size(), 0);
  for (Index n = 0; n < table.num_samples(); ++n) {
    const auto k = static_cast<std::size_t>(table.labels[static_cast<std::size_t>(n)]);
    const Vector row = table.scores.row(n).transpose();
    ++counts[k];
    hits[k] += argmax_lowest(row) == table.labels[static_cast<std::size_t>(n)];
  }
  Json out = Json::array();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (counts[k] == 0) continue;
    out.push_back({{"class", classes[k]},
                   {"samples", counts[k]},
                   {"accuracy", static_cast<double>(hits[k]) / static_cast<double>(counts[k])}});
  }
  return out;
}

int cmd_eval(const Run& run) {
  const SavedModel model = load_model(run.require_path("model", "model"));
  const DatasetBundle bundle = load_bundle(run.require_path("bundle", "bundle"));
  const SplitSpec split = load_split(run.require_path("split", "split"));
  check_split_classes(bundle, split);
  if (split.unseen.empty()) throw InputError("split has no unseen classes");
  const TfIdfMatrix text = text_for_model(run, &bundle, model);
  const std::string mode = run.config.at("eval").at("mode").get<std::string>();
  const bool per_class = run.config.at("eval").at("per_class").get<bool>();

  Json report = {{"mode", mode}, {"config_hash", run.hash}, {"per_class", per_class}};
  const auto unseen_samples = bundle.samples_of(split.unseen, true, true);
  if (unseen_samples.empty()) throw InputError("no samples of unseen classes");

  if (mode == "zsl") {
    ScoreTable table;
    table.scores = scores_for(run, model.params, bundle.features.select(unseen_samples),
                              columns_of(text, split.unseen));
    table.labels = remap_labels(bundle, unseen_samples, split.unseen);
    table.seen_mask.assign(split.unseen.size(), false);
    report["classes"] = split.unseen.size();
    report["samples"] = unseen_samples.size();
    report["top1"] = top1_accuracy(table, per_class);
    report["per_class_accuracy"] = per_class_report(table, split.unseen);
  } else if (mode == "gzsl") {
    // label space: every split class in bundle order
    std::vector<std::string> classes;
    std::vector<bool> seen_mask;
    for (const auto& c : bundle.class_ids) {
      if (split.is_seen(c) || split.is_unseen(c)) {
        classes.push_back(c);
        seen_mask.push_back(split.is_seen(c));
      }
    }
    const Matrix class_text = columns_of(text, classes);
    const auto seen_samples = bundle.samples_of(split.seen, false, true);
    if (seen_samples.empty()) throw InputError("no test samples of seen classes");
    ScoreTable seen_table{scores_for(run, model.params, bundle.features.select(seen_samples), class_text),
                          remap_labels(bundle, seen_samples, classes), seen_mask};
    ScoreTable unseen_table{scores_for(run, model.params, bundle.features.select(unseen_samples), class_text),
                            remap_labels(bundle, unseen_samples, classes), seen_mask};
    const SeenUnseenCurve curve = seen_unseen_curve(seen_table, unseen_table, per_class);
    std::ostringstream csv;
    csv << "lambda,unseen_accuracy,seen_accuracy\n";
    for (const auto& p : curve.points) {
      csv << fmt(p.lambda) << ',' << fmt(p.unseen_accuracy) << ',' << fmt(p.seen_accuracy) << '\n';
    }
    save_text(run.file("curve.csv"), csv.str());
    const auto at_zero_seen = gzsl_predict(seen_table, 0.0);
    const auto at_zero_unseen = gzsl_predict(unseen_table, 0.0);
    report["classes"] = classes.size();
    report["seen_samples"] = seen_samples.size();
    report["unseen_samples"] = unseen_samples.size();
    report["ausuc"] = curve.ausuc;
    report["curve_points"] = curve.points.size();
    report["seen_accuracy_at_zero"] = accuracy(at_zero_seen, seen_table.labels, per_class);
    report["unseen_accuracy_at_zero"] = accuracy(at_zero_unseen, unseen_table.labels, per_class);
  } else {
    throw InputError("eval mode must be zsl or gzsl, got '" + mode + "'");
  }
  save_text(run.file("report.json"), dump(report));
  return kExitOk;
}

Json ranked_json(const std::vector<RankedTerm>& terms) {
  Json out = Json::array();
  for (const auto& t : terms) out.push_back({{"term", t.term}, {"name", t.name}, {"value", t.value}});
  return out;
}

int cmd_analyze(const Run& run) {
  const SavedModel model = load_model(run.require_path("model", "model"));
  const ModelParams& params = model.params;
  const Json& a = run.config.at("analyze");
  const ConnectivityReport report = connectivity(params, a.at("top_k").get<int>());

  Json doc = {{"config_hash", run.hash}, {"k", report.k}};
  Json parts = Json::array();
  for (Index p = 0; p < params.num_parts(); ++p) {
    parts.push_back({{"name", params.part_names[static_cast<std::size_t>(p)]},
                     {"mass", report.part_mass(p)},
                     {"top_k_mass", report.top_k_mass(p)},
                     {"top_terms", ranked_json(report.top_terms[static_cast<std::size_t>(p)])}});
  }
  doc["parts"] = parts;
  save_text(run.file("connectivity.json"), dump(doc));

  std::ostringstream norms;
  norms << "part";
  for (const auto& term : params.vocab) norms << ',' << term;
  norms << '\n';
  std::ostringstream overlap;
  overlap << "part";
  for (const auto& name : params.part_names) overlap << ',' << name;
  overlap << '\n';
  for (Index p = 0; p < params.num_parts(); ++p) {
    norms << params.part_names[static_cast<std::size_t>(p)];
    for (Index i = 0; i < params.num_terms(); ++i) norms << ',' << fmt(report.norms(p, i));
    norms << '\n';
    overlap << params.part_names[static_cast<std::size_t>(p)];
    for (Index q = 0; q < params.num_parts(); ++q) overlap << ',' << fmt(report.overlap(p, q));
    overlap << '\n';
  }
  save_text(run.file("norms.csv"), norms.str());
  save_text(run.file("overlap.csv"), overlap.str());

  const std::string sample_id = a.at("sample").is_null() ? std::string() : a.at("sample").get<std::string>();
  if (sample_id.empty()) return kExitOk;

  const DatasetBundle bundle = load_bundle(run.require_path("bundle", "bundle"));
  const auto& ids = bundle.features.sample_ids;
  const auto it = std::find(ids.begin(), ids.end(), sample_id);
  if (it == ids.end()) throw InputError("sample '" + sample_id + "' is not in the bundle");
  const auto n = static_cast<Index>(it - ids.begin());
  std::string class_id = a.at("class").is_null() ? std::string() : a.at("class").get<std::string>();
  if (class_id.empty()) {
    class_id = bundle.labels.class_ids[static_cast<std::size_t>(
        bundle.labels.indices()[static_cast<std::size_t>(n)])];
  }
  const TfIdfMatrix text = text_for_model(run, &bundle, model);
  const Vector column = text.values.col(text.class_index(class_id));
  std::vector<Vector> part_vectors;
  std::vector<bool> missing;
  for (Index p = 0; p < bundle.features.num_parts(); ++p) {
    part_vectors.push_back(bundle.features.features[static_cast<std::size_t>(p)].col(n));
    missing.push_back(bundle.features.missing[static_cast<std::size_t>(p)][static_cast<std::size_t>(n)]);
  }
  const auto grounded = ground_terms(params, part_vectors, missing, column, a.at("top_n").get<int>());
  const Vector score = score_classes(params, column, part_vectors, missing);
  Json g = {{"config_hash", run.hash}, {"sample", sample_id}, {"class", class_id}, {"score", score(0)}};
  Json gp = Json::array();
  for (Index p = 0; p < params.num_parts(); ++p) {
    gp.push_back({{"name", params.part_names[static_cast<std::size_t>(p)]},
                  {"missing", static_cast<bool>(missing[static_cast<std::size_t>(p)])},
                  {"terms", ranked_json(grounded[static_cast<std::size_t>(p)])}});
  }
  g["parts"] = gp;
  save_text(run.file("grounding.json"), dump(g));
  return kExitOk;
}

// ---- driver -----------------------------------------------------------------

using Command = int (*)(const Run&);

void add_common(CLI::App* sub, CommonFlags& flags, std::initializer_list<const char*> path_keys) {
  sub->add_option("--config", flags.config, "JSON run config; flags override it");
  sub->add_option("--seed", flags.seed, "seed for every random draw");
  sub->add_option("--threads", flags.threads, "worker threads, 0 for one per core")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", flags.out, "output directory")->required();
  static const std::map<std::string, std::string> help{
      {"corpus", "class articles: a directory of <class>.txt or a JSON object"},
      {"stopwords", "stopword file, one per line (default: built-in English list)"},
      {"bundle", "dataset bundle directory or manifest.json"},
      {"split", "split.json from the split subcommand"},
      {"text", "directory written by featurize"},
      {"model", "directory written by train"}};
  for (const char* key : path_keys) {
    sub->add_option(std::string("--") + key, flags.paths[key], help.at(key));
  }
}

Json resolve_config(const CommonFlags& flags) {
  Json config = load_config(flags.config);
  if (flags.seed) config["seed"] = *flags.seed;
  if (flags.threads) config["threads"] = *flags.threads;
  for (const auto& [key, value] : flags.paths) {
    if (!value.empty()) config["paths"][key] = value;
  }
  if (config["seed"].is_number_integer() && config["seed"].get<std::int64_t>() < 0 &&
      !config["seed"].is_number_unsigned()) {
    throw InputError("seed must be nonnegative");
  }
  if (config["threads"].get<int>() < 0) throw InputError("threads must be nonnegative");
  return config;
}

int execute(const CommonFlags& flags, Json config, Command command, const std::string& name,
            const std::vector<std::string>& args) {
  Run run;
  run.config = std::move(config);
  run.hash = config_hash(run.config);
  run.out = flags.out;
  const int threads = run.config.at("threads").get<int>();
  run.threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::error_code ec;
  fs::create_directories(run.out, ec);
  if (ec) throw IoError(IoErrorKind::kWrite, "cannot create " + run.out.string() + ": " + ec.message());
  save_text(run.file("config.json"), dump(run.config));
  std::string line = "pzsc";
  for (const auto& a : args) line += " " + a;
  append_log(run.out, "start " + name + " threads=" + std::to_string(run.threads) + " :: " + line);
  try {
    const int code = command(run);
    append_log(run.out, "exit " + std::to_string(code));
    return code;
  } catch (const std::exception& e) {
    append_log(run.out, std::string("error ") + e.what());
    throw;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Part-based zero-shot classifiers from class text", "pzsc"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  std::optional<std::string> split_mode, eval_mode, sample, class_id;
  std::optional<double> fraction;
  std::optional<int> top_k, top_n;
  std::map<std::string, Command> commands;

  auto* featurize = app.add_subcommand("featurize", "TF-IDF class text from a corpus");
  add_common(featurize, flags, {"corpus", "stopwords", "split"});
  commands["featurize"] = cmd_featurize;

  auto* split = app.add_subcommand("split", "seen/unseen split of a bundle's classes");
  add_common(split, flags, {"bundle"});
  split->add_option("--mode", split_mode, "SCS or SCE");
  split->add_option("--fraction", fraction, "unseen fraction");
  commands["split"] = cmd_split;

  auto* synth = app.add_subcommand("synth", "planted synthetic bundle");
  add_common(synth, flags, {});
  commands["synth"] = cmd_synth;

  auto* train = app.add_subcommand("train", "fit a model on the seen classes");
  add_common(train, flags, {"bundle", "split", "text", "stopwords"});
  commands["train"] = cmd_train;

  auto* predict = app.add_subcommand("predict", "score every bundle sample");
  add_common(predict, flags, {"model", "bundle", "text"});
  commands["predict"] = cmd_predict;

  auto* eval = app.add_subcommand("eval", "zero-shot or generalized zero-shot evaluation");
  add_common(eval, flags, {"model", "bundle", "split", "text"});
  eval->add_option("--mode", eval_mode, "zsl or gzsl");
  commands["eval"] = cmd_eval;

  auto* analyze = app.add_subcommand("analyze", "term-part connectivity and grounding");
  add_common(analyze, flags, {"model", "bundle", "text"});
  analyze->add_option("--top-k", top_k, "terms kept per part");
  analyze->add_option("--top-n", top_n, "grounded terms per part");
  analyze->add_option("--sample", sample, "sample id to ground");
  analyze->add_option("--class", class_id, "class to ground against, default the sample's own");
  commands["analyze"] = cmd_analyze;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Json config = resolve_config(flags);
    if (split_mode) config["split"]["mode"] = *split_mode;
    if (fraction) config["split"]["fraction"] = *fraction;
    if (eval_mode) config["eval"]["mode"] = *eval_mode;
    if (top_k) config["analyze"]["top_k"] = *top_k;
    if (top_n) config["analyze"]["top_n"] = *top_n;
    if (sample) config["analyze"]["sample"] = *sample;
    if (class_id) config["analyze"]["class"] = *class_id;
    return execute(flags, std::move(config), commands.at(name), name, args);
  } catch (const NumericError& e) {
    std::cerr << "pzsc " << name << ": numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InputError& e) {
    std::cerr << "pzsc " << name << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "pzsc " << name << ": bad JSON value: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "pzsc " << name << ": " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace pzsc::cli
