#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "pzsc/bundle.hpp"
#include "pzsc/container.hpp"
#include "pzsc/model_io.hpp"
#include "pzsc/split.hpp"
#include "pzsc/trainer.hpp"
#include "run_config.hpp"
#include "test_util.hpp"

using namespace pzsc;
using pzsc::cli::run_cli;
using pzsc::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(PZSC_SOURCE_DIR) + "/data/fixture";

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string bytes_of(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every output file except the timestamped log, by relative path.
std::map<std::string, std::string> outputs(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    out[fs::relative(e.path(), dir).string()] = bytes_of(e.path().string());
  }
  return out;
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);   // header
  while (std::getline(in, line)) {
    std::stringstream s(line);
    std::string cell;
    std::getline(s, cell, ',');   // row label
    std::vector<double> row;
    while (std::getline(s, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// featurize -> split -> train on the shipped fixture.
struct Pipeline {
  std::string root, text, split, model;
};

Pipeline run_pipeline(const std::string& name, const std::string& threads = "1") {
  Pipeline p;
  p.root = scratch_dir(name);
  p.text = join(p.root, "text");
  p.split = join(p.root, "split");
  p.model = join(p.root, "model");
  REQUIRE(run_cli({"featurize", "--corpus", join(kFixture, "corpus.json"), "--out", p.text}) == 0);
  REQUIRE(run_cli({"split", "--bundle", kFixture, "--fraction", "0.25", "--seed", "3", "--out", p.split}) == 0);
  REQUIRE(run_cli({"train", "--config", join(kFixture, "run_config.json"), "--bundle", kFixture,
                   "--split", join(p.split, "split.json"), "--text", p.text, "--threads",
                   threads, "--out", p.model}) == 0);
  return p;
}

}  // namespace

TEST_CASE("featurize writes the two-document matrix") {
  const auto dir = scratch_dir("cli_featurize");
  const auto corpus = join(dir, "corpus");
  fs::create_directories(corpus);
  write_file(join(corpus, "c0.txt"), "red red wing");
  write_file(join(corpus, "c1.txt"), "blue tail");
  write_file(join(dir, "raw.json"), R"({"featurizer": {"l2_normalize": false}})");

  REQUIRE(run_cli({"featurize", "--corpus", corpus, "--config", join(dir, "raw.json"),
                   "--out", join(dir, "raw")}) == 0);
  const double a = std::log(1.5) + 1.0;
  const Matrix expected{{0.0, a}, {2.0 * a, 0.0}, {0.0, a}, {a, 0.0}};
  CHECK((load_matrix(join(dir, "raw/text.pmtx")) - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(load_lines(join(dir, "raw/vocab.txt")) == std::vector<std::string>{"blue", "red", "tail", "wing"});
  CHECK(load_lines(join(dir, "raw/classes.txt")) == std::vector<std::string>{"c0", "c1"});

  REQUIRE(run_cli({"featurize", "--corpus", corpus, "--out", join(dir, "norm")}) == 0);
  const Matrix norm = load_matrix(join(dir, "norm/text.pmtx"));
  CHECK(std::abs(norm(1, 0) - 2.0 / std::sqrt(5.0)) < 1e-12);
  CHECK(std::abs(norm(3, 0) - 1.0 / std::sqrt(5.0)) < 1e-12);
  CHECK(std::abs(norm(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-12);

  // rerun into a second directory: same bytes
  REQUIRE(run_cli({"featurize", "--corpus", corpus, "--out", join(dir, "norm2")}) == 0);
  CHECK(outputs(join(dir, "norm")) == outputs(join(dir, "norm2")));
}

TEST_CASE("empty corpus and bad configs exit 2") {
  const auto dir = scratch_dir("cli_errors");
  fs::create_directories(join(dir, "empty"));
  CHECK(run_cli({"featurize", "--corpus", join(dir, "empty"), "--out", join(dir, "o1")}) == 2);
  CHECK(run_cli({"featurize", "--corpus", join(dir, "nowhere"), "--out", join(dir, "o2")}) == 2);

  write_file(join(dir, "typo.json"), R"({"model": {"lamda2": 1.0}})");
  CHECK(run_cli({"train", "--config", join(dir, "typo.json"), "--out", join(dir, "o3")}) == 2);
  write_file(join(dir, "type.json"), R"({"model": {"latent_dim": "big"}})");
  CHECK(run_cli({"train", "--config", join(dir, "type.json"), "--out", join(dir, "o4")}) == 2);
  write_file(join(dir, "frac.json"), R"({"model": {"latent_dim": 2.5}})");
  CHECK(run_cli({"train", "--config", join(dir, "frac.json"), "--out", join(dir, "o5")}) == 2);

  CHECK(run_cli({"train", "--out", join(dir, "o6")}) == 2);   // no bundle
  CHECK(run_cli({"nonsense"}) == 2);
  CHECK(run_cli({"eval", "--mode", "zsl"}) == 2);             // --out is required
}

TEST_CASE("config merge rejects unknown keys with their path") {
  auto config = cli::default_config();
  try {
    cli::merge_config(config, cli::Json::parse(R"({"lbfgs": {"memroy": 3}})"));
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("lbfgs.memroy") != std::string::npos);
  }
  cli::merge_config(config, cli::Json::parse(R"({"seed": 9, "paths": {"bundle": "b"}})"));
  CHECK(config["seed"] == 9);
  CHECK(cli::config_path(config, "bundle") == "b");

  // the hash ignores the thread count only
  auto other = config;
  other["threads"] = 7;
  CHECK(cli::config_hash(other) == cli::config_hash(config));
  other["seed"] = 10;
  CHECK(cli::config_hash(other) != cli::config_hash(config));
}

TEST_CASE("train with zero outer iterations saves the initialization") {
  const auto dir = scratch_dir("cli_l0");
  REQUIRE(run_cli({"split", "--bundle", kFixture, "--out", join(dir, "split")}) == 0);
  write_file(join(dir, "l0.json"), R"({"model": {"max_outer_iters": 0, "latent_dim": 6}})");
  REQUIRE(run_cli({"train", "--config", join(dir, "l0.json"), "--seed", "11", "--bundle", kFixture,
                   "--split", join(dir, "split/split.json"), "--out", join(dir, "model")}) == 0);
  const auto saved = load_model(join(dir, "model"));
  const auto bundle = load_bundle(kFixture);
  const ModelParams init = init_params(
      {6, saved.params.num_terms(), bundle.features.part_dim(), bundle.features.num_parts()}, 11);
  CHECK(saved.params.wt == init.wt);
  REQUIRE(saved.params.wx.size() == init.wx.size());
  for (std::size_t p = 0; p < init.wx.size(); ++p) CHECK(saved.params.wx[p] == init.wx[p]);
  CHECK(bytes_of(join(dir, "model/trace.jsonl")).empty());
}

TEST_CASE("pipeline composes and the trace objective never rises") {
  const auto p = run_pipeline("cli_pipeline");
  std::ifstream trace(join(p.model, "trace.jsonl"));
  std::string line;
  double prev = INFINITY;
  int records = 0;
  while (std::getline(trace, line)) {
    const double obj = cli::Json::parse(line).at("objective").get<double>();
    CHECK(obj <= prev + 1e-8 * std::max(1.0, std::abs(prev)));
    prev = obj;
    ++records;
  }
  CHECK(records > 0);

  const auto split = join(p.split, "split.json");
  CHECK(run_cli({"eval", "--model", p.model, "--bundle", kFixture, "--split", split, "--text",
                 p.text, "--out", join(p.root, "zsl")}) == 0);
  CHECK(run_cli({"eval", "--mode", "gzsl", "--model", p.model, "--bundle", kFixture, "--split",
                 split, "--out", join(p.root, "gzsl")}) == 0);
  CHECK(run_cli({"predict", "--model", p.model, "--bundle", kFixture, "--out",
                 join(p.root, "predict")}) == 0);
  CHECK(run_cli({"analyze", "--model", p.model, "--bundle", kFixture, "--sample", "c00_0",
                 "--out", join(p.root, "analyze")}) == 0);
  const auto report = cli::Json::parse(bytes_of(join(p.root, "gzsl/report.json")));
  CHECK(report.at("ausuc").get<double>() >= 0.0);
  CHECK(report.at("ausuc").get<double>() <= 1.0);
  CHECK(fs::exists(join(p.root, "gzsl/curve.csv")));
  CHECK(fs::exists(join(p.root, "analyze/grounding.json")));
  const auto overlap = read_csv(join(p.root, "analyze/overlap.csv"));
  for (std::size_t i = 0; i < overlap.size(); ++i) {
    CHECK(overlap[i][i] == 1.0);
    for (std::size_t j = 0; j < overlap.size(); ++j) CHECK(overlap[i][j] == overlap[j][i]);
  }

  // eval text in another vocabulary is rejected
  const auto other = join(p.root, "other_text");
  fs::create_directories(join(p.root, "tiny"));
  write_file(join(p.root, "tiny/c00.txt"), "alpha beta");
  REQUIRE(run_cli({"featurize", "--corpus", join(p.root, "tiny"), "--out", other}) == 0);
  CHECK(run_cli({"eval", "--model", p.model, "--bundle", kFixture, "--split", split, "--text",
                 other, "--out", join(p.root, "bad_eval")}) == 2);
}

TEST_CASE("repeated runs and thread counts give identical outputs") {
  const auto a = run_pipeline("cli_det", "1");
  const auto split = join(a.split, "split.json");
  for (const char* threads : {"1", "4"}) {
    const auto model = join(a.root, std::string("model") + threads);
    REQUIRE(run_cli({"train", "--config", join(kFixture, "run_config.json"), "--bundle", kFixture,
                     "--split", split, "--text", a.text, "--threads", threads, "--out", model}) == 0);
    REQUIRE(run_cli({"eval", "--mode", "gzsl", "--model", a.model, "--bundle", kFixture, "--split",
                     split, "--threads", threads, "--out", join(a.root, std::string("gzsl") + threads)}) == 0);
  }
  // same thread count: every byte; different counts: all but the echoed thread count
  CHECK(outputs(a.model) == outputs(join(a.root, "model1")));
  auto one = outputs(join(a.root, "model1"));
  auto four = outputs(join(a.root, "model4"));
  CHECK(cli::Json::parse(four.at("config.json"))["threads"] == 4);
  one.erase("config.json");
  four.erase("config.json");
  CHECK(one == four);
  auto g1 = outputs(join(a.root, "gzsl1"));
  auto g4 = outputs(join(a.root, "gzsl4"));
  g1.erase("config.json");
  g4.erase("config.json");
  CHECK(g1 == g4);
}

TEST_CASE("a perfect-margin model scores 1 in both protocols") {
  const auto dir = scratch_dir("cli_perfect");
  // four classes, one-hot features, identity text and weights
  DatasetBundle bundle;
  bundle.class_ids = {"c0", "c1", "c2", "c3"};
  for (int k = 0; k < 4; ++k) bundle.hierarchy.add(bundle.class_ids[k], k < 2 ? "s0" : "s1");
  TfIdfMatrix text;
  text.values = Matrix::Identity(4, 4);
  text.vocab = {"ta", "tb", "tc", "td"};
  text.class_ids = bundle.class_ids;
  bundle.text = text;
  bundle.features.parts = {"whole"};
  bundle.features.features = {Matrix::Zero(4, 8)};
  bundle.features.missing = {std::vector<bool>(8, false)};
  std::vector<Index> labels;
  for (int n = 0; n < 8; ++n) {
    bundle.features.features[0](n / 2, n) = 1.0;
    bundle.features.sample_ids.push_back("x" + std::to_string(n));
    bundle.partition.push_back(n % 2 == 0 ? Partition::kTrain : Partition::kTest);
    labels.push_back(n / 2);
  }
  bundle.labels = LabelMatrix::from_indices(labels, bundle.class_ids);
  save_bundle(bundle, join(dir, "bundle"));

  SplitSpec split;
  split.seen = {"c0", "c2"};
  split.unseen = {"c1", "c3"};
  save_split(join(dir, "split.json"), split);

  SavedModel model;
  model.params.wt = Matrix::Identity(4, 4);
  model.params.wx = {Matrix::Identity(4, 4)};
  model.params.part_names = {"whole"};
  model.params.vocab = text.vocab;
  save_model(model, join(dir, "model"));

  const std::vector<std::string> common{"--model", join(dir, "model"), "--bundle", join(dir, "bundle"),
                                        "--split", join(dir, "split.json")};
  auto args = common;
  args.insert(args.begin(), "eval");
  auto zsl = args;
  zsl.insert(zsl.end(), {"--out", join(dir, "zsl")});
  REQUIRE(run_cli(zsl) == 0);
  auto gzsl = args;
  gzsl.insert(gzsl.end(), {"--mode", "gzsl", "--out", join(dir, "gzsl")});
  REQUIRE(run_cli(gzsl) == 0);

  const auto zr = cli::Json::parse(bytes_of(join(dir, "zsl/report.json")));
  const auto gr = cli::Json::parse(bytes_of(join(dir, "gzsl/report.json")));
  CHECK(zr.at("top1").get<double>() == 1.0);
  CHECK(gr.at("ausuc").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  // the report names the config that produced it
  const auto echoed = cli::Json::parse(bytes_of(join(dir, "gzsl/config.json")));
  CHECK(gr.at("config_hash") == cli::config_hash(echoed));
  CHECK(zr.at("config_hash").get<std::string>().size() == 16);

  // a model without idf cannot featurize text in another vocabulary
  model.params.vocab = {"ua", "ub", "uc", "ud"};
  save_model(model, join(dir, "model_other"));
  auto bad = args;
  bad[2] = join(dir, "model_other");
  bad.insert(bad.end(), {"--out", join(dir, "bad")});
  CHECK(run_cli(bad) == 2);
}

TEST_CASE("analyze on a zero model writes zero norms") {
  const auto dir = scratch_dir("cli_zero");
  SavedModel model;
  model.params.wt = Matrix::Zero(3, 5);
  model.params.wx = {Matrix::Zero(3, 2), Matrix::Zero(3, 2)};
  model.params.part_names = {"head", "wing"};
  model.params.vocab = {"a", "b", "c", "d", "e"};
  save_model(model, join(dir, "model"));
  REQUIRE(run_cli({"analyze", "--model", join(dir, "model"), "--top-k", "2", "--out", join(dir, "out")}) == 0);
  const auto norms = read_csv(join(dir, "out/norms.csv"));
  REQUIRE(norms.size() == 2);
  for (const auto& row : norms) {
    REQUIRE(row.size() == 5);
    for (double v : row) CHECK(v == 0.0);
  }
  const auto overlap = read_csv(join(dir, "out/overlap.csv"));
  CHECK(overlap[0][1] == overlap[1][0]);
}

TEST_CASE("numeric failure exits 3 and keeps the last good parameters") {
  const auto dir = scratch_dir("cli_numeric");
  REQUIRE(run_cli({"split", "--bundle", kFixture, "--out", join(dir, "split")}) == 0);
  write_file(join(dir, "huge.json"), R"({"model": {"lambda1": 1e308, "latent_dim": 4}})");
  CHECK(run_cli({"train", "--config", join(dir, "huge.json"), "--bundle", kFixture, "--split",
                 join(dir, "split/split.json"), "--out", join(dir, "model")}) == 3);
  const auto last = load_model(join(dir, "model/last_good"));
  CHECK(last.params.all_finite());
  CHECK(!fs::exists(join(dir, "model/model.json")));
}

TEST_CASE("synth and split are pure functions of the seed") {
  const auto dir = scratch_dir("cli_synth");
  write_file(join(dir, "small.json"),
             R"({"synth": {"num_classes": 6, "num_super_categories": 2, "samples_per_class": 3,
                           "num_terms": 20, "planted_terms": 8, "active_terms_per_class": 3}})");
  for (const char* name : {"a", "b"}) {
    REQUIRE(run_cli({"synth", "--config", join(dir, "small.json"), "--seed", "5", "--out", join(dir, name)}) == 0);
    REQUIRE(run_cli({"split", "--bundle", join(dir, name), "--mode", "SCE", "--fraction", "0.5",
                     "--out", join(dir, std::string(name) + "_split")}) == 0);
  }
  CHECK(outputs(join(dir, "a")) == outputs(join(dir, "b")));
  // the echoed configs name different bundle paths
  CHECK(bytes_of(join(dir, "a_split/split.json")) == bytes_of(join(dir, "b_split/split.json")));
  const auto split = load_split(join(dir, "a_split/split.json"));
  CHECK(split.mode == SplitMode::kSCE);
  CHECK(split.unseen.size() == 3);
}
