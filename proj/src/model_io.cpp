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

#include "pzsc/model_io.hpp"

#include <cstdio>
#include <filesystem>

#include "pzsc/container.hpp"
#include "pzsc/error.hpp"

namespace pzsc {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string wx_file(std::size_t p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "wx_%02zu.pmtx", p);
  return buf;
}

std::string require(const fs::path& root, const std::string& name) {
  const fs::path path = root / name;
  if (!fs::exists(path)) {
    throw IoError(IoErrorKind::kMissingFile, "model file " + path.string() + " is missing");
  }
  return path.string();
}

}  // namespace

json to_json(const HyperParams& h) {
  return {{"lambda1", h.lambda1},     {"lambda2", h.lambda2},
          {"latent_dim", h.latent_dim}, {"max_outer_iters", h.max_outer_iters},
          {"inner_tol", h.inner_tol}, {"inner_max_iters", h.inner_max_iters},
          {"outer_tol", h.outer_tol}, {"group_eps", h.group_eps},
          {"seed", h.seed}};
}

json to_json(const FeaturizerConfig& c) {
  return {{"lowercase", c.lowercase},
          {"token_pattern", to_string(c.token_pattern)},
          {"min_df", c.min_df},
          {"idf_variant", to_string(c.idf_variant)},
          {"l2_normalize", c.l2_normalize}};
}

HyperParams hyper_from_json(const json& doc) {
  HyperParams h;
  h.lambda1 = doc.at("lambda1").get<double>();
  h.lambda2 = doc.at("lambda2").get<double>();
  h.latent_dim = doc.at("latent_dim").get<int>();
  h.max_outer_iters = doc.at("max_outer_iters").get<int>();
  h.inner_tol = doc.at("inner_tol").get<double>();
  h.inner_max_iters = doc.at("inner_max_iters").get<int>();
  h.outer_tol = doc.at("outer_tol").get<double>();
  h.group_eps = doc.at("group_eps").get<double>();
  h.seed = doc.at("seed").get<std::uint64_t>();
  return h;
}

FeaturizerConfig featurizer_from_json(const json& doc) {
  FeaturizerConfig c;
  c.lowercase = doc.at("lowercase").get<bool>();
  c.token_pattern = parse_token_pattern(doc.at("token_pattern").get<std::string>());
  c.min_df = doc.at("min_df").get<int>();
  c.idf_variant = parse_idf_variant(doc.at("idf_variant").get<std::string>());
  c.l2_normalize = doc.at("l2_normalize").get<bool>();
  return c;
}

FittedVocabulary SavedModel::vocabulary() const {
  if (!featurizer || !idf) {
    throw InputError("model carries no fitted vocabulary/idf; supply featurized text");
  }
  return FittedVocabulary(params.vocab, *idf);
}

void save_model(const SavedModel& model, const std::string& dir) {
  model.params.validate();
  const fs::path root(dir);
  fs::create_directories(root);
  json doc;
  doc["format"] = "pzsc-model";
  doc["version"] = 1;
  doc["latent_dim"] = model.params.latent_dim();
  doc["num_terms"] = model.params.num_terms();
  doc["part_dim"] = model.params.part_dim();
  doc["parts"] = json::array();
  save_matrix((root / "wt.pmtx").string(), model.params.wt);
  for (std::size_t p = 0; p < model.params.wx.size(); ++p) {
    save_matrix((root / wx_file(p)).string(), model.params.wx[p]);
    doc["parts"].push_back({{"name", model.params.part_names[p]}, {"matrix", wx_file(p)}});
  }
  save_lines((root / "vocab.txt").string(), model.params.vocab);
  doc["hyper"] = to_json(model.hyper);
  if (model.featurizer && model.idf) {
    if (model.idf->size() != model.params.num_terms()) {
      throw InputError("idf length does not match the model vocabulary");
    }
    doc["featurizer"] = to_json(*model.featurizer);
    save_matrix((root / "idf.pmtx").string(), Matrix(*model.idf));
    doc["idf"] = "idf.pmtx";
  }
  doc["provenance"] = model.provenance;
  save_text((root / "model.json").string(), doc.dump(2) + "\n");
}

SavedModel load_model(const std::string& dir) {
  const fs::path root(dir);
  const std::string meta_path = require(root, "model.json");
  SavedModel model;
  try {
    const json doc = json::parse(load_text(meta_path));
    if (doc.value("format", std::string()) != "pzsc-model") {
      throw IoError(IoErrorKind::kParse, meta_path + ": not a pzsc-model document");
    }
    if (doc.value("version", 0) != 1) {
      throw IoError(IoErrorKind::kBadVersion, meta_path + ": unsupported model version");
    }
    model.params.wt = load_matrix(require(root, "wt.pmtx"));
    for (const auto& part : doc.at("parts")) {
      model.params.part_names.push_back(part.at("name").get<std::string>());
      model.params.wx.push_back(load_matrix(require(root, part.at("matrix").get<std::string>())));
    }
    model.params.vocab = load_lines(require(root, "vocab.txt"));
    model.hyper = hyper_from_json(doc.at("hyper"));
    if (doc.contains("featurizer")) {
      model.featurizer = featurizer_from_json(doc.at("featurizer"));
      const Matrix idf = load_matrix(require(root, doc.at("idf").get<std::string>()));
      if (idf.cols() != 1) {
        throw IoError(IoErrorKind::kDimensionMismatch, "idf.pmtx must be a column");
      }
      model.idf = idf.col(0);
    }
    model.provenance = doc.value("provenance", json::object());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoErrorKind::kParse, meta_path + ": " + e.what());
  }
  try {
    model.params.validate();
    if (model.idf && model.idf->size() != model.params.num_terms()) {
      throw InputError("idf length does not match the vocabulary");
    }
  } catch (const InputError& e) {
    throw IoError(IoErrorKind::kDimensionMismatch, dir + ": " + e.what());
  }
  return model;
}

}  // namespace pzsc
