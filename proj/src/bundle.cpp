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

#include "pzsc/bundle.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "pzsc/container.hpp"
#include "pzsc/error.hpp"

namespace pzsc {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "pzsc-bundle";
constexpr int kVersion = 1;

std::string part_file(std::size_t p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part_%02zu.pmtx", p);
  return buf;
}

fs::path resolve(const fs::path& root, const std::string& name) {
  const fs::path path = root / name;
  if (!fs::exists(path)) {
    throw IoError(IoErrorKind::kMissingFile,
                  "manifest references missing file " + path.string());
  }
  return path;
}

void expect_dims(const Matrix& m, Index rows, Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw IoError(IoErrorKind::kDimensionMismatch,
                  what + " is " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", manifest says " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
}

template <typename T>
T field(const json& doc, const char* key, const std::string& where) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoErrorKind::kParse, where + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<Index> DatasetBundle::samples_of(const std::vector<std::string>& classes,
                                             bool include_train,
                                             bool include_test) const {
  std::set<Index> wanted;
  for (const auto& c : classes) {
    for (std::size_t k = 0; k < class_ids.size(); ++k) {
      if (class_ids[k] == c) wanted.insert(static_cast<Index>(k));
    }
  }
  const auto labels_idx = labels.indices();
  std::vector<Index> out;
  for (Index n = 0; n < num_samples(); ++n) {
    const auto part = partition[static_cast<std::size_t>(n)];
    const bool allowed = part == Partition::kTrain ? include_train : include_test;
    if (allowed && wanted.contains(labels_idx[static_cast<std::size_t>(n)])) {
      out.push_back(n);
    }
  }
  return out;
}

void DatasetBundle::validate() const {
  features.validate();
  labels.validate();
  hierarchy.validate();
  if (labels.class_ids != class_ids) {
    throw InputError("label classes differ from bundle classes");
  }
  if (hierarchy.classes != class_ids) {
    throw InputError("hierarchy classes differ from bundle classes");
  }
  if (labels.values.rows() != features.num_samples()) {
    throw InputError("label rows do not match sample count");
  }
  if (static_cast<Index>(partition.size()) != features.num_samples()) {
    throw InputError("partition does not cover every sample");
  }
  if (text) {
    text->validate();
    if (text->class_ids != class_ids) {
      throw InputError("text columns differ from bundle classes");
    }
  }
  if (corpus) {
    std::set<std::string> have;
    for (const auto& d : corpus->documents) have.insert(d.class_id);
    for (const auto& c : class_ids) {
      if (!have.contains(c)) throw InputError("corpus lacks an article for '" + c + "'");
    }
  }
}

json save_bundle(const DatasetBundle& bundle, const std::string& dir) {
  bundle.validate();
  const fs::path root(dir);
  fs::create_directories(root);

  json manifest;
  manifest["format"] = kFormat;
  manifest["version"] = kVersion;
  manifest["dims"] = {{"P", bundle.features.num_parts()},
                      {"d_P", bundle.features.part_dim()},
                      {"d_T", bundle.text ? json(bundle.text->num_terms()) : json(nullptr)},
                      {"N", bundle.features.num_samples()},
                      {"K", bundle.class_ids.size()}};
  json classes = json::array();
  for (std::size_t k = 0; k < bundle.class_ids.size(); ++k) {
    classes.push_back({{"id", bundle.class_ids[k]},
                       {"super_category", bundle.hierarchy.super_categories[k]}});
  }
  manifest["classes"] = classes;

  json parts = json::array();
  for (std::size_t p = 0; p < bundle.features.features.size(); ++p) {
    const auto name = part_file(p);
    save_matrix((root / name).string(), bundle.features.features[p]);
    parts.push_back({{"name", bundle.features.parts[p]}, {"features", name}});
  }
  manifest["parts"] = parts;

  Matrix missing(bundle.features.num_parts(), bundle.features.num_samples());
  for (Index p = 0; p < missing.rows(); ++p) {
    for (Index n = 0; n < missing.cols(); ++n) {
      missing(p, n) = bundle.features.missing[static_cast<std::size_t>(p)]
                                             [static_cast<std::size_t>(n)] ? 1.0 : 0.0;
    }
  }
  save_matrix((root / "missing.pmtx").string(), missing);
  manifest["missing"] = "missing.pmtx";

  std::ostringstream samples;
  samples << "sample_id\tclass_id\tpartition\n";
  const auto label_idx = bundle.labels.indices();
  for (Index n = 0; n < bundle.features.num_samples(); ++n) {
    const auto i = static_cast<std::size_t>(n);
    samples << bundle.features.sample_ids[i] << '\t'
            << bundle.class_ids[static_cast<std::size_t>(label_idx[i])] << '\t'
            << (bundle.partition[i] == Partition::kTrain ? "train" : "test") << '\n';
  }
  save_text((root / "samples.tsv").string(), samples.str());
  manifest["samples"] = "samples.tsv";

  if (bundle.text) {
    save_matrix((root / "text.pmtx").string(), bundle.text->values);
    save_lines((root / "vocab.txt").string(), bundle.text->vocab);
    manifest["text"] = {{"matrix", "text.pmtx"}, {"vocab", "vocab.txt"}};
  }
  if (bundle.corpus) {
    json corpus = json::object();
    for (const auto& d : bundle.corpus->documents) corpus[d.class_id] = d.text;
    save_text((root / "corpus.json").string(), corpus.dump(2) + "\n");
    manifest["corpus"] = "corpus.json";
  }
  save_text((root / "manifest.json").string(), manifest.dump(2) + "\n");
  return manifest;
}

DatasetBundle load_bundle(const std::string& manifest_path) {
  fs::path path(manifest_path);
  if (fs::is_directory(path)) path /= "manifest.json";
  if (!fs::exists(path)) {
    throw IoError(IoErrorKind::kMissingFile, "no manifest at " + path.string());
  }
  const fs::path root = path.parent_path();
  const std::string where = path.string();

  DatasetBundle bundle;
  try {
    bundle.manifest = json::parse(load_text(path.string()));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(IoErrorKind::kParse, where + ": " + e.what());
  }
  const json& manifest = bundle.manifest;
  if (manifest.value("format", std::string()) != kFormat) {
    throw IoError(IoErrorKind::kParse, where + ": not a pzsc-bundle manifest");
  }
  if (manifest.value("version", 0) != kVersion) {
    throw IoError(IoErrorKind::kBadVersion, where + ": unsupported bundle version");
  }
  const json dims = field<json>(manifest, "dims", where);
  const auto num_parts = field<Index>(dims, "P", where);
  const auto part_dim = field<Index>(dims, "d_P", where);
  const auto num_samples = field<Index>(dims, "N", where);
  const auto num_classes = field<Index>(dims, "K", where);

  for (const auto& c : field<json>(manifest, "classes", where)) {
    bundle.hierarchy.add(field<std::string>(c, "id", where),
                         field<std::string>(c, "super_category", where));
  }
  bundle.class_ids = bundle.hierarchy.classes;
  if (static_cast<Index>(bundle.class_ids.size()) != num_classes) {
    throw IoError(IoErrorKind::kDimensionMismatch,
                  where + ": lists " + std::to_string(bundle.class_ids.size()) +
                      " classes, dims say K = " + std::to_string(num_classes));
  }
  std::map<std::string, Index> class_index;
  for (std::size_t k = 0; k < bundle.class_ids.size(); ++k) {
    if (!class_index.emplace(bundle.class_ids[k], static_cast<Index>(k)).second) {
      throw IoError(IoErrorKind::kParse, where + ": class '" + bundle.class_ids[k] +
                                             "' listed twice");
    }
  }

  const json parts = field<json>(manifest, "parts", where);
  if (static_cast<Index>(parts.size()) != num_parts) {
    throw IoError(IoErrorKind::kDimensionMismatch,
                  where + ": lists " + std::to_string(parts.size()) +
                      " parts, dims say P = " + std::to_string(num_parts));
  }
  for (const auto& part : parts) {
    const auto name = field<std::string>(part, "name", where);
    const auto file = resolve(root, field<std::string>(part, "features", where));
    Matrix m = load_matrix(file.string());
    expect_dims(m, part_dim, num_samples, file.string());
    bundle.features.parts.push_back(name);
    bundle.features.features.push_back(std::move(m));
  }

  const auto missing_file = resolve(root, field<std::string>(manifest, "missing", where));
  const Matrix missing = load_matrix(missing_file.string());
  expect_dims(missing, num_parts, num_samples, missing_file.string());
  for (Index p = 0; p < num_parts; ++p) {
    std::vector<bool> row(static_cast<std::size_t>(num_samples));
    for (Index n = 0; n < num_samples; ++n) row[static_cast<std::size_t>(n)] = missing(p, n) != 0.0;
    bundle.features.missing.push_back(std::move(row));
  }

  const auto samples_file = resolve(root, field<std::string>(manifest, "samples", where));
  const auto lines = load_lines(samples_file.string());
  std::vector<Index> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::istringstream row(lines[i]);
    std::string id, cls, part;
    if (!std::getline(row, id, '\t') || !std::getline(row, cls, '\t') ||
        !std::getline(row, part, '\t')) {
      throw IoError(IoErrorKind::kParse, samples_file.string() + ": line " +
                                             std::to_string(i + 1) + " needs three fields");
    }
    auto it = class_index.find(cls);
    if (it == class_index.end()) {
      throw IoError(IoErrorKind::kParse, samples_file.string() + ": unknown class '" +
                                             cls + "'");
    }
    if (part != "train" && part != "test") {
      throw IoError(IoErrorKind::kParse,
                    samples_file.string() + ": partition must be train or test");
    }
    bundle.features.sample_ids.push_back(id);
    labels.push_back(it->second);
    bundle.partition.push_back(part == "train" ? Partition::kTrain : Partition::kTest);
  }
  if (static_cast<Index>(labels.size()) != num_samples) {
    throw IoError(IoErrorKind::kDimensionMismatch,
                  samples_file.string() + ": has " + std::to_string(labels.size()) +
                      " samples, dims say N = " + std::to_string(num_samples));
  }
  bundle.labels = LabelMatrix::from_indices(labels, bundle.class_ids);

  if (manifest.contains("text")) {
    const json& text = manifest["text"];
    TfIdfMatrix t;
    const auto matrix_file = resolve(root, field<std::string>(text, "matrix", where));
    const auto vocab_file = resolve(root, field<std::string>(text, "vocab", where));
    t.values = load_matrix(matrix_file.string());
    t.vocab = load_lines(vocab_file.string());
    t.class_ids = bundle.class_ids;
    const auto num_terms = dims.contains("d_T") && !dims["d_T"].is_null()
                               ? dims["d_T"].get<Index>()
                               : static_cast<Index>(t.vocab.size());
    expect_dims(t.values, num_terms, num_classes, matrix_file.string());
    if (static_cast<Index>(t.vocab.size()) != num_terms) {
      throw IoError(IoErrorKind::kDimensionMismatch,
                    vocab_file.string() + ": has " + std::to_string(t.vocab.size()) +
                        " terms, dims say d_T = " + std::to_string(num_terms));
    }
    bundle.text = std::move(t);
  }
  if (manifest.contains("corpus")) {
    bundle.corpus = load_corpus(
        resolve(root, field<std::string>(manifest, "corpus", where)).string());
  }
  try {
    bundle.validate();
  } catch (const IoError&) {
    throw;
  } catch (const InputError& e) {
    throw IoError(IoErrorKind::kDimensionMismatch, where + ": " + e.what());
  }
  return bundle;
}

}  // namespace pzsc
