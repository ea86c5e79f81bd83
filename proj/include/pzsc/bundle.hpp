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

#ifndef PZSC_BUNDLE_HPP
#define PZSC_BUNDLE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pzsc/split.hpp"
#include "pzsc/text_featurizer.hpp"
#include "pzsc/types.hpp"

namespace pzsc {

enum class Partition { kTrain, kTest };

// A dataset on disk: a directory holding manifest.json and the files it
// names. Layout:
//
//   manifest.json   {"format": "pzsc-bundle", "version": 1,
//                    "dims": {"P", "d_P", "d_T", "N", "K"},
//                    "classes": [{"id", "super_category"}, ...],
//                    "parts": [{"name", "features"}, ...],
//                    "missing": "missing.pmtx",
//                    "samples": "samples.tsv",
//                    "text": {"matrix": "text.pmtx", "vocab": "vocab.txt"},
//                    "corpus": "corpus.json"}
//   part_NN.pmtx    d_P x N features of part NN
//   missing.pmtx    P x N, 1 where the part was not detected
//   samples.tsv     header, then sample_id<TAB>class_id<TAB>train|test
//   text.pmtx       d_T x K TF-IDF columns in class order (optional)
//   vocab.txt       d_T terms (with text.pmtx)
//   corpus.json     {class_id: article} (optional)
//
// "text" and "corpus" are each optional; d_T is null without "text".
struct DatasetBundle {
  std::vector<std::string> class_ids;
  ClassHierarchy hierarchy;
  std::optional<TfIdfMatrix> text;
  std::optional<TextCorpus> corpus;
  PartFeatureSet features;
  LabelMatrix labels;
  std::vector<Partition> partition;
  nlohmann::ordered_json manifest;   // filled by load and save

  Index num_samples() const { return features.num_samples(); }
  // Samples whose class is in `classes` and whose partition is allowed.
  std::vector<Index> samples_of(const std::vector<std::string>& classes,
                                bool include_train, bool include_test) const;

  void validate() const;
};

/// Writes the bundle into `dir` (created if needed) and returns the manifest.
nlohmann::ordered_json save_bundle(const DatasetBundle& bundle, const std::string& dir);

/// Accepts the manifest path or its directory.
DatasetBundle load_bundle(const std::string& manifest_path);

}  // namespace pzsc

#endif  // PZSC_BUNDLE_HPP
