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

#ifndef PZSC_MODEL_IO_HPP
#define PZSC_MODEL_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "pzsc/text_featurizer.hpp"
#include "pzsc/types.hpp"

namespace pzsc {

// A trained model with what is needed to featurize new class articles.
struct SavedModel {
  ModelParams params;
  HyperParams hyper;
  std::optional<FeaturizerConfig> featurizer;   // absent for pre-featurized text
  std::optional<Vector> idf;                    // with featurizer
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  // Vocabulary usable by text_featurizer::transform; throws InputError when
  // the model was trained on pre-featurized text without idf weights.
  FittedVocabulary vocabulary() const;
};

// Directory layout: model.json, wt.pmtx, wx_NN.pmtx, vocab.txt and, with a
// featurizer, idf.pmtx.
void save_model(const SavedModel& model, const std::string& dir);
SavedModel load_model(const std::string& dir);

nlohmann::ordered_json to_json(const HyperParams& hyper);
nlohmann::ordered_json to_json(const FeaturizerConfig& config);
// Inverses of the above; missing keys or bad values throw.
HyperParams hyper_from_json(const nlohmann::ordered_json& doc);
FeaturizerConfig featurizer_from_json(const nlohmann::ordered_json& doc);

}  // namespace pzsc

#endif  // PZSC_MODEL_IO_HPP
