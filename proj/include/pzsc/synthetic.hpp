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

#ifndef PZSC_SYNTHETIC_HPP
#define PZSC_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "pzsc/bundle.hpp"

namespace pzsc {

// Planted-structure benchmark. A pool of planted terms is wired one part each
// and owns a Gaussian prototype in that part's feature space; a sample of
// class k carries, in part p, the sum of its class's text weights times the
// prototypes of the class's active terms wired to p, plus N(0, sigma^2) noise.
// The rest of the vocabulary is background: it shows up in articles but
// has no feature footprint.
struct SyntheticSpec {
  int num_classes = 40;
  int num_super_categories = 10;
  int samples_per_class = 20;
  int num_parts = 3;
  int part_dim = 32;
  int num_terms = 120;
  int planted_terms = 40;
  int active_terms_per_class = 8;
  int background_terms_per_class = 4;
  int max_term_count = 3;        // article repeats an active term 1..this times
  double noise_sigma = 0.1;
  double test_fraction = 0.25;   // trailing samples of every class marked test
  double missing_rate = 0.0;     // probability a part of a sample is missing
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedTruth {
  std::vector<Index> term_part;                  // d_T, planted part or -1
  Matrix prototypes;                             // d_P x d_T, zero for background
  std::vector<std::vector<Index>> class_terms;   // active terms per class, ascending
};

struct SyntheticData {
  DatasetBundle bundle;
  PlantedTruth truth;
};

/// Bundle with both a corpus and its TF-IDF text (smoothed idf over all
/// classes, l2-normalized, vocabulary of all d_T terms in index order).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

nlohmann::ordered_json to_json(const SyntheticSpec& spec);
nlohmann::ordered_json to_json(const PlantedTruth& truth);

}  // namespace pzsc

#endif  // PZSC_SYNTHETIC_HPP
