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

#include "pzsc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pzsc/error.hpp"
#include "pzsc/rng.hpp"

namespace pzsc {

namespace {

// Fixed-width lowercase name, so lexicographic order equals index order and
// the tokenizer keeps each name whole.
std::string term_name(Index index, int width) {
  std::string letters(static_cast<std::size_t>(width), 'a');
  for (int pos = width - 1; pos >= 0; --pos) {
    letters[static_cast<std::size_t>(pos)] = static_cast<char>('a' + index % 26);
    index /= 26;
  }
  return "zq" + letters;
}

std::string numbered(const char* prefix, int value, int width) {
  std::string digits_str = std::to_string(value);
  if (static_cast<int>(digits_str.size()) < width) {
    digits_str.insert(0, static_cast<std::size_t>(width) - digits_str.size(), '0');
  }
  return prefix + digits_str;
}

int digits(int n) { return n < 10 ? 1 : 1 + digits(n / 10); }

}  // namespace

void SyntheticSpec::validate() const {
  if (num_classes < 2 || samples_per_class < 1 || num_parts < 1 || part_dim < 1 ||
      num_terms < 1 || active_terms_per_class < 1 || max_term_count < 1) {
    throw InputError("synthetic sizes must be positive (and at least two classes)");
  }
  if (planted_terms < 1 || planted_terms > num_terms) {
    throw InputError("planted_terms must be in [1, num_terms]");
  }
  if (active_terms_per_class > planted_terms) {
    throw InputError("active_terms_per_class exceeds planted_terms");
  }
  if (background_terms_per_class < 0 ||
      background_terms_per_class > num_terms - planted_terms) {
    throw InputError("background_terms_per_class exceeds the unplanted vocabulary");
  }
  if (num_super_categories < 1 || num_super_categories > num_classes) {
    throw InputError("num_super_categories must be in [1, num_classes]");
  }
  if (!(noise_sigma >= 0.0)) throw InputError("noise_sigma must be nonnegative");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw InputError("test_fraction must be in [0, 1)");
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw InputError("missing_rate must be in [0, 1)");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Index dt = spec.num_terms;
  const Index dp = spec.part_dim;
  const Index num_classes = spec.num_classes;

  SyntheticData out;
  PlantedTruth& truth = out.truth;

  // Which vocabulary slots are planted, then a balanced random part wiring
  // over them. Unplanted terms get part -1 and never touch the features.
  std::vector<Index> order(static_cast<std::size_t>(dt));
  std::iota(order.begin(), order.end(), Index{0});
  rng.shuffle(order);
  std::vector<Index> planted(order.begin(), order.begin() + spec.planted_terms);
  std::vector<Index> background(order.begin() + spec.planted_terms, order.end());
  std::sort(planted.begin(), planted.end());
  std::sort(background.begin(), background.end());
  truth.term_part.assign(static_cast<std::size_t>(dt), -1);
  std::vector<Index> wiring(planted.size());
  for (std::size_t j = 0; j < wiring.size(); ++j) {
    wiring[j] = static_cast<Index>(j) % spec.num_parts;
  }
  rng.shuffle(wiring);
  for (std::size_t j = 0; j < planted.size(); ++j) {
    truth.term_part[static_cast<std::size_t>(planted[j])] = wiring[j];
  }

  truth.prototypes = Matrix::Zero(dp, dt);
  for (Index i : planted) {
    for (Index r = 0; r < dp; ++r) truth.prototypes(r, i) = rng.normal();
  }

  // Active terms and their article counts; background words appear once.
  Matrix counts = Matrix::Zero(dt, num_classes);
  std::vector<std::vector<Index>> article_terms;
  for (Index k = 0; k < num_classes; ++k) {
    auto pool = planted;
    rng.shuffle(pool);
    std::vector<Index> active(pool.begin(), pool.begin() + spec.active_terms_per_class);
    std::sort(active.begin(), active.end());
    for (Index i : active) {
      counts(i, k) = 1.0 + static_cast<double>(rng.index(
                                static_cast<std::uint64_t>(spec.max_term_count)));
    }
    auto noise_pool = background;
    rng.shuffle(noise_pool);
    std::vector<Index> words = active;
    for (int b = 0; b < spec.background_terms_per_class; ++b) {
      counts(noise_pool[static_cast<std::size_t>(b)], k) = 1.0;
      words.push_back(noise_pool[static_cast<std::size_t>(b)]);
    }
    std::sort(words.begin(), words.end());
    article_terms.push_back(std::move(words));
    truth.class_terms.push_back(std::move(active));
  }

  // Articles: each active term repeated by its count, shuffled, with filler
  // stopwords in between.
  int width = 1;
  for (Index span = 26; span < dt; span *= 26) ++width;
  width = std::max(width, 2);
  std::vector<std::string> vocab;
  for (Index i = 0; i < dt; ++i) vocab.push_back(term_name(i, width));
  const char* filler[] = {"the", "and", "of", "with", "a"};
  TextCorpus corpus;
  std::vector<std::string> class_ids;
  const int class_digits = digits(spec.num_classes - 1);
  for (Index k = 0; k < num_classes; ++k) {
    std::vector<std::string> words;
    for (Index i : article_terms[static_cast<std::size_t>(k)]) {
      for (int c = 0; c < static_cast<int>(counts(i, k)); ++c) {
        words.push_back(vocab[static_cast<std::size_t>(i)]);
      }
    }
    rng.shuffle(words);
    std::string text;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w > 0) text += ' ';
      text += words[w];
      if (w % 3 == 2) {
        text += ' ';
        text += filler[rng.index(5)];
      }
    }
    text += ".\n";
    class_ids.push_back(numbered("c", static_cast<int>(k), class_digits));
    corpus.documents.push_back({class_ids.back(), std::move(text)});
  }

  // TF-IDF over all classes: smoothed idf, l2-normalized columns.
  TfIdfMatrix text;
  text.vocab = vocab;
  text.class_ids = class_ids;
  text.values = counts;
  for (Index i = 0; i < dt; ++i) {
    const double df = static_cast<double>((counts.row(i).array() > 0.0).count());
    if (df == 0.0) continue;
    text.values.row(i) *= std::log((1.0 + num_classes) / (1.0 + df)) + 1.0;
  }
  for (Index k = 0; k < num_classes; ++k) text.values.col(k).normalize();

  // Features.
  const Index n_total = num_classes * spec.samples_per_class;
  const auto n_test = round_half_up(spec.test_fraction * spec.samples_per_class);
  PartFeatureSet& features = out.bundle.features;
  for (int p = 0; p < spec.num_parts; ++p) {
    features.parts.push_back(numbered("part", p, 1));
    features.features.push_back(Matrix::Zero(dp, n_total));
    features.missing.emplace_back(static_cast<std::size_t>(n_total), false);
  }
  std::vector<Index> labels;
  const int sample_digits = digits(spec.samples_per_class - 1);
  for (Index k = 0; k < num_classes; ++k) {
    for (int s = 0; s < spec.samples_per_class; ++s) {
      const Index n = static_cast<Index>(labels.size());
      labels.push_back(k);
      features.sample_ids.push_back(class_ids[static_cast<std::size_t>(k)] + "_" +
                                    numbered("", s, sample_digits));
      out.bundle.partition.push_back(s >= spec.samples_per_class - n_test
                                         ? Partition::kTest
                                         : Partition::kTrain);
      for (Index i : truth.class_terms[static_cast<std::size_t>(k)]) {
        features.features[static_cast<std::size_t>(truth.term_part[static_cast<std::size_t>(i)])]
            .col(n) += text.values(i, k) * truth.prototypes.col(i);
      }
      for (int p = 0; p < spec.num_parts; ++p) {
        auto& x = features.features[static_cast<std::size_t>(p)];
        for (Index r = 0; r < dp; ++r) x(r, n) += spec.noise_sigma * rng.normal();
        if (spec.missing_rate > 0.0 && rng.uniform() < spec.missing_rate) {
          features.mark_missing(p, n);
        }
      }
    }
  }

  out.bundle.class_ids = class_ids;
  const int per_super = static_cast<int>(
      (num_classes + spec.num_super_categories - 1) / spec.num_super_categories);
  const int super_digits = digits(spec.num_super_categories - 1);
  for (Index k = 0; k < num_classes; ++k) {
    out.bundle.hierarchy.add(class_ids[static_cast<std::size_t>(k)],
                             numbered("s", static_cast<int>(k) / per_super, super_digits));
  }
  out.bundle.labels = LabelMatrix::from_indices(labels, class_ids);
  out.bundle.text = std::move(text);
  out.bundle.corpus = std::move(corpus);
  out.bundle.validate();
  return out;
}

nlohmann::ordered_json to_json(const SyntheticSpec& spec) {
  return {{"num_classes", spec.num_classes},
          {"num_super_categories", spec.num_super_categories},
          {"samples_per_class", spec.samples_per_class},
          {"num_parts", spec.num_parts},
          {"part_dim", spec.part_dim},
          {"num_terms", spec.num_terms},
          {"planted_terms", spec.planted_terms},
          {"active_terms_per_class", spec.active_terms_per_class},
          {"background_terms_per_class", spec.background_terms_per_class},
          {"max_term_count", spec.max_term_count},
          {"noise_sigma", spec.noise_sigma},
          {"test_fraction", spec.test_fraction},
          {"missing_rate", spec.missing_rate},
          {"seed", spec.seed}};
}

nlohmann::ordered_json to_json(const PlantedTruth& truth) {
  nlohmann::ordered_json doc;
  doc["term_part"] = truth.term_part;
  doc["class_terms"] = truth.class_terms;
  return doc;
}

}  // namespace pzsc
