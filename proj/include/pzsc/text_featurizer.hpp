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

#ifndef PZSC_TEXT_FEATURIZER_HPP
#define PZSC_TEXT_FEATURIZER_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pzsc/types.hpp"

namespace pzsc {

using StopwordSet = std::unordered_set<std::string>;

struct ClassDocument {
  std::string class_id;
  std::string text;
};

// One article per class, in class order.
struct TextCorpus {
  std::vector<ClassDocument> documents;
  StopwordSet stopwords;

  std::vector<std::string> class_ids() const;
  // Documents of the given classes, in that order; unknown ids throw.
  TextCorpus subset(const std::vector<std::string>& class_ids) const;
};

enum class TokenPattern {
  kAlphaRuns,   // maximal runs of letters
  kAlnumRuns,   // maximal runs of letters or ASCII digits
};

enum class IdfVariant {
  kSmoothed,    // ln((1 + K) / (1 + df)) + 1
  kPlain,       // ln(K / df)
};

struct FeaturizerConfig {
  bool lowercase = true;
  TokenPattern token_pattern = TokenPattern::kAlphaRuns;
  int min_df = 1;
  IdfVariant idf_variant = IdfVariant::kSmoothed;
  bool l2_normalize = true;
};

const char* to_string(TokenPattern pattern);
const char* to_string(IdfVariant variant);
TokenPattern parse_token_pattern(std::string_view name);
IdfVariant parse_idf_variant(std::string_view name);

// Vocabulary and idf weights learned by fit; everything transform needs.
class FittedVocabulary {
 public:
  FittedVocabulary() = default;
  // `terms` must be distinct; idf has one weight per term.
  FittedVocabulary(std::vector<std::string> terms, Vector idf);

  const std::vector<std::string>& terms() const { return terms_; }
  const Vector& idf() const { return idf_; }
  Index size() const { return static_cast<Index>(terms_.size()); }
  // Row of `term`, or -1.
  Index find(const std::string& term) const;

 private:
  std::vector<std::string> terms_;
  Vector idf_;
  std::unordered_map<std::string, Index> index_;
};

/// Splits `text` into tokens. Letters are ASCII letters and the Latin-1 /
/// Latin Extended-A/B ranges (U+00C0..U+024F except U+00D7, U+00F7); every
/// other code point separates tokens, so "red-winged" yields two tokens.
std::vector<std::string> tokenize(std::string_view text,
                                  const FeaturizerConfig& config,
                                  const StopwordSet& stopwords);

struct TfIdfFit {
  TfIdfMatrix matrix;
  FittedVocabulary vocabulary;
};

/// Fits vocabulary and idf on the corpus and returns its TF-IDF matrix.
TfIdfFit fit(const TextCorpus& corpus, const FeaturizerConfig& config);

inline TfIdfMatrix fit_transform(const TextCorpus& corpus,
                                 const FeaturizerConfig& config) {
  return fit(corpus, config).matrix;
}

/// Featurizes documents against a fitted vocabulary. Out-of-vocabulary
/// terms are dropped.
TfIdfMatrix transform(const std::vector<ClassDocument>& documents,
                      const FittedVocabulary& vocabulary,
                      const FeaturizerConfig& config,
                      const StopwordSet& stopwords);

/// One token per line, ASCII-lowercased; blank lines and lines starting with '#'
/// are ignored.
StopwordSet parse_stopwords(std::string_view contents);
StopwordSet load_stopwords(const std::string& path);

/// The English list shipped in data/stopwords_en.txt.
const StopwordSet& default_stopwords();

/// Corpus from a directory of <class_id>.txt files (sorted by class id) or
/// from a JSON object mapping class id to text (document order kept).
TextCorpus load_corpus(const std::string& path);

}  // namespace pzsc

#endif  // PZSC_TEXT_FEATURIZER_HPP
