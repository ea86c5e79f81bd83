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

#include "pzsc/text_featurizer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pzsc/error.hpp"

namespace pzsc {

namespace {

// Decodes one UTF-8 code point starting at text[pos]; advances pos.
// Malformed sequences decode to U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(extra) >= text.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_letter(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
}

bool is_token_char(char32_t cp, TokenPattern pattern) {
  if (is_letter(cp)) return true;
  return pattern == TokenPattern::kAlnumRuns && cp >= '0' && cp <= '9';
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(IoErrorKind::kMissingFile, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double idf_weight(IdfVariant variant, double num_docs, double df) {
  switch (variant) {
    case IdfVariant::kSmoothed:
      return std::log((1.0 + num_docs) / (1.0 + df)) + 1.0;
    case IdfVariant::kPlain:
      return std::log(num_docs / df);
  }
  return 0.0;
}

void normalize_columns(Matrix& m) {
  for (Index k = 0; k < m.cols(); ++k) {
    const double norm = m.col(k).norm();
    if (norm > 0.0) m.col(k) /= norm;
  }
}

}  // namespace

const char* to_string(TokenPattern pattern) {
  return pattern == TokenPattern::kAlphaRuns ? "alpha" : "alnum";
}

const char* to_string(IdfVariant variant) {
  return variant == IdfVariant::kSmoothed ? "smoothed" : "plain";
}

TokenPattern parse_token_pattern(std::string_view name) {
  if (name == "alpha") return TokenPattern::kAlphaRuns;
  if (name == "alnum") return TokenPattern::kAlnumRuns;
  throw InputError("unknown token pattern '" + std::string(name) +
                   "' (expected alpha or alnum)");
}

IdfVariant parse_idf_variant(std::string_view name) {
  if (name == "smoothed") return IdfVariant::kSmoothed;
  if (name == "plain") return IdfVariant::kPlain;
  throw InputError("unknown idf variant '" + std::string(name) +
                   "' (expected smoothed or plain)");
}

std::vector<std::string> TextCorpus::class_ids() const {
  std::vector<std::string> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.class_id);
  return out;
}

TextCorpus TextCorpus::subset(const std::vector<std::string>& ids) const {
  TextCorpus out;
  out.stopwords = stopwords;
  for (const auto& id : ids) {
    auto it = std::find_if(documents.begin(), documents.end(),
                           [&](const ClassDocument& d) { return d.class_id == id; });
    if (it == documents.end()) {
      throw InputError("corpus has no article for class '" + id + "'");
    }
    out.documents.push_back(*it);
  }
  return out;
}

FittedVocabulary::FittedVocabulary(std::vector<std::string> terms, Vector idf)
    : terms_(std::move(terms)), idf_(std::move(idf)) {
  if (idf_.size() != static_cast<Index>(terms_.size())) {
    throw InputError("idf length does not match vocabulary size");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<Index>(i)).second) {
      throw InputError("duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

Index FittedVocabulary::find(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const FeaturizerConfig& config,
                                  const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty() && !stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = decode_utf8(text, pos);
    if (is_token_char(cp, config.token_pattern)) {
      append_utf8(current, config.lowercase ? to_lower(cp) : cp);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TfIdfFit fit(const TextCorpus& corpus, const FeaturizerConfig& config) {
  const auto num_docs = static_cast<Index>(corpus.documents.size());
  if (config.min_df < 1) throw InputError("min_df must be at least 1");
  if (config.min_df > num_docs) {
    throw InputError("min_df " + std::to_string(config.min_df) +
                     " exceeds the number of documents " +
                     std::to_string(num_docs));
  }
  std::vector<std::map<std::string, int>> counts(corpus.documents.size());
  std::map<std::string, int> doc_freq;
  bool any_tokens = false;
  for (std::size_t k = 0; k < corpus.documents.size(); ++k) {
    for (auto& tok : tokenize(corpus.documents[k].text, config, corpus.stopwords)) {
      ++counts[k][tok];
      any_tokens = true;
    }
    for (const auto& [term, _] : counts[k]) ++doc_freq[term];
  }
  if (!any_tokens) {
    throw InputError("every document is empty after tokenization");
  }
  std::vector<std::string> terms;
  std::vector<double> idf;
  for (const auto& [term, df] : doc_freq) {
    if (df < config.min_df) continue;
    terms.push_back(term);
    idf.push_back(idf_weight(config.idf_variant, static_cast<double>(num_docs),
                             static_cast<double>(df)));
  }
  if (terms.empty()) {
    throw InputError("no term reaches min_df " + std::to_string(config.min_df));
  }
  FittedVocabulary vocab(std::move(terms),
                         Eigen::Map<Vector>(idf.data(), static_cast<Index>(idf.size())));
  TfIdfFit out{transform(corpus.documents, vocab, config, corpus.stopwords),
               std::move(vocab)};
  return out;
}

TfIdfMatrix transform(const std::vector<ClassDocument>& documents,
                      const FittedVocabulary& vocabulary,
                      const FeaturizerConfig& config,
                      const StopwordSet& stopwords) {
  TfIdfMatrix out;
  out.vocab = vocabulary.terms();
  out.values = Matrix::Zero(vocabulary.size(), static_cast<Index>(documents.size()));
  for (std::size_t k = 0; k < documents.size(); ++k) {
    out.class_ids.push_back(documents[k].class_id);
    for (const auto& tok : tokenize(documents[k].text, config, stopwords)) {
      const Index row = vocabulary.find(tok);
      if (row >= 0) out.values(row, static_cast<Index>(k)) += 1.0;
    }
  }
  out.values.array().colwise() *= vocabulary.idf().array();
  if (config.l2_normalize) normalize_columns(out.values);
  return out;
}

StopwordSet parse_stopwords(std::string_view contents) {
  StopwordSet out;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string word = line.substr(b, e - b + 1);
    for (char& ch : word) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    out.insert(std::move(word));
  }
  return out;
}

StopwordSet load_stopwords(const std::string& path) {
  return parse_stopwords(read_file(path));
}

TextCorpus load_corpus(const std::string& path) {
  namespace fs = std::filesystem;
  TextCorpus corpus;
  const fs::path root(path);
  if (fs::is_directory(root)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      corpus.documents.push_back({f.stem().string(), read_file(f)});
    }
  } else if (fs::is_regular_file(root)) {
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(read_file(root));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(IoErrorKind::kParse, path + ": " + e.what());
    }
    if (!doc.is_object()) {
      throw IoError(IoErrorKind::kParse, path + ": expected an object of class id -> text");
    }
    for (const auto& [id, text] : doc.items()) {
      if (!text.is_string()) {
        throw IoError(IoErrorKind::kParse, path + ": article of '" + id + "' is not a string");
      }
      corpus.documents.push_back({id, text.get<std::string>()});
    }
  } else {
    throw IoError(IoErrorKind::kMissingFile, "corpus path " + path + " does not exist");
  }
  if (corpus.documents.empty()) {
    throw InputError("corpus at " + path + " contains no documents");
  }
  return corpus;
}

}  // namespace pzsc
