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

#include "pzsc/core_model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "pzsc/error.hpp"

namespace pzsc {

namespace {

std::string dims(Index rows, Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

void check_text(const ModelParams& model, const Matrix& text) {
  if (text.rows() != model.num_terms()) {
    throw InputError("text has " + std::to_string(text.rows()) +
                     " terms, model vocabulary has " +
                     std::to_string(model.num_terms()));
  }
}

void check_features(const ModelParams& model, const PartFeatureSet& features) {
  if (features.num_parts() != model.num_parts()) {
    throw InputError("feature set has " + std::to_string(features.num_parts()) +
                     " parts, model has " + std::to_string(model.num_parts()));
  }
  for (Index p = 0; p < features.num_parts(); ++p) {
    if (features.features[p].rows() != model.part_dim() ||
        features.features[p].cols() != features.num_samples()) {
      throw InputError("part " + std::to_string(p) + " features are " +
                       dims(features.features[p].rows(),
                            features.features[p].cols()) +
                       ", expected part dimension " +
                       std::to_string(model.part_dim()));
    }
  }
}

}  // namespace

Index TfIdfMatrix::class_index(const std::string& class_id) const {
  for (std::size_t k = 0; k < class_ids.size(); ++k) {
    if (class_ids[k] == class_id) return static_cast<Index>(k);
  }
  throw InputError("class '" + class_id + "' has no text representation");
}

void TfIdfMatrix::validate() const {
  if (static_cast<Index>(vocab.size()) != values.rows()) {
    throw InputError("vocabulary size " + std::to_string(vocab.size()) +
                     " does not match " + std::to_string(values.rows()) +
                     " matrix rows");
  }
  if (static_cast<Index>(class_ids.size()) != values.cols()) {
    throw InputError("class count " + std::to_string(class_ids.size()) +
                     " does not match " + std::to_string(values.cols()) +
                     " matrix columns");
  }
  if (values.size() > 0 && !(values.array() >= 0.0).all()) {
    throw InputError("text matrix has negative entries");
  }
  std::set<std::string> seen(vocab.begin(), vocab.end());
  if (seen.size() != vocab.size()) {
    throw InputError("vocabulary contains duplicate terms");
  }
}

void PartFeatureSet::mark_missing(Index part, Index sample) {
  features[part].col(sample).setZero();
  missing[part][sample] = true;
}

PartFeatureSet PartFeatureSet::select(const std::vector<Index>& samples) const {
  PartFeatureSet out;
  out.parts = parts;
  out.features.reserve(features.size());
  out.missing.assign(features.size(), std::vector<bool>(samples.size(), false));
  for (std::size_t p = 0; p < features.size(); ++p) {
    Matrix m(features[p].rows(), static_cast<Index>(samples.size()));
    for (std::size_t j = 0; j < samples.size(); ++j) {
      m.col(static_cast<Index>(j)) = features[p].col(samples[j]);
      out.missing[p][j] = missing[p][samples[j]];
    }
    out.features.push_back(std::move(m));
  }
  out.sample_ids.reserve(samples.size());
  for (Index s : samples) out.sample_ids.push_back(sample_ids[s]);
  return out;
}

void PartFeatureSet::validate() const {
  if (features.empty()) throw InputError("feature set has no parts");
  if (parts.size() != features.size()) {
    throw InputError("part names and feature matrices disagree in count");
  }
  const Index n = num_samples();
  const Index dp = part_dim();
  if (missing.size() != features.size()) {
    throw InputError("missing mask must have one row per part");
  }
  if (static_cast<Index>(sample_ids.size()) != n) {
    throw InputError("sample id count does not match feature columns");
  }
  for (std::size_t p = 0; p < features.size(); ++p) {
    if (features[p].rows() != dp || features[p].cols() != n) {
      throw InputError("part '" + parts[p] + "' features are " +
                       dims(features[p].rows(), features[p].cols()) +
                       ", expected " + dims(dp, n));
    }
    if (static_cast<Index>(missing[p].size()) != n) {
      throw InputError("missing mask row length does not match sample count");
    }
    for (Index j = 0; j < n; ++j) {
      if (missing[p][j] && !features[p].col(j).isZero(0.0)) {
        throw InputError("sample '" + sample_ids[j] + "' has part '" +
                         parts[p] + "' flagged missing but nonzero features");
      }
    }
  }
}

LabelMatrix LabelMatrix::from_indices(const std::vector<Index>& labels,
                                      std::vector<std::string> class_ids) {
  LabelMatrix out;
  const Index k = static_cast<Index>(class_ids.size());
  out.values = Matrix::Zero(static_cast<Index>(labels.size()), k);
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n] < 0 || labels[n] >= k) {
      throw InputError("label index " + std::to_string(labels[n]) +
                       " out of range for " + std::to_string(k) + " classes");
    }
    out.values(static_cast<Index>(n), labels[n]) = 1.0;
  }
  out.class_ids = std::move(class_ids);
  return out;
}

std::vector<Index> LabelMatrix::indices() const {
  std::vector<Index> out(static_cast<std::size_t>(values.rows()));
  for (Index n = 0; n < values.rows(); ++n) {
    Index k;
    values.row(n).maxCoeff(&k);
    out[static_cast<std::size_t>(n)] = k;
  }
  return out;
}

void LabelMatrix::validate() const {
  if (static_cast<Index>(class_ids.size()) != values.cols()) {
    throw InputError("label matrix columns do not match class count");
  }
  for (Index n = 0; n < values.rows(); ++n) {
    int ones = 0;
    for (Index k = 0; k < values.cols(); ++k) {
      const double v = values(n, k);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw InputError("label matrix has a non-binary entry");
      }
    }
    if (ones != 1) {
      throw InputError("label row " + std::to_string(n) + " is not one-hot");
    }
  }
}

bool ModelParams::all_finite() const {
  if (!wt.allFinite()) return false;
  for (const auto& w : wx) {
    if (!w.allFinite()) return false;
  }
  return true;
}

void ModelParams::validate() const {
  if (wx.empty()) throw InputError("model needs at least one part");
  if (wt.rows() < 1) throw InputError("latent dimension must be positive");
  for (const auto& w : wx) {
    if (w.rows() != wt.rows() || w.cols() != wx.front().cols()) {
      throw InputError("part transforms disagree in shape");
    }
  }
  if (static_cast<Index>(vocab.size()) != wt.cols()) {
    throw InputError("model vocabulary size does not match Wt columns");
  }
  if (part_names.size() != wx.size()) {
    throw InputError("model part names do not match part transforms");
  }
  if (!all_finite()) throw NumericError("model parameters are not finite");
}

void HyperParams::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    throw InputError("lambda1 and lambda2 must be nonnegative");
  }
  if (latent_dim < 1) throw InputError("latent dimension must be positive");
  if (max_outer_iters < 0) throw InputError("max_outer_iters must be >= 0");
  if (inner_max_iters < 1) throw InputError("inner_max_iters must be positive");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(group_eps > 0.0)) {
    throw InputError("tolerances and group_eps must be positive");
  }
}

std::vector<Vector> synthesize_part_classifiers(const ModelParams& model,
                                                const Vector& text) {
  if (text.size() != model.num_terms()) {
    throw InputError("text vector has length " + std::to_string(text.size()) +
                     ", model vocabulary has " +
                     std::to_string(model.num_terms()));
  }
  const Vector latent = model.wt * text;
  std::vector<Vector> out;
  out.reserve(model.wx.size());
  for (const auto& w : model.wx) out.emplace_back(w.transpose() * latent);
  return out;
}

Vector score_classes(const ModelParams& model, const Matrix& text,
                     const std::vector<Vector>& parts,
                     const std::vector<bool>& missing) {
  check_text(model, text);
  if (static_cast<Index>(parts.size()) != model.num_parts() ||
      missing.size() != parts.size()) {
    throw InputError("expected " + std::to_string(model.num_parts()) +
                     " part vectors and missing flags");
  }
  // sum_p x_p^T Wx_p^T Wt T = (sum_p Wx_p x_p)^T (Wt T)
  Vector latent = Vector::Zero(model.latent_dim());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (missing[p]) continue;
    if (parts[p].size() != model.part_dim()) {
      throw InputError("part " + std::to_string(p) + " vector has length " +
                       std::to_string(parts[p].size()) + ", expected " +
                       std::to_string(model.part_dim()));
    }
    latent.noalias() += model.wx[p] * parts[p];
  }
  return text.transpose() * (model.wt.transpose() * latent);
}

Matrix score_matrix(const ModelParams& model, const Matrix& text,
                    const PartFeatureSet& features) {
  check_text(model, text);
  check_features(model, features);
  Matrix latent = Matrix::Zero(model.latent_dim(), features.num_samples());
  for (Index p = 0; p < model.num_parts(); ++p) {
    latent.noalias() += model.wx[p] * features.features[p];
  }
  const Matrix class_latent = model.wt * text;
  return latent.transpose() * class_latent;
}

Index argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw InputError("argmax over an empty set");
  Index best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<std::size_t>(best)]) {
      best = static_cast<Index>(i);
    }
  }
  return best;
}

Index predict_label(const ModelParams& model, const Matrix& text,
                    const std::vector<Vector>& parts,
                    const std::vector<bool>& missing) {
  if (text.cols() == 0) throw InputError("no candidate classes");
  return argmax_lowest(score_classes(model, text, parts, missing));
}

Matrix group_norms(const ModelParams& model) {
  Matrix norms(model.num_parts(), model.num_terms());
  for (Index p = 0; p < model.num_parts(); ++p) {
    norms.row(p) = (model.wx[p].transpose() * model.wt).colwise().norm();
  }
  return norms;
}

ObjectiveBreakdown objective_value(const ModelParams& model,
                                   const HyperParams& hyper,
                                   const Matrix& text, const Matrix& labels,
                                   const PartFeatureSet& features) {
  if (!model.all_finite()) {
    throw NumericError("objective evaluated at non-finite parameters");
  }
  check_text(model, text);
  check_features(model, features);
  if (labels.rows() != features.num_samples() || labels.cols() != text.cols()) {
    throw InputError("label matrix is " + dims(labels.rows(), labels.cols()) +
                     ", expected " + dims(features.num_samples(), text.cols()));
  }
  const Matrix class_latent = model.wt * text;  // d x K
  Matrix latent = Matrix::Zero(model.latent_dim(), features.num_samples());
  ObjectiveBreakdown out;
  for (Index p = 0; p < model.num_parts(); ++p) {
    latent.noalias() += model.wx[p] * features.features[p];
    out.variance_term +=
        (model.wx[p].transpose() * class_latent).squaredNorm();
  }
  out.data_term = (latent.transpose() * class_latent - labels).squaredNorm();
  out.variance_term *= hyper.lambda1;
  out.group_term = hyper.lambda2 * group_norms(model).sum();
  out.total = out.data_term + out.variance_term + out.group_term;
  return out;
}

}  // namespace pzsc
