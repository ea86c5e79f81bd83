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

#ifndef PZSC_CORE_MODEL_HPP
#define PZSC_CORE_MODEL_HPP

#include <span>
#include <vector>

#include "pzsc/types.hpp"

namespace pzsc {

/// Per-part visual classifiers predicted from a text vector:
/// classifier[p] = Wx[p]^T * Wt * t.
std::vector<Vector> synthesize_part_classifiers(const ModelParams& model,
                                                const Vector& text);

/// Score of every column of `text` (d_T x K) for one sample. Parts flagged
/// in `missing` contribute exactly zero.
Vector score_classes(const ModelParams& model, const Matrix& text,
                     const std::vector<Vector>& parts,
                     const std::vector<bool>& missing);

/// Scores of all samples against all classes, N x K. Missing parts are zero
/// columns in `features` and so contribute nothing.
Matrix score_matrix(const ModelParams& model, const Matrix& text,
                    const PartFeatureSet& features);

/// Index of the largest entry; the lowest index wins ties.
Index argmax_lowest(std::span<const double> values);

inline Index argmax_lowest(const Vector& values) {
  return argmax_lowest(std::span<const double>(values.data(),
                                               static_cast<std::size_t>(values.size())));
}

Index predict_label(const ModelParams& model, const Matrix& text,
                    const std::vector<Vector>& parts,
                    const std::vector<bool>& missing);

struct ObjectiveBreakdown {
  double total = 0.0;
  double data_term = 0.0;       // ||sum_p X_p^T Wx_p^T Wt T - Y||_F^2
  double variance_term = 0.0;   // lambda1 * sum_p ||Wx_p^T Wt T||_F^2
  double group_term = 0.0;      // lambda2 * sum_p sum_i ||Wx_p^T wt_i||_2
};

/// Full training objective with the exact (unsmoothed) group norm.
ObjectiveBreakdown objective_value(const ModelParams& model,
                                   const HyperParams& hyper,
                                   const Matrix& text, const Matrix& labels,
                                   const PartFeatureSet& features);

/// P x d_T matrix of term-part connection norms ||Wx_p^T wt_i||_2.
Matrix group_norms(const ModelParams& model);

}  // namespace pzsc

#endif  // PZSC_CORE_MODEL_HPP
