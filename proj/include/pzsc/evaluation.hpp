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

#ifndef PZSC_EVALUATION_HPP
#define PZSC_EVALUATION_HPP

#include <vector>

#include "pzsc/types.hpp"

namespace pzsc {

// Scores of M samples over a label space of C classes.
struct ScoreTable {
  Matrix scores;                 // M x C
  std::vector<Index> labels;     // M ground-truth columns
  std::vector<bool> seen_mask;   // C flags, true for seen classes

  Index num_samples() const { return scores.rows(); }
  Index num_classes() const { return scores.cols(); }
  void validate() const;
};

/// Top-1 accuracy over all columns of the table. With `per_class`, the mean
/// of within-class accuracies; every class needs at least one sample.
double top1_accuracy(const ScoreTable& table, bool per_class = true);

/// Accuracy of given predictions. With `per_class`, averaged over the
/// classes that occur in `labels`.
double accuracy(const std::vector<Index>& predicted,
                const std::vector<Index>& labels, bool per_class);

/// Calibrated stacking: argmax_c score(c) - lambda * [c is seen], lowest
/// index on ties.
std::vector<Index> gzsl_predict(const ScoreTable& table, double lambda);

struct CurvePoint {
  double lambda = 0.0;
  double unseen_accuracy = 0.0;   // A_{U->T}, on unseen-class data
  double seen_accuracy = 0.0;     // A_{S->T}, on seen-class data
};

struct SeenUnseenCurve {
  std::vector<CurvePoint> points;   // ascending lambda
  double ausuc = 0.0;
};

/// Seen-unseen accuracy curve by an exact sweep over the calibration values
/// at which any prediction changes. Each sample's critical value is
/// max_seen score - max_unseen score; the curve is evaluated just below and
/// above every distinct critical value (offset by half the smallest gap
/// between them, at least 1e-12) and at one sentinel beyond each end. The
/// area is the trapezoidal rule over (A_U, A_S).
SeenUnseenCurve seen_unseen_curve(const ScoreTable& seen_data,
                                  const ScoreTable& unseen_data,
                                  bool per_class = true);

/// Trapezoidal area under points ordered by lambda, x = A_U, y = A_S.
double curve_area(const std::vector<CurvePoint>& points);

/// Scores of samples (d x N) over classes (d x K), N x K, computed in
/// parallel row blocks.
/// The block layout does not change the values.
Matrix parallel_scores(const Matrix& sample_latent, const Matrix& class_latent,
                       int threads);

}  // namespace pzsc

#endif  // PZSC_EVALUATION_HPP
