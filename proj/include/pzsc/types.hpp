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

#ifndef PZSC_TYPES_HPP
#define PZSC_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace pzsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Text representation of K classes: one TF-IDF column per class.
struct TfIdfMatrix {
  Matrix values;                        // d_T x K
  std::vector<std::string> vocab;       // d_T terms
  std::vector<std::string> class_ids;   // K classes

  Index num_terms() const { return values.rows(); }
  Index num_classes() const { return values.cols(); }

  // Column of a class by id; throws InputError when absent.
  Index class_index(const std::string& class_id) const;

  // Throws InputError when an invariant is violated.
  void validate() const;
};

// Per-part features of N samples. A missing part is a zero column.
struct PartFeatureSet {
  std::vector<std::string> parts;              // P names
  std::vector<Matrix> features;                // P matrices, d_P x N
  std::vector<std::vector<bool>> missing;      // P x N
  std::vector<std::string> sample_ids;         // N

  Index num_parts() const { return static_cast<Index>(features.size()); }
  Index num_samples() const {
    return features.empty() ? 0 : features.front().cols();
  }
  Index part_dim() const {
    return features.empty() ? 0 : features.front().rows();
  }

  // Zeroes column n of part p and flags it missing.
  void mark_missing(Index part, Index sample);

  // Subset of samples, in the given order.
  PartFeatureSet select(const std::vector<Index>& samples) const;

  void validate() const;
};

// One-hot labels, N x K.
struct LabelMatrix {
  Matrix values;
  std::vector<std::string> class_ids;

  static LabelMatrix from_indices(const std::vector<Index>& labels,
                                  std::vector<std::string> class_ids);
  std::vector<Index> indices() const;

  void validate() const;
};

struct ModelParams {
  Matrix wt;                              // d x d_T
  std::vector<Matrix> wx;                 // P matrices, d x d_P
  std::vector<std::string> part_names;
  std::vector<std::string> vocab;

  Index latent_dim() const { return wt.rows(); }
  Index num_terms() const { return wt.cols(); }
  Index num_parts() const { return static_cast<Index>(wx.size()); }
  Index part_dim() const { return wx.empty() ? 0 : wx.front().cols(); }

  bool all_finite() const;

  // Shape invariants; non-finite entries raise NumericError.
  void validate() const;
};

struct HyperParams {
  double lambda1 = 0.01;
  double lambda2 = 0.1;
  int latent_dim = 50;
  int max_outer_iters = 40;   // L; 0 returns the initialization
  double inner_tol = 1e-6;    // max-abs gradient tolerance of each L-BFGS solve
  int inner_max_iters = 200;
  double outer_tol = 1e-6;    // relative change of the full objective
  double group_eps = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace pzsc

#endif  // PZSC_TYPES_HPP
