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

#ifndef PZSC_ANALYSIS_HPP
#define PZSC_ANALYSIS_HPP

#include <string>
#include <vector>

#include "pzsc/types.hpp"

namespace pzsc {

struct RankedTerm {
  Index term = 0;
  std::string name;
  double value = 0.0;
};

struct ConnectivityReport {
  Matrix norms;                                // P x d_T, ||Wx_p^T wt_i||
  std::vector<std::vector<RankedTerm>> top_terms;   // per part, descending
  Matrix overlap;                              // P x P, |top(p) & top(q)| / k
  Vector part_mass;                            // per part, sum over all terms
  Vector top_k_mass;                           // per part, sum over its top-k
  Index k = 0;
};

/// Term-part connection strengths. Rankings break ties by vocabulary index;
/// k is capped at d_T.
ConnectivityReport connectivity(const ModelParams& model, Index k = 30);

/// For each part, the terms of `class_text` ranked by their contribution to
/// the class score, (x_p^T Wx_p^T wt_i) * t_i. Terms absent from the class
/// text are skipped; a missing part yields an empty list. At most `top_n`
/// terms per part.
std::vector<std::vector<RankedTerm>> ground_terms(
    const ModelParams& model, const std::vector<Vector>& parts,
    const std::vector<bool>& missing, const Vector& class_text, Index top_n);

}  // namespace pzsc

#endif  // PZSC_ANALYSIS_HPP
