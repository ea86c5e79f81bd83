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

#include "pzsc/analysis.hpp"

#include <algorithm>
#include <numeric>

#include "pzsc/core_model.hpp"
#include "pzsc/error.hpp"

namespace pzsc {

namespace {

// Indices of `values` sorted descending, ties by ascending index.
std::vector<Index> ranking(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  return order;
}

std::string term_name(const ModelParams& model, Index i) {
  return i < static_cast<Index>(model.vocab.size())
             ? model.vocab[static_cast<std::size_t>(i)]
             : std::to_string(i);
}

}  // namespace

ConnectivityReport connectivity(const ModelParams& model, Index k) {
  if (k < 1) throw InputError("top-k size must be at least 1");
  model.validate();
  k = std::min(k, model.num_terms());
  ConnectivityReport report;
  report.k = k;
  report.norms = group_norms(model);
  const Index parts = model.num_parts();
  report.part_mass = report.norms.rowwise().sum();
  report.top_k_mass = Vector::Zero(parts);
  std::vector<std::vector<bool>> in_top(
      static_cast<std::size_t>(parts),
      std::vector<bool>(static_cast<std::size_t>(model.num_terms()), false));
  for (Index p = 0; p < parts; ++p) {
    const Vector row = report.norms.row(p).transpose();
    const auto order = ranking(row);
    std::vector<RankedTerm> top;
    for (Index r = 0; r < k; ++r) {
      const Index i = order[static_cast<std::size_t>(r)];
      top.push_back({i, term_name(model, i), row(i)});
      report.top_k_mass(p) += row(i);
      in_top[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = true;
    }
    report.top_terms.push_back(std::move(top));
  }
  report.overlap = Matrix::Zero(parts, parts);
  for (Index p = 0; p < parts; ++p) {
    for (Index q = 0; q < parts; ++q) {
      Index shared = 0;
      for (const auto& t : report.top_terms[static_cast<std::size_t>(p)]) {
        shared += in_top[static_cast<std::size_t>(q)][static_cast<std::size_t>(t.term)];
      }
      report.overlap(p, q) = static_cast<double>(shared) / static_cast<double>(k);
    }
  }
  return report;
}

std::vector<std::vector<RankedTerm>> ground_terms(
    const ModelParams& model, const std::vector<Vector>& parts,
    const std::vector<bool>& missing, const Vector& class_text, Index top_n) {
  if (class_text.size() != model.num_terms()) {
    throw InputError("class text has " + std::to_string(class_text.size()) +
                     " terms, model vocabulary has " +
                     std::to_string(model.num_terms()));
  }
  if (static_cast<Index>(parts.size()) != model.num_parts() ||
      missing.size() != parts.size()) {
    throw InputError("expected " + std::to_string(model.num_parts()) +
                     " part vectors and missing flags");
  }
  std::vector<std::vector<RankedTerm>> out(parts.size());
  for (Index p = 0; p < model.num_parts(); ++p) {
    const auto pi = static_cast<std::size_t>(p);
    if (missing[pi]) continue;
    if (parts[pi].size() != model.part_dim()) {
      throw InputError("part " + std::to_string(p) + " vector has wrong length");
    }
    // (x_p^T Wx_p^T) Wt gives the response of every term column at once.
    const Vector response =
        (model.wt.transpose() * (model.wx[pi] * parts[pi])).cwiseProduct(class_text);
    std::vector<Index> present;
    for (Index i = 0; i < class_text.size(); ++i) {
      if (class_text(i) != 0.0) present.push_back(i);
    }
    std::stable_sort(present.begin(), present.end(), [&](Index a, Index b) {
      return response(a) > response(b);
    });
    if (static_cast<Index>(present.size()) > top_n) {
      present.resize(static_cast<std::size_t>(std::max<Index>(top_n, 0)));
    }
    for (Index i : present) out[pi].push_back({i, term_name(model, i), response(i)});
  }
  return out;
}

}  // namespace pzsc
