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

#include "pzsc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "pzsc/core_model.hpp"
#include "pzsc/error.hpp"

namespace pzsc {

namespace {

// Best seen and best unseen class of one sample.
struct SampleSummary {
  Index best_seen = -1;
  Index best_unseen = -1;
  double max_seen = 0.0;
  double max_unseen = 0.0;
  Index label = 0;

  double gap() const { return max_seen - max_unseen; }

  Index predict(double lambda) const {
    const double seen = max_seen - lambda;
    if (seen > max_unseen) return best_seen;
    if (seen < max_unseen) return best_unseen;
    return std::min(best_seen, best_unseen);
  }
};

std::vector<SampleSummary> summarize(const ScoreTable& table) {
  std::vector<SampleSummary> out(static_cast<std::size_t>(table.num_samples()));
  for (Index m = 0; m < table.num_samples(); ++m) {
    auto& s = out[static_cast<std::size_t>(m)];
    s.label = table.labels[static_cast<std::size_t>(m)];
    for (Index c = 0; c < table.num_classes(); ++c) {
      const double v = table.scores(m, c);
      if (table.seen_mask[static_cast<std::size_t>(c)]) {
        if (s.best_seen < 0 || v > s.max_seen) {
          s.best_seen = c;
          s.max_seen = v;
        }
      } else if (s.best_unseen < 0 || v > s.max_unseen) {
        s.best_unseen = c;
        s.max_unseen = v;
      }
    }
  }
  return out;
}

double summary_accuracy(const std::vector<SampleSummary>& samples, double lambda,
                        bool per_class) {
  std::vector<Index> predicted;
  std::vector<Index> labels;
  predicted.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    predicted.push_back(s.predict(lambda));
    labels.push_back(s.label);
  }
  return accuracy(predicted, labels, per_class);
}

void check_gzsl_mask(const ScoreTable& table) {
  const auto seen = std::count(table.seen_mask.begin(), table.seen_mask.end(), true);
  if (seen == 0 || seen == static_cast<long>(table.seen_mask.size())) {
    throw InputError("generalized evaluation needs both seen and unseen classes");
  }
}

}  // namespace

void ScoreTable::validate() const {
  if (static_cast<Index>(labels.size()) != scores.rows()) {
    throw InputError("score table has " + std::to_string(scores.rows()) +
                     " rows but " + std::to_string(labels.size()) + " labels");
  }
  if (static_cast<Index>(seen_mask.size()) != scores.cols()) {
    throw InputError("seen mask length does not match the label space");
  }
  for (Index label : labels) {
    if (label < 0 || label >= scores.cols()) {
      throw InputError("label " + std::to_string(label) + " outside the label space");
    }
  }
  if (!scores.allFinite()) throw InputError("score table has non-finite entries");
}

double accuracy(const std::vector<Index>& predicted,
                const std::vector<Index>& labels, bool per_class) {
  if (predicted.size() != labels.size()) {
    throw InputError("prediction and label counts differ");
  }
  if (labels.empty()) throw InputError("accuracy of an empty sample set");
  if (!per_class) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
    return static_cast<double>(hits) / static_cast<double>(labels.size());
  }
  std::map<Index, std::pair<std::size_t, std::size_t>> per;   // hits, total
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [hits, total] = per[labels[i]];
    hits += predicted[i] == labels[i];
    ++total;
  }
  double sum = 0.0;
  for (const auto& [_, counts] : per) {
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(per.size());
}

double top1_accuracy(const ScoreTable& table, bool per_class) {
  // The seen mask plays no role here and may be left empty.
  if (table.seen_mask.empty()) {
    ScoreTable masked = table;
    masked.seen_mask.assign(static_cast<std::size_t>(table.num_classes()), false);
    masked.validate();
  } else {
    table.validate();
  }
  if (table.num_classes() == 0) throw InputError("empty label space");
  if (per_class) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(table.num_classes()), 0);
    for (Index label : table.labels) ++counts[static_cast<std::size_t>(label)];
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        throw InputError("class " + std::to_string(c) +
                         " has no samples for per-class accuracy");
      }
    }
  }
  std::vector<Index> predicted;
  predicted.reserve(table.labels.size());
  for (Index m = 0; m < table.num_samples(); ++m) {
    const Vector row = table.scores.row(m).transpose();
    predicted.push_back(argmax_lowest(row));
  }
  return accuracy(predicted, table.labels, per_class);
}

std::vector<Index> gzsl_predict(const ScoreTable& table, double lambda) {
  table.validate();
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(table.num_samples()));
  Vector row(table.num_classes());
  for (Index m = 0; m < table.num_samples(); ++m) {
    for (Index c = 0; c < table.num_classes(); ++c) {
      row(c) = table.scores(m, c) -
               (table.seen_mask[static_cast<std::size_t>(c)] ? lambda : 0.0);
    }
    out.push_back(argmax_lowest(row));
  }
  return out;
}

double curve_area(const std::vector<CurvePoint>& points) {
  double area = 0.0;
  for (std::size_t j = 1; j < points.size(); ++j) {
    area += (points[j].unseen_accuracy - points[j - 1].unseen_accuracy) *
            (points[j].seen_accuracy + points[j - 1].seen_accuracy) * 0.5;
  }
  return area;
}

SeenUnseenCurve seen_unseen_curve(const ScoreTable& seen_data,
                                  const ScoreTable& unseen_data, bool per_class) {
  seen_data.validate();
  unseen_data.validate();
  if (seen_data.num_samples() == 0 || unseen_data.num_samples() == 0) {
    throw InputError("seen-unseen curve needs both seen and unseen samples");
  }
  if (seen_data.seen_mask != unseen_data.seen_mask) {
    throw InputError("seen and unseen tables use different label spaces");
  }
  check_gzsl_mask(seen_data);

  const auto seen = summarize(seen_data);
  const auto unseen = summarize(unseen_data);
  std::vector<double> gaps;
  gaps.reserve(seen.size() + unseen.size());
  for (const auto& s : seen) gaps.push_back(s.gap());
  for (const auto& s : unseen) gaps.push_back(s.gap());
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());

  double eps = 0.5;
  if (gaps.size() > 1) {
    double min_diff = gaps[1] - gaps[0];
    for (std::size_t j = 2; j < gaps.size(); ++j) {
      min_diff = std::min(min_diff, gaps[j] - gaps[j - 1]);
    }
    eps = std::max(0.5 * min_diff, 1e-12);
  }
  std::vector<double> lambdas;
  lambdas.reserve(2 * gaps.size() + 2);
  lambdas.push_back(gaps.front() - 1.0);
  for (double g : gaps) {
    lambdas.push_back(g - eps);
    lambdas.push_back(g + eps);
  }
  lambdas.push_back(gaps.back() + 1.0);
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  SeenUnseenCurve curve;
  curve.points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    curve.points.push_back({lambda, summary_accuracy(unseen, lambda, per_class),
                            summary_accuracy(seen, lambda, per_class)});
  }
  curve.ausuc = curve_area(curve.points);
  return curve;
}

Matrix parallel_scores(const Matrix& sample_latent, const Matrix& class_latent,
                       int threads) {
  if (sample_latent.rows() != class_latent.rows()) {
    throw InputError("latent dimensions of samples and classes differ");
  }
  const Index n = sample_latent.cols();
  const Index k = class_latent.cols();
  const Index d = sample_latent.rows();
  Matrix out(n, k);
  // Fixed summation order per entry, so the split across threads never
  // changes a value.
  const auto work = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      const double* a = sample_latent.col(i).data();
      for (Index c = 0; c < k; ++c) {
        const double* b = class_latent.col(c).data();
        double sum = 0.0;
        for (Index j = 0; j < d; ++j) sum += a[j] * b[j];
        out(i, c) = sum;
      }
    }
  };
  const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(n, 1));
  if (workers == 1) {
    work(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const Index chunk = (n + workers - 1) / workers;
    for (Index w = 0; w < workers; ++w) {
      const Index begin = w * chunk;
      const Index end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

}  // namespace pzsc
