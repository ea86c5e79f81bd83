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

#include "pzsc/trainer.hpp"

#include <chrono>
#include <cmath>

#include "pzsc/error.hpp"
#include "pzsc/rng.hpp"

namespace pzsc {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Elementwise sum of a .* b.
double frobenius_dot(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

Matrix latent_of_samples(const std::vector<Matrix>& wx,
                         const PartFeatureSet& features, Index skip = -1) {
  Matrix latent = Matrix::Zero(wx.front().rows(), features.num_samples());
  for (Index p = 0; p < static_cast<Index>(wx.size()); ++p) {
    if (p == skip) continue;
    latent.noalias() += wx[p] * features.features[p];
  }
  return latent;
}

}  // namespace

const char* to_string(Phase phase) { return phase == Phase::kWt ? "Wt" : "Wx"; }

void TrainingProblem::validate() const {
  features.validate();
  if (labels.rows() != features.num_samples()) {
    throw InputError("label rows (" + std::to_string(labels.rows()) +
                     ") do not match sample count (" +
                     std::to_string(features.num_samples()) + ")");
  }
  if (labels.cols() != text.cols()) {
    throw InputError("label columns (" + std::to_string(labels.cols()) +
                     ") do not match text classes (" +
                     std::to_string(text.cols()) + ")");
  }
  if (text.cols() < 2) throw InputError("training needs at least two classes");
  if (text.rows() < 1) throw InputError("training needs at least one text term");
  if (!text.allFinite() || !labels.allFinite()) {
    throw InputError("training inputs contain non-finite values");
  }
  for (const auto& x : features.features) {
    if (!x.allFinite()) throw InputError("part features contain non-finite values");
  }
}

Vector flatten(const Matrix& m) {
  Vector v(m.size());
  Eigen::Map<RowMatrix>(v.data(), m.rows(), m.cols()) = m;
  return v;
}

Matrix unflatten(const Vector& v, Index rows, Index cols, Index offset) {
  return Eigen::Map<const RowMatrix>(v.data() + offset, rows, cols);
}

Vector flatten_parts(const std::vector<Matrix>& parts) {
  Index total = 0;
  for (const auto& m : parts) total += m.size();
  Vector v(total);
  Index offset = 0;
  for (const auto& m : parts) {
    Eigen::Map<RowMatrix>(v.data() + offset, m.rows(), m.cols()) = m;
    offset += m.size();
  }
  return v;
}

ModelParams init_params(const ModelDims& dims, std::uint64_t seed) {
  if (dims.latent_dim < 1 || dims.num_terms < 1 || dims.part_dim < 1 ||
      dims.num_parts < 1) {
    throw InputError("model dimensions must be positive");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dims.latent_dim));
  const auto draw = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) m(r, c) = scale * rng.normal();
    }
    return m;
  };
  ModelParams params;
  params.wt = draw(dims.latent_dim, dims.num_terms);
  for (Index p = 0; p < dims.num_parts; ++p) {
    params.wx.push_back(draw(dims.latent_dim, dims.part_dim));
    params.part_names.push_back("part" + std::to_string(p));
  }
  for (Index i = 0; i < dims.num_terms; ++i) {
    params.vocab.push_back("term" + std::to_string(i));
  }
  return params;
}

ReweightState update_reweight(const ModelParams& model, double group_eps) {
  ReweightState state;
  state.group_norms = group_norms(model);
  state.weights = 0.5 / state.group_norms.array().max(group_eps);
  return state;
}

double reweighted_trace(const ModelParams& model, const ReweightState& reweight) {
  double total = 0.0;
  for (Index p = 0; p < model.num_parts(); ++p) {
    const Matrix g = model.wx[p].transpose() * model.wt;   // d_P x d_T
    total += (g.colwise().squaredNorm().array() *
              reweight.weights.row(p).array()).sum();
  }
  return total;
}

double group_sparsity(const Matrix& norms) {
  if (norms.size() == 0) return 0.0;
  const double threshold = 1e-3 * norms.maxCoeff();
  const auto below = (norms.array() < threshold).count();
  return static_cast<double>(below) / static_cast<double>(norms.size());
}

ObjectiveFn wt_surrogate(const ModelParams& model, const ReweightState& reweight,
                         const HyperParams& hyper, const TrainingProblem& problem) {
  const Index d = model.latent_dim();
  const Index dt = model.num_terms();
  Matrix sample_latent = latent_of_samples(model.wx, problem.features);  // d x N
  std::vector<Matrix> part_gram;                                          // Wx_p Wx_p^T
  Matrix gram_sum = Matrix::Zero(d, d);
  for (const auto& w : model.wx) {
    part_gram.emplace_back(w * w.transpose());
    gram_sum += part_gram.back();
  }
  return [=, &problem](const Vector& x, Vector& grad) {
    const Matrix wt = unflatten(x, d, dt);
    const Matrix class_latent = wt * problem.text;                         // d x K
    const Matrix residual =
        sample_latent.transpose() * class_latent - problem.labels;         // N x K
    const Matrix gram_latent = gram_sum * class_latent;
    double value = residual.squaredNorm() +
                   hyper.lambda1 * frobenius_dot(class_latent, gram_latent);
    Matrix g = 2.0 * (sample_latent * residual + hyper.lambda1 * gram_latent) *
               problem.text.transpose();
    for (std::size_t p = 0; p < part_gram.size(); ++p) {
      const Matrix mw = part_gram[p] * wt;
      const auto weights = reweight.weights.row(static_cast<Index>(p)).array();
      value += hyper.lambda2 *
               ((mw.cwiseProduct(wt)).colwise().sum().array() * weights).sum();
      g.array() += 2.0 * hyper.lambda2 * (mw.array().rowwise() * weights);
    }
    grad = flatten(g);
    return value;
  };
}

namespace {

// Shared pieces of the Wx surrogates: Wt is fixed.
struct WxContext {
  Matrix class_latent;                 // A = Wt T, d x K
  Matrix class_gram;                   // A A^T
  std::vector<Matrix> weighted_gram;   // Wt D_p Wt^T
};

WxContext make_wx_context(const ModelParams& model, const ReweightState& reweight,
                          const TrainingProblem& problem) {
  WxContext ctx;
  ctx.class_latent = model.wt * problem.text;
  ctx.class_gram = ctx.class_latent * ctx.class_latent.transpose();
  for (Index p = 0; p < model.num_parts(); ++p) {
    ctx.weighted_gram.emplace_back(
        model.wt * reweight.weights.row(p).asDiagonal() * model.wt.transpose());
  }
  return ctx;
}

// lambda1 and lambda2 terms of one part, with its gradient added to `grad`.
double wx_part_penalty(const WxContext& ctx, const HyperParams& hyper, Index p,
                       const Matrix& wx, Matrix* grad) {
  const Matrix lhs = hyper.lambda1 * ctx.class_gram + hyper.lambda2 * ctx.weighted_gram[p];
  const Matrix lw = lhs * wx;
  if (grad) *grad += 2.0 * lw;
  return frobenius_dot(wx, lw);
}

}  // namespace

ObjectiveFn wx_surrogate(const ModelParams& model, const ReweightState& reweight,
                         const HyperParams& hyper, const TrainingProblem& problem) {
  const Index d = model.latent_dim();
  const Index dp = model.part_dim();
  const Index parts = model.num_parts();
  const WxContext ctx = make_wx_context(model, reweight, problem);
  return [=, &problem](const Vector& x, Vector& grad) {
    std::vector<Matrix> wx;
    for (Index p = 0; p < parts; ++p) wx.push_back(unflatten(x, d, dp, p * d * dp));
    const Matrix sample_latent = latent_of_samples(wx, problem.features);
    const Matrix residual =
        sample_latent.transpose() * ctx.class_latent - problem.labels;     // N x K
    const Matrix back = 2.0 * ctx.class_latent * residual.transpose();     // d x N
    double value = residual.squaredNorm();
    std::vector<Matrix> g;
    for (Index p = 0; p < parts; ++p) {
      Matrix gp = back * problem.features.features[p].transpose();
      value += wx_part_penalty(ctx, hyper, p, wx[p], &gp);
      g.push_back(std::move(gp));
    }
    grad = flatten_parts(g);
    return value;
  };
}

ObjectiveFn wx_part_surrogate(const ModelParams& model, Index part,
                              const ReweightState& reweight,
                              const HyperParams& hyper,
                              const TrainingProblem& problem) {
  const Index d = model.latent_dim();
  const Index dp = model.part_dim();
  const WxContext ctx = make_wx_context(model, reweight, problem);
  const Matrix others = latent_of_samples(model.wx, problem.features, part);
  double fixed = 0.0;
  for (Index q = 0; q < model.num_parts(); ++q) {
    if (q != part) fixed += wx_part_penalty(ctx, hyper, q, model.wx[q], nullptr);
  }
  return [=, &problem](const Vector& x, Vector& grad) {
    const Matrix wx = unflatten(x, d, dp);
    const Matrix sample_latent = others + wx * problem.features.features[part];
    const Matrix residual =
        sample_latent.transpose() * ctx.class_latent - problem.labels;
    Matrix g = 2.0 * ctx.class_latent * residual.transpose() *
               problem.features.features[part].transpose();
    const double value =
        residual.squaredNorm() + fixed + wx_part_penalty(ctx, hyper, part, wx, &g);
    grad = flatten(g);
    return value;
  };
}

SubproblemResult solve_wt_subproblem(ModelParams& model,
                                     const ReweightState& reweight,
                                     const HyperParams& hyper,
                                     const TrainingProblem& problem,
                                     const LbfgsConfig& lbfgs) {
  const auto f = wt_surrogate(model, reweight, hyper, problem);
  MinimizeResult r;
  try {
    r = minimize(f, flatten(model.wt), lbfgs);
  } catch (const OptimizerNumericError& e) {
    throw OptimizerNumericError(std::string("Wt phase: ") + e.what(), e.iterate());
  }
  model.wt = unflatten(r.x, model.latent_dim(), model.num_terms());
  return {r.iterations, r.converged};
}

SubproblemResult solve_wx_subproblem(ModelParams& model,
                                     const ReweightState& reweight,
                                     const HyperParams& hyper,
                                     const TrainingProblem& problem,
                                     const LbfgsConfig& lbfgs,
                                     bool block_part_solves) {
  const Index d = model.latent_dim();
  const Index dp = model.part_dim();
  try {
    if (!block_part_solves) {
      const auto f = wx_surrogate(model, reweight, hyper, problem);
      const MinimizeResult r = minimize(f, flatten_parts(model.wx), lbfgs);
      for (Index p = 0; p < model.num_parts(); ++p) {
        model.wx[p] = unflatten(r.x, d, dp, p * d * dp);
      }
      return {r.iterations, r.converged};
    }
    SubproblemResult total{0, true};
    for (Index p = 0; p < model.num_parts(); ++p) {
      const auto f = wx_part_surrogate(model, p, reweight, hyper, problem);
      const MinimizeResult r = minimize(f, flatten(model.wx[p]), lbfgs);
      model.wx[p] = unflatten(r.x, d, dp);
      total.iterations += r.iterations;
      total.converged = total.converged && r.converged;
    }
    return total;
  } catch (const OptimizerNumericError& e) {
    throw OptimizerNumericError(std::string("Wx phase: ") + e.what(), e.iterate());
  }
}

FitResult fit(const TrainingProblem& problem, const HyperParams& hyper,
              const FitOptions& options, std::vector<std::string> part_names,
              std::vector<std::string> vocab) {
  hyper.validate();
  options.lbfgs.validate();
  problem.validate();

  FitResult result;
  const ModelDims dims{hyper.latent_dim, problem.text.rows(),
                       problem.features.part_dim(), problem.features.num_parts()};
  result.params = init_params(dims, hyper.seed);
  if (!part_names.empty()) result.params.part_names = std::move(part_names);
  if (!vocab.empty()) result.params.vocab = std::move(vocab);
  result.params.validate();

  LbfgsConfig lbfgs = options.lbfgs;
  lbfgs.grad_tol = hyper.inner_tol;
  lbfgs.max_iters = hyper.inner_max_iters;

  double previous =
      objective_value(result.params, hyper, problem.text, problem.labels,
                      problem.features).total;
  bool wt_turn = false;
  for (int iter = 1; iter <= hyper.max_outer_iters; ++iter) {
    const auto start = std::chrono::steady_clock::now();
    const ModelParams last_good = result.params;
    const ReweightState reweight = update_reweight(result.params, hyper.group_eps);
    TraceRecord record;
    record.iter = iter;
    record.phase = wt_turn ? Phase::kWt : Phase::kWx;
    SubproblemResult sub;
    try {
      sub = wt_turn ? solve_wt_subproblem(result.params, reweight, hyper, problem, lbfgs)
                    : solve_wx_subproblem(result.params, reweight, hyper, problem,
                                          lbfgs, options.block_part_solves);
      record.objective = objective_value(result.params, hyper, problem.text,
                                         problem.labels, problem.features);
    } catch (const NumericError& e) {
      throw TrainingError("outer iteration " + std::to_string(iter) + ": " + e.what(),
                          last_good);
    }
    if (!std::isfinite(record.objective.total)) {
      throw TrainingError("outer iteration " + std::to_string(iter) +
                              ": objective is not finite",
                          last_good);
    }
    wt_turn = !wt_turn;
    record.inner_iterations = sub.iterations;
    record.inner_converged = sub.converged;
    record.group_sparsity = group_sparsity(group_norms(result.params));
    record.wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start).count();
    result.trace.push_back(record);
    if (options.on_record) options.on_record(record);
    if (options.on_checkpoint && options.checkpoint_every > 0 &&
        iter % options.checkpoint_every == 0) {
      options.on_checkpoint(iter, result.params);
    }
    const double current = record.objective.total;
    const double change = std::abs(previous - current) /
                          std::max(std::abs(previous), 1e-300);
    previous = current;
    if (iter >= 2 && change < hyper.outer_tol) break;
  }
  return result;
}

}  // namespace pzsc
