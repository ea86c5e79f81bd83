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

#ifndef PZSC_TRAINER_HPP
#define PZSC_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pzsc/core_model.hpp"
#include "pzsc/optimizer.hpp"

namespace pzsc {

struct ModelDims {
  Index latent_dim = 0;
  Index num_terms = 0;
  Index part_dim = 0;
  Index num_parts = 0;
};

// Training inputs. T is d_T x K, Y is N x K, features hold N samples.
struct TrainingProblem {
  Matrix text;
  Matrix labels;
  PartFeatureSet features;

  void validate() const;
};

// Diagonal reweighting of the group-norm surrogate, one vector per part:
// weights(p, i) = 1 / (2 max(||Wx_p^T wt_i||, eps)).
struct ReweightState {
  Matrix weights;       // P x d_T
  Matrix group_norms;   // P x d_T
};

enum class Phase { kWt, kWx };
const char* to_string(Phase phase);

struct TraceRecord {
  int iter = 0;
  Phase phase = Phase::kWx;
  ObjectiveBreakdown objective;
  double group_sparsity = 0.0;
  int inner_iterations = 0;
  bool inner_converged = false;
  double wall_seconds = 0.0;
};

using TrainTrace = std::vector<TraceRecord>;

struct FitOptions {
  LbfgsConfig lbfgs;
  // Solve each Wx_p in turn instead of all parts jointly.
  bool block_part_solves = false;
  // Called with (outer iteration, params) every `checkpoint_every`
  // iterations when both are set.
  int checkpoint_every = 0;
  std::function<void(int, const ModelParams&)> on_checkpoint;
  // Called after every phase.
  std::function<void(const TraceRecord&)> on_record;
};

struct FitResult {
  ModelParams params;
  TrainTrace trace;
};

// Numeric failure inside fit; keeps the last parameters that evaluated to a
// finite objective.
class TrainingError : public NumericError {
 public:
  TrainingError(const std::string& what, ModelParams last_good)
      : NumericError(what), last_good_(std::move(last_good)) {}
  const ModelParams& last_good() const { return last_good_; }

 private:
  ModelParams last_good_;
};

/// Entries i.i.d. standard normal scaled by 1/sqrt(d), drawn in the order
/// Wt (row-major), then Wx_1 .. Wx_P (row-major) from Rng(seed).
ModelParams init_params(const ModelDims& dims, std::uint64_t seed);

ReweightState update_reweight(const ModelParams& model, double group_eps);

/// sum_p Tr(Wx_p^T Wt D_p Wt^T Wx_p), without the lambda2 factor.
double reweighted_trace(const ModelParams& model, const ReweightState& reweight);

/// Fraction of (p, i) groups whose norm is below 1e-3 times the largest one.
double group_sparsity(const Matrix& group_norms);

// Smooth surrogates with the group norm replaced by the reweighted trace.
// Parameters are flattened row-major; Wx parts are concatenated in order.
ObjectiveFn wt_surrogate(const ModelParams& model, const ReweightState& reweight,
                         const HyperParams& hyper, const TrainingProblem& problem);
ObjectiveFn wx_surrogate(const ModelParams& model, const ReweightState& reweight,
                         const HyperParams& hyper, const TrainingProblem& problem);
// Surrogate over a single Wx_p with the other parts held fixed.
ObjectiveFn wx_part_surrogate(const ModelParams& model, Index part,
                              const ReweightState& reweight,
                              const HyperParams& hyper,
                              const TrainingProblem& problem);

Vector flatten(const Matrix& m);
Matrix unflatten(const Vector& v, Index rows, Index cols, Index offset = 0);
Vector flatten_parts(const std::vector<Matrix>& parts);

struct SubproblemResult {
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the Wt surrogate with Wx fixed; updates `model.wt` in place.
SubproblemResult solve_wt_subproblem(ModelParams& model,
                                     const ReweightState& reweight,
                                     const HyperParams& hyper,
                                     const TrainingProblem& problem,
                                     const LbfgsConfig& lbfgs);

/// Minimizes the Wx surrogate with Wt fixed; updates `model.wx` in place.
SubproblemResult solve_wx_subproblem(ModelParams& model,
                                     const ReweightState& reweight,
                                     const HyperParams& hyper,
                                     const TrainingProblem& problem,
                                     const LbfgsConfig& lbfgs,
                                     bool block_part_solves = false);

/// Alternating optimization. Each outer iteration refreshes the reweighting
/// from the current parameters and then runs one phase, starting with Wx and
/// alternating. Stops after max_outer_iters or once the relative change of
/// the full objective drops below outer_tol (checked from the second
/// iteration on, so both blocks have moved).
FitResult fit(const TrainingProblem& problem, const HyperParams& hyper,
              const FitOptions& options = {},
              std::vector<std::string> part_names = {},
              std::vector<std::string> vocab = {});

}  // namespace pzsc

#endif  // PZSC_TRAINER_HPP
