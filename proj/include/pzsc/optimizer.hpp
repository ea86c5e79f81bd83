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

#ifndef PZSC_OPTIMIZER_HPP
#define PZSC_OPTIMIZER_HPP

#include <functional>

#include "pzsc/error.hpp"
#include "pzsc/types.hpp"

namespace pzsc {

// Evaluates f(x) and writes the gradient into `grad` (already sized like x).
using ObjectiveFn = std::function<double(const Vector& x, Vector& grad)>;

struct IterationRecord {
  int iter = 0;
  double value = 0.0;
  double grad_norm = 0.0;   // max-abs entry
  double step = 0.0;
};

using TraceSink = std::function<void(const IterationRecord&)>;

struct LbfgsConfig {
  int memory = 10;
  int max_iters = 200;
  double grad_tol = 1e-6;       // on the max-abs gradient entry
  double c1 = 1e-4;             // Armijo sufficient decrease
  double shrink = 0.5;          // largest backtracking factor
  int max_backtracks = 40;
  TraceSink trace;              // optional

  void validate() const;
};

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Thrown when f or its gradient becomes non-finite; carries the iterate.
class OptimizerNumericError : public NumericError {
 public:
  OptimizerNumericError(const std::string& what, Vector iterate)
      : NumericError(what), iterate_(std::move(iterate)) {}
  const Vector& iterate() const { return iterate_; }

 private:
  Vector iterate_;
};

/// Limited-memory BFGS with the two-loop recursion and Armijo backtracking.
///
/// Each line search first tries the unit step along the quasi-Newton
/// direction, then the minimizer of the quadratic through f(0), f'(0) and
/// f(1) when that interpolant is convex. Failed Armijo trials shrink the step
/// by the interpolated factor clamped to [0.1, shrink]. Curvature pairs with
/// y's <= 1e-10 |y||s| are not stored and the history is reset, so the next
/// direction is steepest descent.
///
/// Accepted values never increase, and the result is deterministic in
/// (f, x0, config).
MinimizeResult minimize(const ObjectiveFn& f, const Vector& x0,
                        const LbfgsConfig& config = {});

/// max_i |g_i - (f(x + h e_i) - f(x - h e_i)) / 2h| / max(1, |g_i|)
double check_gradient(const ObjectiveFn& f, const Vector& x, double h = 1e-5);

}  // namespace pzsc

#endif  // PZSC_OPTIMIZER_HPP
