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

#include "pzsc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace pzsc {

namespace {

struct CurvaturePair {
  Vector s;
  Vector y;
  double rho;
};

double evaluate(const ObjectiveFn& f, const Vector& x, Vector& grad,
                const char* where) {
  const double value = f(x, grad);
  if (!std::isfinite(value) || !grad.allFinite()) {
    throw OptimizerNumericError(std::string("non-finite objective or gradient ") +
                                    where,
                                x);
  }
  return value;
}

// Two-loop recursion: returns -H g for the implicit inverse Hessian H.
Vector two_loop(const std::deque<CurvaturePair>& history, const Vector& grad) {
  Vector q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  const auto& last = history.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return -q;
}

}  // namespace

void LbfgsConfig::validate() const {
  if (memory < 1) throw InputError("L-BFGS memory must be positive");
  if (max_iters < 1) throw InputError("L-BFGS max_iters must be positive");
  if (!(grad_tol > 0.0)) throw InputError("L-BFGS grad_tol must be positive");
  if (!(c1 > 0.0 && c1 < 1.0)) throw InputError("Armijo c1 must be in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw InputError("backtracking shrink must be in (0, 1)");
  }
  if (max_backtracks < 1) throw InputError("max_backtracks must be positive");
}

MinimizeResult minimize(const ObjectiveFn& f, const Vector& x0,
                        const LbfgsConfig& config) {
  config.validate();
  MinimizeResult result;
  result.x = x0;
  Vector grad(x0.size());
  double value = evaluate(f, result.x, grad, "at the starting point");
  result.value = value;

  std::deque<CurvaturePair> history;
  Vector trial_x(x0.size());
  Vector trial_grad(x0.size());
  Vector best_x(x0.size());
  Vector best_grad(x0.size());

  for (int iter = 0;; ++iter) {
    const double gmax = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
    result.iterations = iter;
    if (gmax <= config.grad_tol) {
      result.converged = true;
      break;
    }
    if (iter >= config.max_iters) break;

    Vector direction;
    double step = 1.0;
    if (history.empty()) {
      direction = -grad;
      step = 1.0 / std::max(1.0, grad.norm());
    } else {
      direction = two_loop(history, grad);
    }
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      history.clear();
      direction = -grad;
      step = 1.0 / std::max(1.0, grad.norm());
      slope = grad.dot(direction);
    }

    // Armijo backtracking with a quadratic-interpolation trial.
    bool accepted = false;
    double best_value = value;
    double best_step = 0.0;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      trial_x = result.x + step * direction;
      const double trial_value = evaluate(f, trial_x, trial_grad, "during line search");
      const double curvature = trial_value - value - slope * step;
      const double interpolated =
          curvature > 0.0 ? -slope * step * step / (2.0 * curvature) : 0.0;
      if (trial_value <= value + config.c1 * step * slope) {
        accepted = true;
        best_value = trial_value;
        best_step = step;
        best_x = trial_x;
        best_grad = trial_grad;
        if (bt == 0 && curvature > 0.0 &&
            std::abs(interpolated - step) > 1e-10 * step &&
            interpolated < 10.0 * step) {
          trial_x = result.x + interpolated * direction;
          const double refined = evaluate(f, trial_x, trial_grad, "during line search");
          if (refined < best_value &&
              refined <= value + config.c1 * interpolated * slope) {
            best_value = refined;
            best_step = interpolated;
            best_x = trial_x;
            best_grad = trial_grad;
          }
        }
        break;
      }
      const double factor =
          curvature > 0.0 ? std::clamp(interpolated / step, 0.1, config.shrink)
                          : config.shrink;
      step *= factor;
    }

    if (!accepted) {
      if (history.empty()) break;   // no progress even along -g
      history.clear();
      continue;
    }

    Vector s = best_x - result.x;
    Vector y = best_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      history.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(history.size()) > config.memory) history.pop_front();
    } else {
      history.clear();
    }
    result.x = best_x;
    grad = best_grad;
    value = best_value;
    result.value = value;
    if (config.trace) {
      config.trace({iter + 1, value, grad.cwiseAbs().maxCoeff(), best_step});
    }
  }
  return result;
}

double check_gradient(const ObjectiveFn& f, const Vector& x, double h) {
  Vector grad(x.size());
  f(x, grad);
  Vector scratch(x.size());
  Vector probe = x;
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double plus = f(probe, scratch);
    probe(i) = x(i) - h;
    const double minus = f(probe, scratch);
    probe(i) = x(i);
    const double numeric = (plus - minus) / (2.0 * h);
    worst = std::max(worst, std::abs(grad(i) - numeric) /
                                std::max(1.0, std::abs(grad(i))));
  }
  return worst;
}

}  // namespace pzsc
