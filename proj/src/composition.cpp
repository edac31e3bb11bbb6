// Copyright 2026 The accfirst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "accfirst/composition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "accfirst/mechanisms.hpp"

namespace accfirst {

CompositionResult run_accuracy_first(const BaseRelease& base,
                                     const BudgetSelector& selector,
                                     const StoppingRule& stopper,
                                     int max_iterations, Rng& rng) {
  if (max_iterations < 1) {
    throw std::invalid_argument("run_accuracy_first: need max_iterations >= 1");
  }
  CompositionResult result;
  double cumulative = 0.0;
  for (int i = 1; i <= max_iterations; ++i) {
    RdpBudget step = selector(result.outputs, result.eps_steps);
    std::vector<double> payload;
    if (step.epsilon > 0.0) {
      cumulative += step.epsilon;
      payload = base(RdpBudget(cumulative), step, rng);
    }
    result.eps_steps.push_back(step);
    result.outputs.push_back(payload);
    result.steps = i;
    if (step.epsilon > 0.0 &&
        stopper.check(result.outputs.back(), rng) == StopDecision::kHalt) {
      result.halted = true;
      break;
    }
  }
  result.eps_total = total_with_stopping(result.eps_steps, stopper.eps);
  return result;
}

GaussianCheck::GaussianCheck(const GaussianCheckConfig& config)
    : config_(config), last_noisy_(std::numeric_limits<double>::quiet_NaN()) {
  if (config_.schedule_size < 2) {
    throw std::invalid_argument("GaussianCheck: need schedule_size >= 2");
  }
  variance_ = config_.alpha.alpha * config_.delta_acc.value *
              config_.delta_acc.value * (config_.schedule_size - 1) /
              (2.0 * config_.eps_check.epsilon);
  if (!(variance_ >= 0.0)) {
    throw std::invalid_argument("GaussianCheck: bad noise variance");
  }
}

StopDecision GaussianCheck::check(double accuracy, Rng& rng) {
  if (++invocations_ > config_.schedule_size - 1) {
    throw std::runtime_error(
        "GaussianCheck: invocation budget of schedule_size - 1 exceeded");
  }
  last_noisy_ = sample_gaussian(accuracy, variance_, rng);
  return last_noisy_ >= config_.threshold ? StopDecision::kHalt
                                          : StopDecision::kContinue;
}

SvtCheckConfig svt_calibrate(RenyiOrder alpha, Sensitivity delta_acc,
                             RdpBudget eps_check) {
  if (!(eps_check.epsilon > 0.0) || !std::isfinite(eps_check.epsilon)) {
    throw std::invalid_argument("svt_calibrate: eps_check must be finite > 0");
  }
  const double a = alpha.alpha;
  const double d = delta_acc.value;
  const double eps = eps_check.epsilon;

  auto sigma1_at = [&](double t) {
    double t_prime = std::sqrt((1.0 - t) / t);
    double b = 2.0 * std::sqrt(2.0) * d / t_prime;
    // Unique positive root of eps s^2 - b s - a d^2 / 2 = 0.
    return (b + std::sqrt(b * b + 2.0 * eps * a * d * d)) / (2.0 * eps);
  };
  auto total_variance_at = [&](double t) {
    double s1 = sigma1_at(t);
    return s1 * s1 / t;  // sigma1^2 = t * (sigma1^2 + sigma2^2)
  };

  // Coarse scan for a bracket, then golden-section refinement to 1e-6 on t.
  const double lo_bound = 1e-9;
  const double hi_bound = 1.0 - 1e-9;
  const int coarse = 1024;
  int best_k = 1;
  double best_v = std::numeric_limits<double>::infinity();
  for (int k = 1; k < coarse; ++k) {
    double t = static_cast<double>(k) / coarse;
    double v = total_variance_at(t);
    if (v < best_v) {
      best_v = v;
      best_k = k;
    }
  }
  double lo = std::max(lo_bound, static_cast<double>(best_k - 1) / coarse);
  double hi = std::min(hi_bound, static_cast<double>(best_k + 1) / coarse);
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = total_variance_at(x1);
  double f2 = total_variance_at(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = total_variance_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = total_variance_at(x2);
    }
  }
  double t_opt = 0.5 * (lo + hi);
  double sigma1 = sigma1_at(t_opt);
  double t_prime = std::sqrt((1.0 - t_opt) / t_opt);
  double sigma2 = sigma1 * t_prime;

  double eps1 = a * d * d / (2.0 * sigma1 * sigma1);
  double eps2 = 2.0 * std::sqrt(2.0) * d / sigma2;
  if (std::abs(eps1 + eps2 - eps) > 1e-9 * eps) {
    throw std::runtime_error("svt_calibrate: budget split failed to converge");
  }
  return SvtCheckConfig{sigma1, sigma2,   t_opt, alpha,
                        delta_acc, eps_check, 0.0};
}

SvtCheck::SvtCheck(const SvtCheckConfig& config, Rng& rng)
    : config_(config), last_noisy_(std::numeric_limits<double>::quiet_NaN()) {
  if (config_.sigma1 < 0.0 || config_.sigma2 < 0.0) {
    throw std::invalid_argument("SvtCheck: negative noise scale");
  }
  noisy_threshold_ = sample_gaussian(config_.threshold,
                                     config_.sigma1 * config_.sigma1, rng);
}

StopDecision SvtCheck::check(double accuracy, Rng& rng) {
  if (halted_) {
    throw std::logic_error("SvtCheck: used after halt");
  }
  double noisy = accuracy;
  if (config_.sigma2 > 0.0) {
    // Laplace with variance sigma2^2 has scale sigma2 / sqrt(2).
    noisy += sample_laplace(0.0, config_.sigma2 / std::sqrt(2.0), rng);
  }
  last_noisy_ = noisy;
  if (noisy >= noisy_threshold_) {
    halted_ = true;
    return StopDecision::kHalt;
  }
  return StopDecision::kContinue;
}

}  // namespace accfirst
