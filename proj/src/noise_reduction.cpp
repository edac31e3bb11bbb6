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

#include "accfirst/noise_reduction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace accfirst {

namespace {
constexpr double kTwoPi = 6.2831853071795864769;

double log_normal_density(double x, double mean, double variance) {
  double d = x - mean;
  return -0.5 * (d * d / variance + std::log(kTwoPi * variance));
}
}  // namespace

NoiseReductionSession::NoiseReductionSession(std::vector<double> sensitive_value,
                                             Sensitivity delta,
                                             RenyiOrder alpha)
    : value_(std::move(sensitive_value)), delta_(delta), alpha_(alpha) {
  if (value_.empty()) {
    throw std::invalid_argument("NoiseReductionSession: empty sensitive value");
  }
  for (double v : value_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(
          "NoiseReductionSession: sensitive value must be finite");
    }
  }
}

void NoiseReductionSession::check_budget(RdpBudget eps_i) const {
  if (eps_history_.empty()) {
    if (!(eps_i.epsilon > 0.0)) {
      throw std::invalid_argument(
          "noise reduction: first release needs eps > 0");
    }
  } else if (eps_i.epsilon < eps_history_.back().epsilon) {
    throw std::invalid_argument(
        "noise reduction: budgets must be non-decreasing");
  }
}

double NoiseReductionSession::time_at(double eps) const {
  return gaussian_variance_for_rdp(alpha_, delta_, RdpBudget(eps));
}

ExPostOutput NoiseReductionSession::precision_weighted_release(RdpBudget eps_i,
                                                               Rng& rng) {
  if (mode_ == Mode::kBrownian) {
    throw std::logic_error("session already driven by brownian_release");
  }
  mode_ = Mode::kPrecisionWeighted;
  check_budget(eps_i);

  double increment = eps_history_.empty()
                         ? eps_i.epsilon
                         : eps_i.epsilon - eps_history_.back().epsilon;
  double sigma2 = gaussian_variance_for_rdp(alpha_, delta_, RdpBudget(increment));
  // Infinite variance is the no-op release; the stored draw carries weight 0
  // and its value is never used, so no randomness is consumed.
  std::vector<double> tilde = std::isinf(sigma2)
                                  ? value_
                                  : sample_gaussian(value_, sigma2, rng);
  tilde_history_.push_back(tilde);
  variance_history_.push_back(sigma2);
  eps_history_.push_back(eps_i);

  std::vector<double> hat;
  // A zero-variance draw pins the estimate exactly.
  std::size_t exact = variance_history_.size();
  for (std::size_t j = 0; j < variance_history_.size(); ++j) {
    if (variance_history_[j] == 0.0) {
      exact = j;
      break;
    }
  }
  if (exact < variance_history_.size()) {
    hat = tilde_history_[exact];
  } else {
    double weight_sum = 0.0;
    std::vector<double> acc(value_.size(), 0.0);
    for (std::size_t j = 0; j < variance_history_.size(); ++j) {
      if (std::isinf(variance_history_[j])) continue;
      double w = 1.0 / variance_history_[j];
      weight_sum += w;
      for (std::size_t d = 0; d < acc.size(); ++d) {
        acc[d] += w * tilde_history_[j][d];
      }
    }
    hat.resize(value_.size());
    for (std::size_t d = 0; d < hat.size(); ++d) hat[d] = acc[d] / weight_sum;
  }
  hat_history_.push_back(hat);
  return ExPostOutput{std::move(hat), eps_i};
}

ExPostOutput NoiseReductionSession::brownian_release(RdpBudget eps_i, Rng& rng) {
  if (mode_ == Mode::kPrecisionWeighted) {
    throw std::logic_error(
        "session already driven by precision_weighted_release");
  }
  mode_ = Mode::kBrownian;
  check_budget(eps_i);

  double t_i = time_at(eps_i.epsilon);
  std::vector<double> hat;
  if (eps_history_.empty()) {
    hat = sample_gaussian(value_, t_i, rng);
  } else {
    double t_prev = variance_history_.back();
    if (t_i == t_prev) {
      hat = hat_history_.back();  // unchanged budget, unchanged output
    } else {
      const std::vector<double>& prev = hat_history_.back();
      double shrink = t_i / t_prev;
      std::vector<double> mean(value_.size());
      for (std::size_t d = 0; d < mean.size(); ++d) {
        mean[d] = value_[d] + shrink * (prev[d] - value_[d]);
      }
      double variance = (t_prev - t_i) * t_i / t_prev;
      hat = sample_gaussian(mean, variance, rng);
    }
  }
  eps_history_.push_back(eps_i);
  variance_history_.push_back(t_i);
  hat_history_.push_back(hat);
  return ExPostOutput{std::move(hat), eps_i};
}

NoiseReductionSession::ConditionalLaw NoiseReductionSession::conditional_law(
    RdpBudget eps_i) const {
  if (eps_history_.empty()) {
    throw std::logic_error("conditional_law: empty session");
  }
  if (eps_i.epsilon < eps_history_.back().epsilon) {
    throw std::invalid_argument(
        "conditional_law: budgets must be non-decreasing");
  }
  double t_i = time_at(eps_i.epsilon);
  double t_prev = time_at(eps_history_.back().epsilon);
  const std::vector<double>& prev = hat_history_.back();
  if (t_i == t_prev) {
    return ConditionalLaw{prev, 0.0};
  }
  std::vector<double> mean(value_.size());
  double shrink = t_i / t_prev;
  for (std::size_t d = 0; d < mean.size(); ++d) {
    mean[d] = value_[d] + shrink * (prev[d] - value_[d]);
  }
  return ConditionalLaw{std::move(mean), (t_prev - t_i) * t_i / t_prev};
}

double trajectory_log_density(const std::vector<double>& sensitive_value,
                              Sensitivity delta, RenyiOrder alpha,
                              std::span<const RdpBudget> schedule,
                              const std::vector<std::vector<double>>& trajectory) {
  if (schedule.size() != trajectory.size() || schedule.empty()) {
    throw std::invalid_argument(
        "trajectory_log_density: schedule/trajectory size mismatch");
  }
  const std::size_t dim = sensitive_value.size();
  double log_density = 0.0;
  double t_prev = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (trajectory[i].size() != dim) {
      throw std::invalid_argument("trajectory_log_density: dimension mismatch");
    }
    if (i > 0 && !(schedule[i].epsilon > schedule[i - 1].epsilon)) {
      throw std::invalid_argument(
          "trajectory_log_density: schedule must be strictly increasing");
    }
    double t_i = gaussian_variance_for_rdp(alpha, delta, schedule[i]);
    if (i == 0) {
      for (std::size_t d = 0; d < dim; ++d) {
        log_density +=
            log_normal_density(trajectory[0][d], sensitive_value[d], t_i);
      }
    } else {
      double shrink = t_i / t_prev;
      double variance = (t_prev - t_i) * t_i / t_prev;
      for (std::size_t d = 0; d < dim; ++d) {
        double mean = sensitive_value[d] +
                      shrink * (trajectory[i - 1][d] - sensitive_value[d]);
        log_density += log_normal_density(trajectory[i][d], mean, variance);
      }
    }
    t_prev = t_i;
  }
  return log_density;
}

}  // namespace accfirst
