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

#include "accfirst/accounting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace accfirst {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

RenyiOrder::RenyiOrder(double alpha_in) : alpha(alpha_in) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("RenyiOrder: alpha must be finite and > 1, got " +
                                std::to_string(alpha_in));
  }
}

RdpBudget::RdpBudget(double epsilon_in) : epsilon(epsilon_in) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("RdpBudget: epsilon must be >= 0, got " +
                                std::to_string(epsilon_in));
  }
}

AdpBudget::AdpBudget(double epsilon_in, double delta_in)
    : epsilon(epsilon_in), delta(delta_in) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("AdpBudget: epsilon must be >= 0");
  }
  if (!(delta >= 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("AdpBudget: delta must be in [0, 1)");
  }
}

Sensitivity::Sensitivity(double value_in) : value(value_in) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(
        "Sensitivity: value must be finite and > 0, got " +
        std::to_string(value_in));
  }
}

EpsilonSchedule::EpsilonSchedule(std::vector<RdpBudget> values_in)
    : values(std::move(values_in)) {
  if (values.empty()) {
    throw std::invalid_argument("EpsilonSchedule: empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].epsilon)) {
      throw std::invalid_argument("EpsilonSchedule: values must be finite");
    }
    if (i > 0 && !(values[i].epsilon > values[i - 1].epsilon)) {
      throw std::invalid_argument(
          "EpsilonSchedule: values must be strictly increasing");
    }
  }
}

double gaussian_variance_for_rdp(RenyiOrder alpha, Sensitivity delta,
                                 RdpBudget eps) {
  if (eps.epsilon == 0.0) return kInf;
  return alpha.alpha * delta.value * delta.value / (2.0 * eps.epsilon);
}

RdpBudget rdp_epsilon_of_gaussian(RenyiOrder alpha, Sensitivity delta,
                                  double variance) {
  if (std::isnan(variance) || variance <= 0.0) {
    throw std::invalid_argument("rdp_epsilon_of_gaussian: variance must be > 0");
  }
  if (std::isinf(variance)) return RdpBudget(0.0);
  return RdpBudget(alpha.alpha * delta.value * delta.value / (2.0 * variance));
}

AdpBudget rdp_to_adp(RenyiOrder alpha, RdpBudget eps, double target_delta) {
  if (!(target_delta > 0.0) || !(target_delta < 1.0)) {
    throw std::invalid_argument("rdp_to_adp: delta must be in (0, 1)");
  }
  double adp_eps =
      eps.epsilon + std::log(1.0 / target_delta) / (alpha.alpha - 1.0);
  return AdpBudget(adp_eps, target_delta);
}

RdpBudget total_with_stopping(std::span<const RdpBudget> eps_steps,
                              RdpBudget stopping_rule_eps) {
  double sum = 0.0;
  for (const RdpBudget& e : eps_steps) sum += e.epsilon;
  return RdpBudget(std::max(sum, stopping_rule_eps.epsilon));
}

EpsilonSchedule log_spaced_schedule(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    throw std::invalid_argument("log_spaced_schedule: need 0 < lo < hi");
  }
  if (count < 2) {
    throw std::invalid_argument("log_spaced_schedule: need count >= 2");
  }
  std::vector<RdpBudget> values;
  values.reserve(static_cast<std::size_t>(count));
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      values.emplace_back(lo);
    } else if (i == count - 1) {
      values.emplace_back(hi);  // endpoints exact
    } else {
      double t = static_cast<double>(i) / (count - 1);
      values.emplace_back(std::exp(log_lo + t * (log_hi - log_lo)));
    }
  }
  return EpsilonSchedule(std::move(values));
}

}  // namespace accfirst
