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

#ifndef ACCFIRST_ACCOUNTING_HPP_
#define ACCFIRST_ACCOUNTING_HPP_

#include <span>
#include <vector>

namespace accfirst {

// Order of a Renyi divergence. Orders 1 and infinity are not supported by
// the ex-post accounting in this library and are rejected at construction.
struct RenyiOrder {
  explicit RenyiOrder(double alpha_in);
  double alpha;
};

// Privacy budget in nats of Renyi divergence. Non-negative; +infinity is a
// valid value (used e.g. by fixtures that reveal their input outright).
struct RdpBudget {
  explicit RdpBudget(double epsilon_in);
  double epsilon;
};

// (epsilon, delta) budget of approximate DP.
struct AdpBudget {
  AdpBudget(double epsilon_in, double delta_in);
  double epsilon;
  double delta;
};

// l2 sensitivity of a query. Strictly positive and finite.
struct Sensitivity {
  explicit Sensitivity(double value_in);
  double value;
};

// Strictly increasing list of finite RDP budgets: the release grid for
// noise reduction.
struct EpsilonSchedule {
  explicit EpsilonSchedule(std::vector<RdpBudget> values_in);
  std::vector<RdpBudget> values;
};

// Variance of Gaussian noise that makes a release of a Delta-sensitive
// query (alpha, eps)-RDP: alpha * Delta^2 / (2 eps). eps = 0 maps to an
// explicitly infinite variance (the no-information release), never to a
// floating-point overflow.
double gaussian_variance_for_rdp(RenyiOrder alpha, Sensitivity delta,
                                 RdpBudget eps);

// Exact inverse of gaussian_variance_for_rdp. Infinite variance maps back
// to eps = 0.
RdpBudget rdp_epsilon_of_gaussian(RenyiOrder alpha, Sensitivity delta,
                                  double variance);

// RDP -> ADP conversion at a target delta in (0, 1):
// eps_adp = eps_rdp + ln(1/delta) / (alpha - 1).
AdpBudget rdp_to_adp(RenyiOrder alpha, RdpBudget eps, double target_delta);

// Total budget of a stopped composition: max(sum of step budgets, the
// stopping rule's budget). The empty sum is 0.
RdpBudget total_with_stopping(std::span<const RdpBudget> eps_steps,
                              RdpBudget stopping_rule_eps);

// `count` geometrically spaced values from lo to hi inclusive.
// Requires 0 < lo < hi and count >= 2.
EpsilonSchedule log_spaced_schedule(double lo, double hi, int count);

}  // namespace accfirst

#endif  // ACCFIRST_ACCOUNTING_HPP_
