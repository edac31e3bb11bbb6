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

#ifndef ACCFIRST_NOISE_REDUCTION_HPP_
#define ACCFIRST_NOISE_REDUCTION_HPP_

#include <span>
#include <vector>

#include "accfirst/accounting.hpp"
#include "accfirst/mechanisms.hpp"
#include "accfirst/rng.hpp"

namespace accfirst {

// Running state of a noise-reduction mechanism over a fixed sensitive
// vector f(X): Gaussian releases at a non-decreasing budget grid whose
// total privacy cost equals that of the final (least noisy) release.
//
// Two samplers realise the same output law and may be driven step by step:
//
//  * precision_weighted_release: draw an independent Gaussian per step at
//    the incremental budget and release the inverse-variance weighted mean
//    of all draws so far.
//  * brownian_release: draw the next point directly from the analytic
//    conditional Gaussian at time T_i = alpha * Delta^2 / (2 eps_i).
//
// Coordinates of f(X) receive independent noise on a shared budget grid.
// A session locks into whichever sampler is called first; the order alpha
// is fixed for the whole session. A session is single-owner mutable state;
// run independent sessions (with independent Rng streams) in parallel.
class NoiseReductionSession {
 public:
  NoiseReductionSession(std::vector<double> sensitive_value,
                        Sensitivity delta, RenyiOrder alpha);

  // One step of the sequential precision-weighted Gaussian mechanism at
  // cumulative budget eps_i. Requires eps_i >= the previous budget (strictly
  // positive for the first release). eps_i equal to the previous budget is
  // a no-op release: the previous output is returned exactly.
  ExPostOutput precision_weighted_release(RdpBudget eps_i, Rng& rng);

  // One step of the Brownian mechanism at cumulative budget eps_i, sampled
  // from the conditional law given the releases so far. Same preconditions
  // and the same output distribution as precision_weighted_release.
  ExPostOutput brownian_release(RdpBudget eps_i, Rng& rng);

  // Exact conditional mean and per-coordinate variance of the next release
  // at budget eps_i given the session history. Identical for both samplers.
  // Requires a nonempty session and eps_i >= the last budget.
  struct ConditionalLaw {
    std::vector<double> mean;
    double variance;
  };
  ConditionalLaw conditional_law(RdpBudget eps_i) const;

  std::size_t release_count() const { return eps_history_.size(); }
  const std::vector<RdpBudget>& eps_history() const { return eps_history_; }
  // Released values s_hat_1..i.
  const std::vector<std::vector<double>>& release_history() const {
    return hat_history_;
  }
  // Raw (unweighted) draws s_tilde_1..i; populated by the precision-weighted
  // sampler only.
  const std::vector<std::vector<double>>& raw_draw_history() const {
    return tilde_history_;
  }
  // Per-step sigma_i^2 (precision-weighted) or T_i (Brownian).
  const std::vector<double>& noise_variance_history() const {
    return variance_history_;
  }
  const std::vector<double>& sensitive_value() const { return value_; }
  Sensitivity sensitivity() const { return delta_; }
  RenyiOrder order() const { return alpha_; }

 private:
  enum class Mode { kUnset, kPrecisionWeighted, kBrownian };

  void check_budget(RdpBudget eps_i) const;
  double time_at(double eps) const;  // T = alpha Delta^2 / (2 eps)

  std::vector<double> value_;
  Sensitivity delta_;
  RenyiOrder alpha_;
  Mode mode_ = Mode::kUnset;
  std::vector<RdpBudget> eps_history_;
  std::vector<std::vector<double>> tilde_history_;  // raw draws, Alg. 2 only
  std::vector<std::vector<double>> hat_history_;    // released values
  std::vector<double> variance_history_;  // sigma_i^2 (pw) or T_i (brownian)
};

// Log density of a full release trajectory under a hypothesised sensitive
// value, accumulated from the conditional Gaussian laws. `trajectory` holds
// the released vectors in order; `schedule` the budgets they were released
// at. Used by the Monte Carlo privacy checks, where the log density ratio
// between two neighbouring values is the quantity of interest.
double trajectory_log_density(const std::vector<double>& sensitive_value,
                              Sensitivity delta, RenyiOrder alpha,
                              std::span<const RdpBudget> schedule,
                              const std::vector<std::vector<double>>& trajectory);

}  // namespace accfirst

#endif  // ACCFIRST_NOISE_REDUCTION_HPP_
