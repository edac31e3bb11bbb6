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

#ifndef ACCFIRST_COMPOSITION_HPP_
#define ACCFIRST_COMPOSITION_HPP_

#include <functional>
#include <vector>

#include "accfirst/accounting.hpp"
#include "accfirst/rng.hpp"

namespace accfirst {

enum class StopDecision { kHalt, kContinue };

// Data-dependent stopping rule together with its declared RDP budget
// eps_T. The callable sees only the released payload; it must be bound to
// the validation split at construction, disjoint from whatever the base
// release is bound to.
struct StoppingRule {
  RdpBudget eps;
  std::function<StopDecision(const std::vector<double>& payload, Rng&)> check;
};

// Budget-parameterised base release bound to the train split. Receives the
// cumulative budget (non-decreasing across calls, suitable for driving a
// noise-reduction session) and the step increment actually charged.
using BaseRelease = std::function<std::vector<double>(
    RdpBudget cumulative_eps, RdpBudget step_eps, Rng&)>;

// Chooses the next step budget from the history of outputs and budgets.
// Returning 0 makes the remaining iterations no-ops.
using BudgetSelector = std::function<RdpBudget(
    const std::vector<std::vector<double>>& outputs,
    const std::vector<RdpBudget>& eps_steps)>;

struct CompositionResult {
  int steps = 0;  // completed iterations t
  std::vector<std::vector<double>> outputs;
  std::vector<RdpBudget> eps_steps;
  RdpBudget eps_total{0.0};  // max(sum of steps, stopping rule budget)
  bool halted = false;       // true if the stopping rule fired
};

// Adaptive composition with a data-dependent stopping criterion: at each of
// at most max_iterations steps, pick a budget, release, and ask the
// stopping rule whether to halt. Zero-budget iterations are inert (no
// release, no stopper call). The total budget is
// max(sum of step budgets, stopping rule budget).
CompositionResult run_accuracy_first(const BaseRelease& base,
                                     const BudgetSelector& selector,
                                     const StoppingRule& stopper,
                                     int max_iterations, Rng& rng);

// Accuracy check releasing the validation accuracy with Gaussian noise.
// The check budget is split over the at most schedule_size - 1 possible
// invocations, so the noise variance is
//   alpha * delta_acc^2 * (schedule_size - 1) / (2 eps_check).
struct GaussianCheckConfig {
  RenyiOrder alpha;
  Sensitivity delta_acc;  // accuracy sensitivity, 1 / n_validation
  int schedule_size;      // m; at most m - 1 checks are allowed
  RdpBudget eps_check;
  double threshold;
};

class GaussianCheck {
 public:
  explicit GaussianCheck(const GaussianCheckConfig& config);

  // Halts iff accuracy + noise >= threshold (ties halt). Throws once the
  // budget of schedule_size - 1 invocations is exceeded.
  StopDecision check(double accuracy, Rng& rng);

  double noise_variance() const { return variance_; }
  // Noised accuracy from the most recent check.
  double last_noisy_value() const { return last_noisy_; }
  int invocations() const { return invocations_; }

 private:
  GaussianCheckConfig config_;
  double variance_;
  int invocations_ = 0;
  double last_noisy_;
};

// Above-threshold accuracy check: Gaussian noise on the threshold (sampled
// once per run), fresh Laplace noise on each queried accuracy. Permits an
// arbitrary number of below-threshold answers; stops at the first noisy
// value at or above the noisy threshold.
struct SvtCheckConfig {
  double sigma1;   // threshold noise std (Gaussian)
  double sigma2;   // query noise std (Laplace), variance 2 * scale^2
  double t_split;  // Gaussian fraction of the total variance
  RenyiOrder alpha;
  Sensitivity delta_acc;
  RdpBudget eps_check;
  double threshold = 0.0;
};

// Splits eps_check between the threshold Gaussian (eps1, RDP) and the query
// Laplace (eps2, pure DP at sensitivity 2 delta_acc):
//   eps1 = alpha delta_acc^2 / (2 sigma1^2),  eps2 = 2 sqrt(2) delta_acc / sigma2,
// choosing the split fraction t that minimises sigma1^2 + sigma2^2. For
// each t, sigma1 is the unique positive root of
//   eps_check s^2 - (2 sqrt(2) delta_acc / t') s - alpha delta_acc^2 / 2 = 0,
// t' = sqrt((1-t)/t), and sigma2 = t' sigma1.
SvtCheckConfig svt_calibrate(RenyiOrder alpha, Sensitivity delta_acc,
                             RdpBudget eps_check);

class SvtCheck {
 public:
  // Samples the threshold perturbation; all later queries in the run share
  // it.
  SvtCheck(const SvtCheckConfig& config, Rng& rng);

  // Throws if called after a halt.
  StopDecision check(double accuracy, Rng& rng);

  double noisy_threshold() const { return noisy_threshold_; }
  double last_noisy_value() const { return last_noisy_; }

 private:
  SvtCheckConfig config_;
  double noisy_threshold_;
  bool halted_ = false;
  double last_noisy_;
};

}  // namespace accfirst

#endif  // ACCFIRST_COMPOSITION_HPP_
