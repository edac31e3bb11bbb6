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

#ifndef ACCFIRST_VERIFICATION_HPP_
#define ACCFIRST_VERIFICATION_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "accfirst/accounting.hpp"
#include "accfirst/mechanisms.hpp"
#include "accfirst/rng.hpp"

namespace accfirst {

// Value of the ex-post RDP defining expectation
//   E_{(y,eps) ~ M(X')} [ e^{(1-alpha) eps} (p_X(y,eps) / p_X'(y,eps))^alpha ].
// The mechanism satisfies alpha-ex-post RDP iff lhs <= 1.
struct ExPostRdpValue {
  double lhs;
  RenyiOrder alpha;
  bool satisfied() const { return lhs <= 1.0; }
};

// Exact finite-sum evaluation on a discrete mechanism, using the explicit
// conventions e^{(1-alpha)*inf} = 0 and 0 * inf = 0. An outcome that X can
// produce but X' cannot makes the value +infinity unless its reported eps
// is infinite.
ExPostRdpValue expost_rdp_lhs_exact(const DiscretePairMechanism& mech,
                                    RenyiOrder alpha);

// One draw from a mechanism under the neighbour X': the log density ratio
// ln p_X / p_X' at the draw, together with the reported epsilon.
struct LogRatioSample {
  double log_ratio;
  double reported_eps;
};

struct MonteCarloEstimate {
  double estimate;
  double std_error;
  std::size_t samples;
};

// Monte Carlo estimate of the ex-post RDP expectation for mechanisms with
// continuous output, from n >= 10^4 draws under X'. A non-finite summand
// (e.g. a +infinity density ratio at finite eps) is reported by throwing,
// never averaged away.
MonteCarloEstimate expost_rdp_lhs_monte_carlo(
    const std::function<LogRatioSample(Rng&)>& sample_under_neighbour,
    RenyiOrder alpha, std::size_t n, Rng& rng);

// Renyi divergence of order alpha between N(m, var) and N(m', var) with
// |m - m'| = mean_distance: alpha * distance^2 / (2 var).
double renyi_divergence_gaussians(RenyiOrder alpha, double mean_distance,
                                  double variance);

// Exact Renyi divergence of the joint (label, eps) output of a discrete
// mechanism, D_alpha(M(X) || M(X')). +infinity when absolute continuity
// fails.
double renyi_divergence_exact(const DiscretePairMechanism& mech,
                              RenyiOrder alpha);

// Exact probability, under X, that the privacy loss ln p_X/p_X' at the
// drawn outcome exceeds the outcome's reported eps. The mechanism is
// delta-probabilistically ex-post private iff this mass is <= delta for
// both orderings of the pair (use mech.swapped() for the other direction).
double probabilistic_expost_violation_mass(const DiscretePairMechanism& mech);

// A mechanism plus post-processing witnessing that delta-probabilistic
// ex-post privacy is not post-processing immune: violation mass <= delta
// before the merge and > delta after it (maximised over both orderings).
struct PpiWitness {
  DiscretePairMechanism mechanism;
  StochasticMap map;
  double violation_before;
  double violation_after;
};

// Deterministic grid search over 4-outcome mechanisms with constant
// reported eps, merging the first two outcomes. Probabilities are multiples
// of grid_resolution; the first witness in scan order is returned. Throws
// if the grid is exhausted without a witness.
PpiWitness ppi_counterexample_search(double delta, double grid_resolution,
                                     double constant_eps);

// Checks the bounded-eps consequence: a mechanism whose exact ex-post RDP
// value is <= 1 and whose reported eps is everywhere <= eps_cap must have
// joint Renyi divergence <= eps_cap. Throws if the preconditions fail.
bool filter_theorem_check(const DiscretePairMechanism& mech, RdpBudget eps_cap,
                          RenyiOrder alpha);

// Joint mechanism of two independent releases; reported eps values add.
DiscretePairMechanism compose_independent(const DiscretePairMechanism& first,
                                          const DiscretePairMechanism& second);

// Adaptive two-stage composition: the second stage is chosen by the first
// stage's outcome (one branch mechanism per outcome). Reported eps values
// add along each path. Guards against joint outcome spaces above 10^5.
DiscretePairMechanism compose_adaptive(
    const DiscretePairMechanism& first,
    const std::vector<DiscretePairMechanism>& branch_per_outcome);

// Exact ex-post RDP value of an adaptive composition.
ExPostRdpValue composition_check(
    const DiscretePairMechanism& first,
    const std::vector<DiscretePairMechanism>& branch_per_outcome,
    RenyiOrder alpha);

}  // namespace accfirst

#endif  // ACCFIRST_VERIFICATION_HPP_
