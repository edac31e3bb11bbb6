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

#include "accfirst/verification.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace accfirst {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxJointOutcomes = 100000;
}  // namespace

ExPostRdpValue expost_rdp_lhs_exact(const DiscretePairMechanism& mech,
                                    RenyiOrder alpha) {
  const double a = alpha.alpha;
  double lhs = 0.0;
  for (std::size_t i = 0; i < mech.size(); ++i) {
    double px = mech.p_x()[i];
    double pxp = mech.p_xp()[i];
    double eps = mech.reported_eps()[i];
    if (pxp == 0.0) {
      if (px == 0.0) continue;  // unreachable outcome
      // Density ratio is infinite. e^{(1-alpha) inf} = 0 kills the term by
      // the 0 * inf = 0 convention; at finite eps the expectation diverges.
      if (std::isinf(eps)) continue;
      return ExPostRdpValue{kInf, alpha};
    }
    if (std::isinf(eps)) continue;  // e^{(1-alpha) inf} = 0
    if (px == 0.0) continue;        // ratio^alpha = 0
    lhs += std::exp((1.0 - a) * eps + a * (std::log(px) - std::log(pxp)) +
                    std::log(pxp));
  }
  return ExPostRdpValue{lhs, alpha};
}

MonteCarloEstimate expost_rdp_lhs_monte_carlo(
    const std::function<LogRatioSample(Rng&)>& sample_under_neighbour,
    RenyiOrder alpha, std::size_t n, Rng& rng) {
  if (n < 10000) {
    throw std::invalid_argument("expost_rdp_lhs_monte_carlo: need n >= 10^4");
  }
  const double a = alpha.alpha;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    LogRatioSample s = sample_under_neighbour(rng);
    double summand = std::exp((1.0 - a) * s.reported_eps + a * s.log_ratio);
    if (!std::isfinite(summand)) {
      throw std::runtime_error(
          "expost_rdp_lhs_monte_carlo: non-finite summand at sample " +
          std::to_string(k));
    }
    sum += summand;
    sum_sq += summand * summand;
  }
  double mean = sum / static_cast<double>(n);
  double variance =
      (sum_sq - static_cast<double>(n) * mean * mean) / (static_cast<double>(n) - 1.0);
  if (variance < 0.0) variance = 0.0;
  return MonteCarloEstimate{mean, std::sqrt(variance / static_cast<double>(n)),
                            n};
}

double renyi_divergence_gaussians(RenyiOrder alpha, double mean_distance,
                                  double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument(
        "renyi_divergence_gaussians: variance must be > 0");
  }
  if (std::isnan(mean_distance) || mean_distance < 0.0) {
    throw std::invalid_argument(
        "renyi_divergence_gaussians: distance must be >= 0");
  }
  return alpha.alpha * mean_distance * mean_distance / (2.0 * variance);
}

double renyi_divergence_exact(const DiscretePairMechanism& mech,
                              RenyiOrder alpha) {
  const double a = alpha.alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < mech.size(); ++i) {
    double px = mech.p_x()[i];
    double pxp = mech.p_xp()[i];
    if (pxp == 0.0) {
      if (px > 0.0) return kInf;  // not absolutely continuous
      continue;
    }
    if (px == 0.0) continue;
    sum += std::exp(a * (std::log(px) - std::log(pxp)) + std::log(pxp));
  }
  return std::log(sum) / (a - 1.0);
}

double probabilistic_expost_violation_mass(const DiscretePairMechanism& mech) {
  double mass = 0.0;
  for (std::size_t i = 0; i < mech.size(); ++i) {
    double px = mech.p_x()[i];
    if (px == 0.0) continue;
    double pxp = mech.p_xp()[i];
    double plf = pxp == 0.0 ? kInf : std::log(px) - std::log(pxp);
    // inf > inf is false, so an infinite reported eps is never violated.
    if (plf > mech.reported_eps()[i]) mass += px;
  }
  return mass;
}

namespace {

// Violation mass of a 4-outcome candidate and of its 3-outcome merge,
// maximised over both orderings, without materialising mechanism objects.
double directed_mass(const double* p, const double* q, double eps, int n) {
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    double plf = q[i] == 0.0 ? kInf : std::log(p[i]) - std::log(q[i]);
    if (plf > eps) mass += p[i];
  }
  return mass;
}

}  // namespace

PpiWitness ppi_counterexample_search(double delta, double grid_resolution,
                                     double constant_eps) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("ppi_counterexample_search: delta in (0,1)");
  }
  if (!(grid_resolution > 0.0) || !(grid_resolution < 0.5)) {
    throw std::invalid_argument("ppi_counterexample_search: bad resolution");
  }
  const int n = static_cast<int>(std::lround(1.0 / grid_resolution));
  const double h = grid_resolution;

  // Outcomes 0 and 1 scan the grid; the remaining mass splits evenly over
  // outcomes 2 and 3. Outcomes 0 and 1 are merged by the post-processing.
  for (int ia0 = 1; ia0 < n; ++ia0) {
    double a0 = ia0 * h;
    for (int ib0 = 1; ib0 < n; ++ib0) {
      double b0 = ib0 * h;
      if (a0 + 2 * h >= 1.0 || b0 + 2 * h >= 1.0) continue;
      for (int ia1 = 1; ia0 * h + ia1 * h < 1.0 - h; ++ia1) {
        double a1 = ia1 * h;
        double ra = (1.0 - a0 - a1) / 2.0;
        if (!(ra > 0.0)) break;
        for (int ib1 = 1; ib0 * h + ib1 * h < 1.0 - h; ++ib1) {
          double b1 = ib1 * h;
          double rb = (1.0 - b0 - b1) / 2.0;
          if (!(rb > 0.0)) break;
          const double p[4] = {a0, a1, ra, ra};
          const double q[4] = {b0, b1, rb, rb};
          double before = std::max(directed_mass(p, q, constant_eps, 4),
                                   directed_mass(q, p, constant_eps, 4));
          if (before > delta) continue;
          const double pm[3] = {a0 + a1, ra, ra};
          const double qm[3] = {b0 + b1, rb, rb};
          double after = std::max(directed_mass(pm, qm, constant_eps, 3),
                                  directed_mass(qm, pm, constant_eps, 3));
          if (after > delta) {
            DiscretePairMechanism mech(
                {"o0", "o1", "o2", "o3"}, {a0, a1, ra, ra}, {b0, b1, rb, rb},
                {constant_eps, constant_eps, constant_eps, constant_eps});
            return PpiWitness{std::move(mech),
                              StochasticMap::merge_outcomes(4, 0, 1), before,
                              after};
          }
        }
      }
    }
  }
  throw std::runtime_error(
      "ppi_counterexample_search: grid exhausted without witness");
}

bool filter_theorem_check(const DiscretePairMechanism& mech, RdpBudget eps_cap,
                          RenyiOrder alpha) {
  for (double e : mech.reported_eps()) {
    if (e > eps_cap.epsilon) {
      throw std::invalid_argument(
          "filter_theorem_check: reported eps exceeds the cap");
    }
  }
  ExPostRdpValue v = expost_rdp_lhs_exact(mech, alpha);
  if (!(v.lhs <= 1.0 + 1e-12)) {
    throw std::invalid_argument(
        "filter_theorem_check: mechanism is not ex-post RDP");
  }
  if (std::isinf(eps_cap.epsilon)) return true;
  return renyi_divergence_exact(mech, alpha) <= eps_cap.epsilon + 1e-12;
}

DiscretePairMechanism compose_adaptive(
    const DiscretePairMechanism& first,
    const std::vector<DiscretePairMechanism>& branch_per_outcome) {
  if (branch_per_outcome.size() != first.size()) {
    throw std::invalid_argument("compose_adaptive: one branch per outcome");
  }
  std::size_t joint = 0;
  for (const auto& b : branch_per_outcome) joint += b.size();
  if (joint > kMaxJointOutcomes) {
    throw std::invalid_argument("compose_adaptive: joint outcome space too large");
  }
  std::vector<std::string> labels;
  std::vector<double> px, pxp, eps;
  labels.reserve(joint);
  for (std::size_t i = 0; i < first.size(); ++i) {
    const DiscretePairMechanism& b = branch_per_outcome[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      labels.push_back(first.labels()[i] + "," + b.labels()[j]);
      px.push_back(first.p_x()[i] * b.p_x()[j]);
      pxp.push_back(first.p_xp()[i] * b.p_xp()[j]);
      eps.push_back(first.reported_eps()[i] + b.reported_eps()[j]);
    }
  }
  return DiscretePairMechanism(std::move(labels), std::move(px),
                               std::move(pxp), std::move(eps));
}

DiscretePairMechanism compose_independent(const DiscretePairMechanism& first,
                                          const DiscretePairMechanism& second) {
  return compose_adaptive(
      first, std::vector<DiscretePairMechanism>(first.size(), second));
}

ExPostRdpValue composition_check(
    const DiscretePairMechanism& first,
    const std::vector<DiscretePairMechanism>& branch_per_outcome,
    RenyiOrder alpha) {
  return expost_rdp_lhs_exact(compose_adaptive(first, branch_per_outcome),
                              alpha);
}

}  // namespace accfirst
