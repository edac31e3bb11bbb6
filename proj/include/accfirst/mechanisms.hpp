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

#ifndef ACCFIRST_MECHANISMS_HPP_
#define ACCFIRST_MECHANISMS_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "accfirst/accounting.hpp"
#include "accfirst/rng.hpp"

namespace accfirst {

// Output of an ex-post mechanism: the released value together with the
// privacy bound the mechanism claims for it. The two are released jointly;
// the epsilon channel is itself part of the observable output.
struct ExPostOutput {
  std::vector<double> payload;
  RdpBudget reported_eps;
};

// Adds i.i.d. N(0, variance) noise per coordinate. variance = 0 returns the
// mean exactly; infinite variance is the no-information release and returns
// the mean as an arbitrary marker value that callers must weight by zero.
std::vector<double> sample_gaussian(const std::vector<double>& mean,
                                    double variance, Rng& rng);
double sample_gaussian(double mean, double variance, Rng& rng);

// Laplace(mean, scale); variance is 2 * scale^2. Requires scale > 0.
double sample_laplace(double mean, double scale, Rng& rng);

// Finite-outcome mechanism on a fixed neighbouring input pair (X, X'),
// carrying a reported privacy bound per outcome. Every privacy definition
// in this library reduces to a finite sum on this representation, which
// makes it the substrate for exact verification oracles.
//
// Instances are immutable values and freely shareable.
class DiscretePairMechanism {
 public:
  // Probabilities must each sum to 1 within 1e-12, entries >= 0.
  // reported_eps entries are >= 0 and may be +infinity.
  DiscretePairMechanism(std::vector<std::string> labels,
                        std::vector<double> p_x, std::vector<double> p_xp,
                        std::vector<double> reported_eps);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& p_x() const { return p_x_; }
  const std::vector<double>& p_xp() const { return p_xp_; }
  const std::vector<double>& reported_eps() const { return reported_eps_; }

  // The same mechanism with the roles of X and X' exchanged, for checking
  // definitions that quantify over both orderings of the pair.
  DiscretePairMechanism swapped() const;

  // Plain-text tabular format, one outcome per line:
  //   label p_x p_xp eps
  // '#' starts a comment; eps may be "inf".
  static DiscretePairMechanism parse(std::istream& in);
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> p_x_;
  std::vector<double> p_xp_;
  std::vector<double> reported_eps_;
};

// Row-stochastic kernel from source outcomes to target outcomes: the
// randomised post-processing function, acting on outcome labels.
class StochasticMap {
 public:
  // kernel is row-major, source_size x target_size; every row sums to 1
  // within 1e-12 and entries are >= 0.
  StochasticMap(std::size_t source_size, std::size_t target_size,
                std::vector<double> kernel);

  static StochasticMap identity(std::size_t n);
  // Deterministic map merging source outcomes a and b into one target and
  // keeping all other outcomes distinct.
  static StochasticMap merge_outcomes(std::size_t n, std::size_t a,
                                      std::size_t b);

  std::size_t source_size() const { return source_size_; }
  std::size_t target_size() const { return target_size_; }
  double at(std::size_t source, std::size_t target) const {
    return kernel_[source * target_size_ + target];
  }

 private:
  std::size_t source_size_;
  std::size_t target_size_;
  std::vector<double> kernel_;
};

// Post-processing of an ex-post mechanism by a stochastic map. The map acts
// on the released label; the reported epsilon passes through unchanged and
// stays part of the joint outcome. When sources with distinct epsilon land
// on the same target, the target splits into one outcome per retained
// epsilon value, so the epsilon marginal of the output is preserved.
DiscretePairMechanism post_process(const DiscretePairMechanism& mech,
                                   const StochasticMap& map);

// The mechanism that reveals its input with probability 1/2 and releases
// nothing otherwise, wrapped to report eps = infinity on a reveal and
// eps = 0 on the empty release. Not RDP for any finite budget, yet ex-post
// private; the standard stress fixture for ex-post definitions.
DiscretePairMechanism pathological_mechanism();

// Binary randomized response staying on the true answer with probability
// `p`, reporting its exact pure-DP bound ln(p / (1 - p)) on both outcomes.
DiscretePairMechanism randomized_response(double p);

}  // namespace accfirst

#endif  // ACCFIRST_MECHANISMS_HPP_
