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
#include <vector>

#include "doctest.h"
#include "test_util.hpp"

using namespace accfirst;
using namespace accfirst_test;

TEST_CASE("precision weighting with symmetric variances averages the draws") {
  // eps_2 - eps_1 = eps_1 gives two equal per-step variances.
  Rng rng(11);
  NoiseReductionSession session({0.0}, Sensitivity(1), RenyiOrder(2));
  session.precision_weighted_release(RdpBudget(0.3), rng);
  session.precision_weighted_release(RdpBudget(0.6), rng);
  const auto& tilde = session.raw_draw_history();
  REQUIRE(tilde.size() == 2);
  double expected = 0.5 * (tilde[0][0] + tilde[1][0]);
  CHECK(session.release_history()[1][0] ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("unchanged budget repeats the previous output exactly") {
  Rng rng(12);
  NoiseReductionSession pw({1.0, -2.0}, Sensitivity(1), RenyiOrder(20));
  pw.precision_weighted_release(RdpBudget(0.1), rng);
  ExPostOutput first = pw.precision_weighted_release(RdpBudget(0.25), rng);
  ExPostOutput repeat = pw.precision_weighted_release(RdpBudget(0.25), rng);
  CHECK(repeat.payload == first.payload);

  NoiseReductionSession bm({1.0, -2.0}, Sensitivity(1), RenyiOrder(20));
  bm.brownian_release(RdpBudget(0.1), rng);
  ExPostOutput b1 = bm.brownian_release(RdpBudget(0.25), rng);
  ExPostOutput b2 = bm.brownian_release(RdpBudget(0.25), rng);
  CHECK(b2.payload == b1.payload);
}

TEST_CASE("first release follows the calibrated marginal law") {
  // T_1 = alpha Delta^2 / (2 eps_1) = 20 / 0.02 = 1000 at the grid start.
  const double t1 = gaussian_variance_for_rdp(RenyiOrder(20), Sensitivity(1),
                                              RdpBudget(0.01));
  CHECK(t1 == doctest::Approx(1000.0));
  Rng rng(13);
  const std::size_t n = 200000;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    NoiseReductionSession s({0.0}, Sensitivity(1), RenyiOrder(20));
    xs[i] = s.brownian_release(RdpBudget(0.01), rng).payload[0];
  }
  Moments m = moments(xs);
  CHECK(std::abs(m.mean) < 4.0 * m.mean_std_error);
  CHECK(std::abs(m.variance - t1) < 0.03 * t1);
}

TEST_CASE("conditional law matches the closed form") {
  // alpha = 2, Delta = 1: T = 1 / eps. History at eps = 0.5 gives T_prev = 2;
  // querying eps = 1 gives T = 1, so the law is N(b/2, 1/2) around f(X) = 0.
  Rng rng(14);
  NoiseReductionSession s({0.0}, Sensitivity(1), RenyiOrder(2));
  double b = s.brownian_release(RdpBudget(0.5), rng).payload[0];
  auto law = s.conditional_law(RdpBudget(1.0));
  CHECK(law.mean[0] == doctest::Approx(b / 2.0).epsilon(1e-12));
  CHECK(law.variance == doctest::Approx(0.5).epsilon(1e-12));

  // Unchanged budget: the law degenerates onto the last output.
  auto frozen = s.conditional_law(RdpBudget(0.5));
  CHECK(frozen.mean[0] == b);
  CHECK(frozen.variance == 0.0);
}

TEST_CASE("conditional variance example at eps (0.1, 0.2)") {
  // alpha = 2, Delta = 1: T_1 = 10, T_2 = 5, variance 5 * 5 / 10 = 2.5.
  Rng rng(15);
  NoiseReductionSession s({0.0}, Sensitivity(1), RenyiOrder(2));
  s.precision_weighted_release(RdpBudget(0.1), rng);
  auto law = s.conditional_law(RdpBudget(0.2));
  CHECK(law.variance == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("replayed conditional moments agree with the analytic law") {
  Rng rng(16);
  NoiseReductionSession base({0.7}, Sensitivity(1), RenyiOrder(20));
  base.precision_weighted_release(RdpBudget(0.05), rng);
  auto law = base.conditional_law(RdpBudget(0.2));

  const std::size_t n = 200000;
  std::vector<double> pw(n), bm(n);
  for (std::size_t i = 0; i < n; ++i) {
    NoiseReductionSession copy = base;
    pw[i] = copy.precision_weighted_release(RdpBudget(0.2), rng).payload[0];
  }
  // The same state replayed through the Brownian sampler has the same law.
  for (std::size_t i = 0; i < n; ++i) {
    NoiseReductionSession s({0.7}, Sensitivity(1), RenyiOrder(20));
    s.brownian_release(RdpBudget(0.05), rng);
    bm[i] = s.brownian_release(RdpBudget(0.2), rng).payload[0];
  }
  Moments mp = moments(pw);
  CHECK(std::abs(mp.mean - law.mean[0]) < 4.0 * mp.mean_std_error);
  CHECK(std::abs(mp.variance - law.variance) <
        4.0 * law.variance * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("per-step budgets telescope to the cumulative budget") {
  Rng rng(17);
  const RenyiOrder alpha(20);
  const Sensitivity delta(1);
  EpsilonSchedule schedule = log_spaced_schedule(0.01, 1.0, 7);
  NoiseReductionSession s({0.0, 1.0}, delta, alpha);
  for (const RdpBudget& eps : schedule.values) {
    s.precision_weighted_release(eps, rng);
  }
  double total = 0.0;
  for (double sigma2 : s.noise_variance_history()) {
    total += rdp_epsilon_of_gaussian(alpha, delta, sigma2).epsilon;
  }
  CHECK(total == doctest::Approx(schedule.values.back().epsilon).epsilon(1e-12));
}

TEST_CASE("released values are unbiased with variance T_i") {
  const RenyiOrder alpha(20);
  const Sensitivity delta(1);
  const double fx = 2.5;
  const std::vector<double> grid{0.01, 0.1, 1.0};
  const std::size_t n = 100000;
  Rng rng(18);

  std::vector<std::vector<double>> pw(grid.size(), std::vector<double>(n));
  std::vector<std::vector<double>> bm(grid.size(), std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    NoiseReductionSession a({fx}, delta, alpha);
    NoiseReductionSession b({fx}, delta, alpha);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      pw[k][i] = a.precision_weighted_release(RdpBudget(grid[k]), rng).payload[0];
      bm[k][i] = b.brownian_release(RdpBudget(grid[k]), rng).payload[0];
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double t_k = gaussian_variance_for_rdp(alpha, delta, RdpBudget(grid[k]));
    for (const auto& samples : {pw[k], bm[k]}) {
      Moments m = moments(samples);
      CHECK(std::abs(m.mean - fx) < 4.0 * m.mean_std_error);
      CHECK(std::abs(m.variance - t_k) < 0.05 * t_k);
    }
    // Equivalence of the samplers: two-sample KS on each marginal at
    // significance 1e-3.
    CHECK(ks_distance(pw[k], bm[k]) < ks_threshold(1e-3, n, n));
  }
}

TEST_CASE("budget preconditions") {
  Rng rng(19);
  NoiseReductionSession s({0.0}, Sensitivity(1), RenyiOrder(2));
  CHECK_THROWS(s.precision_weighted_release(RdpBudget(0.0), rng));
  CHECK_THROWS(s.conditional_law(RdpBudget(0.1)));  // empty session
  s.precision_weighted_release(RdpBudget(0.2), rng);
  CHECK_THROWS(s.precision_weighted_release(RdpBudget(0.1), rng));
  CHECK_THROWS(s.conditional_law(RdpBudget(0.1)));
  CHECK_THROWS(s.brownian_release(RdpBudget(0.3), rng));  // mode locked

  CHECK_THROWS(NoiseReductionSession({}, Sensitivity(1), RenyiOrder(2)));
}

TEST_CASE("trajectory log density matches a manual computation") {
  const Sensitivity delta(1);
  const RenyiOrder alpha(2);
  std::vector<RdpBudget> schedule{RdpBudget(0.5), RdpBudget(1.0)};
  // T_1 = 2, T_2 = 1; conditional mean f + (1/2)(x1 - f), variance 1/2.
  std::vector<std::vector<double>> trajectory{{1.0}, {0.3}};
  const double f = 0.25;
  auto log_normal = [](double x, double mean, double var) {
    double d = x - mean;
    return -0.5 * (d * d / var + std::log(2.0 * 3.14159265358979323846 * var));
  };
  double expected = log_normal(1.0, f, 2.0) +
                    log_normal(0.3, f + 0.5 * (1.0 - f), 0.5);
  CHECK(trajectory_log_density({f}, delta, alpha, schedule, trajectory) ==
        doctest::Approx(expected).epsilon(1e-12));

  std::vector<RdpBudget> bad{RdpBudget(1.0), RdpBudget(0.5)};
  CHECK_THROWS(trajectory_log_density({f}, delta, alpha, bad, trajectory));
}
