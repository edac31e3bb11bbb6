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

#include "accfirst/rng.hpp"
#include "doctest.h"

using namespace accfirst;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("domain types reject invalid values") {
  CHECK_THROWS(RenyiOrder(1.0));
  CHECK_THROWS(RenyiOrder(0.5));
  CHECK_THROWS(RenyiOrder{kInf});
  CHECK_NOTHROW(RenyiOrder(1.0000001));
  CHECK_THROWS(RdpBudget(-0.1));
  CHECK_NOTHROW(RdpBudget{kInf});
  CHECK_NOTHROW(RdpBudget(0.0));
  CHECK_THROWS(Sensitivity(0.0));
  CHECK_THROWS(Sensitivity(-1.0));
  CHECK_THROWS(Sensitivity{kInf});
  CHECK_THROWS(AdpBudget(0.1, 1.0));
  CHECK_NOTHROW(AdpBudget(0.1, 0.0));
}

TEST_CASE("gaussian variance calibration") {
  CHECK(gaussian_variance_for_rdp(RenyiOrder(20), Sensitivity(1),
                                  RdpBudget(0.01)) == doctest::Approx(1000.0));
  CHECK(gaussian_variance_for_rdp(RenyiOrder(2), Sensitivity(1),
                                  RdpBudget(1)) == doctest::Approx(1.0));
  CHECK(gaussian_variance_for_rdp(RenyiOrder(20), Sensitivity(2),
                                  RdpBudget(0.1)) == doctest::Approx(400.0));

  // eps = 0 is the explicit infinite-variance convention.
  double v = gaussian_variance_for_rdp(RenyiOrder(20), Sensitivity(1),
                                       RdpBudget(0.0));
  CHECK(std::isinf(v));

  // Strictly decreasing in eps.
  double prev = kInf;
  for (double eps : {0.01, 0.1, 1.0, 10.0}) {
    double cur =
        gaussian_variance_for_rdp(RenyiOrder(5), Sensitivity(2), RdpBudget(eps));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("gaussian epsilon inverse") {
  CHECK(rdp_epsilon_of_gaussian(RenyiOrder(20), Sensitivity(1), 1000.0)
            .epsilon == doctest::Approx(0.01));
  CHECK(rdp_epsilon_of_gaussian(RenyiOrder(2), Sensitivity(1), 1.0).epsilon ==
        doctest::Approx(1.0));
  CHECK(rdp_epsilon_of_gaussian(RenyiOrder(20), Sensitivity(1), kInf).epsilon ==
        0.0);
  CHECK_THROWS(rdp_epsilon_of_gaussian(RenyiOrder(2), Sensitivity(1), 0.0));
  CHECK_THROWS(rdp_epsilon_of_gaussian(RenyiOrder(2), Sensitivity(1), -2.0));
}

TEST_CASE("calibration round-trips at random points") {
  Rng rng(20260810);
  for (int i = 0; i < 2000; ++i) {
    RenyiOrder alpha(1.0 + 50.0 * rng.uniform_open());
    Sensitivity delta(std::exp(6.0 * (rng.uniform() - 0.5)));
    RdpBudget eps(std::exp(8.0 * (rng.uniform() - 0.5)));
    double variance = gaussian_variance_for_rdp(alpha, delta, eps);
    RdpBudget back = rdp_epsilon_of_gaussian(alpha, delta, variance);
    CHECK(back.epsilon == doctest::Approx(eps.epsilon).epsilon(1e-12));
  }
}

TEST_CASE("rdp to adp conversion") {
  // Reference values of the seven-point grid at alpha = 20, delta = 1e-5.
  const double expected[7] = {0.615943, 0.627488, 0.652359, 0.705943,
                              0.821387, 1.070102, 1.605943};
  EpsilonSchedule schedule = log_spaced_schedule(0.01, 1.0, 7);
  for (int i = 0; i < 7; ++i) {
    AdpBudget adp = rdp_to_adp(RenyiOrder(20), schedule.values[i], 1e-5);
    CHECK(std::abs(adp.epsilon - expected[i]) < 1e-6);
    CHECK(adp.delta == 1e-5);
  }

  // ln(1/delta) = 1 and alpha - 1 = 1 make the shift exactly 1.
  AdpBudget simple = rdp_to_adp(RenyiOrder(2), RdpBudget(0.5), std::exp(-1.0));
  CHECK(simple.epsilon == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS(rdp_to_adp(RenyiOrder(2), RdpBudget(0.5), 0.0));
  CHECK_THROWS(rdp_to_adp(RenyiOrder(2), RdpBudget(0.5), 1.0));

  // Monotone increasing in eps, decreasing in delta.
  double lo = rdp_to_adp(RenyiOrder(20), RdpBudget(0.1), 1e-5).epsilon;
  double hi = rdp_to_adp(RenyiOrder(20), RdpBudget(0.2), 1e-5).epsilon;
  CHECK(lo < hi);
  double looser = rdp_to_adp(RenyiOrder(20), RdpBudget(0.1), 1e-3).epsilon;
  CHECK(looser < lo);
}

TEST_CASE("total budget with stopping rule") {
  std::vector<RdpBudget> steps{RdpBudget(0.1), RdpBudget(0.2)};
  CHECK(total_with_stopping(steps, RdpBudget(0.01)).epsilon ==
        doctest::Approx(0.3));
  std::vector<RdpBudget> small{RdpBudget(0.005)};
  CHECK(total_with_stopping(small, RdpBudget(0.01)).epsilon == 0.01);
  CHECK(total_with_stopping({}, RdpBudget(0.01)).epsilon == 0.01);

  // Monotone in each step and in the stopping budget.
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RdpBudget> base;
    int n = 1 + static_cast<int>(rng.below(5));
    for (int i = 0; i < n; ++i) base.emplace_back(rng.uniform());
    RdpBudget stop(rng.uniform());
    double total = total_with_stopping(base, stop).epsilon;
    CHECK(total >= stop.epsilon);
    std::vector<RdpBudget> bumped = base;
    int k = static_cast<int>(rng.below(n));
    bumped[k] = RdpBudget(bumped[k].epsilon + 0.5);
    CHECK(total_with_stopping(bumped, stop).epsilon >= total);
    CHECK(total_with_stopping(base, RdpBudget(stop.epsilon + 0.5)).epsilon >=
          total);
  }
}

TEST_CASE("log spaced schedule") {
  EpsilonSchedule s = log_spaced_schedule(0.01, 1.0, 7);
  const double expected[7] = {0.01,     0.021544, 0.046416, 0.1,
                              0.215443, 0.464159, 1.0};
  REQUIRE(s.values.size() == 7);
  for (int i = 0; i < 7; ++i) {
    CHECK(std::abs(s.values[i].epsilon - expected[i]) < 1e-6);
  }
  CHECK(s.values.front().epsilon == 0.01);
  CHECK(s.values.back().epsilon == 1.0);

  EpsilonSchedule mid = log_spaced_schedule(0.1, 10.0, 3);
  CHECK(mid.values[1].epsilon == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(log_spaced_schedule(1.0, 1.0, 2));
  CHECK_THROWS(log_spaced_schedule(0.0, 1.0, 3));
  CHECK_THROWS(log_spaced_schedule(-0.5, 1.0, 3));
  CHECK_THROWS(log_spaced_schedule(0.01, 1.0, 1));
}

TEST_CASE("epsilon schedule invariants") {
  CHECK_THROWS(EpsilonSchedule({}));
  CHECK_THROWS(EpsilonSchedule({RdpBudget(0.2), RdpBudget(0.1)}));
  CHECK_THROWS(EpsilonSchedule({RdpBudget(0.1), RdpBudget(0.1)}));
  CHECK_THROWS(EpsilonSchedule({RdpBudget(0.1), RdpBudget(kInf)}));
  CHECK_NOTHROW(EpsilonSchedule({RdpBudget(0.1), RdpBudget(0.2)}));
}
