// Copyright 2026 The Apiary Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "doctest.h"

#include "apiary/foraging.hpp"

using namespace apiary::foraging;
using apiary::flora::critical_density;

namespace {

// 300 s in the hive, 200 s of flight for 700 m, 100 flowers at 9 s each.
FloralResource round_numbers() {
  FloralResource r;
  r.id = 1;
  r.q = 200.0;
  r.rho = 0.25;
  r.lambda = 0.04;
  r.m = 100.0;
  r.beta = 8.0;
  r.n = 2;
  r.area = 1000.0;
  return r;
}

}  // namespace

TEST_CASE("trip cycle and head-count") {
  ForagingParams p;
  const auto res = round_numbers();
  const auto t = trip_cycle(res, 700.0, p);
  CHECK(t.t_hive == 300.0);
  CHECK(t.t_flight == doctest::Approx(200.0));
  CHECK(t.t_foraging == doctest::Approx(900.0));
  CHECK(t.total == doctest::Approx(1400.0));
  CHECK(foragers_required(res, 700.0, p) == doctest::Approx(70.0));
  CHECK_THROWS_AS(trip_cycle(res, -1.0, p), std::invalid_argument);
}

TEST_CASE("power gain and efficiency") {
  ForagingParams p;
  const auto res = round_numbers();
  CHECK(resource_power_gain(res, 0.25, p) == doctest::Approx(2.5));
  CHECK(resource_power_gain(res, 0.0, p) == 0.0);
  CHECK(resource_power_gain(res, -0.3, p) == 0.0);
  CHECK(efficiency(res, 700.0, 0.35, p) == doctest::Approx(0.05));
  CHECK(efficiency(res, 700.0, -0.35, p) == doctest::Approx(-0.05));
}

TEST_CASE("predation cost per death") {
  ForagingParams p;
  PredationParams pred;
  EnergyCoefficients c;
  c.alpha = 50.0;
  c.alpha_tilde = 0.009;
  // 0.009 * 200 / 0.015 = 120 J, times 10 / 60.
  CHECK(predation_cost_per_death(0.75, c, p, pred) == doctest::Approx(65.0));
  CHECK(predation_cost_per_death(0.0, c, p, pred) == c.alpha);
  CHECK_THROWS_AS(predation_cost_per_death(-1.0, c, p, pred), std::invalid_argument);
}

TEST_CASE("predation rates") {
  ForagingParams p;
  EnergyCoefficients c;
  PredationParams pred;
  const auto res = round_numbers();

  pred.d_max_local = p.d_max;
  pred.rho_crit_local = critical_density(res, p);
  CHECK(predation_flight_rate(0.5, c, p, pred) == 0.0);
  CHECK(predation_foraging_rate(res, 0.5, c, p, pred) == 0.0);

  pred.d_max_local = p.d_max / 2.0;
  CHECK(predation_flight_rate(0.0, c, p, pred) ==
        doctest::Approx(p.v_cruise * p.q0 / (c.alpha * p.d_max)));

  pred.rho_crit_local = 4.0 * critical_density(res, p);
  double prev_flight = predation_flight_rate(0.0, c, p, pred);
  double prev_site = predation_foraging_rate(res, 0.0, c, p, pred);
  CHECK(prev_site > 0.0);
  for (double tau : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double f = predation_flight_rate(tau, c, p, pred);
    const double s = predation_foraging_rate(res, tau, c, p, pred);
    CHECK(f < prev_flight);
    CHECK(s < prev_site);
    prev_flight = f;
    prev_site = s;
  }

  pred.rho_crit_local = 0.5 * critical_density(res, p);
  CHECK_THROWS_AS(predation_foraging_rate(res, 0.0, c, p, pred), std::invalid_argument);
  pred.d_max_local = 2.0 * p.d_max;
  CHECK_THROWS_AS(predation_flight_rate(0.0, c, p, pred), std::invalid_argument);
  CHECK_THROWS_AS(pred.validate(p), std::invalid_argument);
}

TEST_CASE("allocation plan lookup") {
  AllocationPlan plan;
  plan.assigned = {{3, 10.0}, {5, 2.5}};
  CHECK(plan.bees_on(5) == 2.5);
  CHECK(plan.bees_on(4) == 0.0);
}
