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
#include <sstream>

#include "doctest.h"

#include "apiary/config.hpp"
#include "apiary/ledger.hpp"
#include "apiary/sim.hpp"

using namespace apiary;
using namespace apiary::sim;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(APIARY_SOURCE_DIR) / "configs";

Scenario load(const std::string& name) {
  const auto path = kConfigs / name;
  return config::scenario_from_json(config::read_json(path), path.parent_path());
}

// 40 x 40 cells of 50 m, hive in the middle, one nectar and one pollen patch.
Scenario small_colony() {
  Scenario sc;
  auto& land = sc.landscape;
  land.cell_size = 50.0;
  land.ids = flora::Raster<int>(40, 40, 0);
  for (int r = 10; r < 15; ++r)
    for (int c = 10; c < 15; ++c) land.ids(r, c) = 1;
  for (int r = 25; r < 28; ++r)
    for (int c = 25; c < 28; ++c) land.ids(r, c) = 2;
  flora::FloralResource nectar;
  nectar.id = 1;
  nectar.q = 190.0;
  nectar.rho = 40.0;
  nectar.lambda = 2e-5;
  nectar.area = 1e6;
  flora::FloralResource pollen;
  pollen.id = 2;
  pollen.kind = flora::ResourceKind::kPollen;
  pollen.q = 0.015;
  pollen.rho = 40.0;
  pollen.lambda = 1e-9;
  pollen.area = 1e6;
  land.resources = {nectar, pollen};
  sc.hive_row = 20;
  sc.hive_col = 20;

  sc.survival = demography::SurvivalCurve::linear(45);
  sc.schedule = demography::TaskSchedule{{0, 12, 21}, {"nurse", "builder", "forager"}};
  sc.initial.honey = 15000.0;
  sc.initial.pollen = 1000.0;
  sc.initial.comb = 20000.0;
  sc.initial.population.females.assign(46, 600.0);
  sc.initial.population.males = 500.0;
  sc.initial.brood.assign(21, 1000.0);
  sc.predation.d_max_local = 9950.0;
  sc.predation.rho_crit_local = 1e-6;
  sc.weather.days = {{20.0, 10.0, false}};
  for (int i = 0; i < 20; ++i) sc.weather.days.push_back({2.0, 0.0, true});
  sc.horizon = 30;
  return sc;
}

// A single age-0 cohort of `n` females under flat survival, in winter.
Scenario winter_cohort(double n, double honey, double t_out, int days) {
  Scenario sc = small_colony();
  sc.survival = demography::SurvivalCurve::flat(200);
  sc.schedule = demography::TaskSchedule{{0, 50, 100}, {"nurse", "builder", "forager"}};
  sc.initial.population.females.assign(201, 0.0);
  sc.initial.population.females[0] = n;
  sc.initial.population.males = 0.0;
  sc.initial.brood.assign(21, 0.0);
  sc.initial.honey = honey;
  sc.weather.days.assign(1, {t_out, 0.0, true});
  sc.horizon = days;
  return sc;
}

}  // namespace

TEST_CASE("scenario validation names the offending keys") {
  auto sc = small_colony();
  CHECK(sc.violations().empty());
  sc.landscape.resources[0].rho = 0.0;
  sc.predation.d_max_local = 2e4;
  sc.initial.population.females.push_back(1.0);
  const auto v = sc.violations();
  auto has = [&](const std::string& key) {
    for (const auto& s : v)
      if (s.find(key) != std::string::npos) return true;
    return false;
  };
  CHECK(has("landscape.resources[0].rho"));
  CHECK(has("predation"));
  CHECK(has("colony.females"));
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("winter day terms in isolation") {
  // 1000 bees, 0 C outside, 20 C centre: 0.03 * 10 * 20 = 6 W of cluster heat.
  auto sc = winter_cohort(1000.0, 500.0, 0.0, 1);
  const auto& c = sc.coefficients;
  const auto step = step_day(initial_state(sc), sc, 0);
  const auto& r = step.report;
  CHECK(r.winter);
  CHECK(r.heating_power == doctest::Approx(6.0));
  CHECK(r.upkeep_power == doctest::Approx(c.pi * 1000.0));
  CHECK(r.eggs_laid == 0.0);
  CHECK(r.emerged == 0.0);
  CHECK(r.honey_foraged == 0.0);
  CHECK(r.deaths_predation == 0.0);
  CHECK(r.deaths_natural == 0.0);
  CHECK(r.honey_heating == quantize(6.0 * 86400.0 / c.mu));
  CHECK(r.honey_upkeep == quantize(c.pi * 1000.0 * 86400.0 / c.mu));
  CHECK(r.honey == 500.0 - r.honey_heating - r.honey_upkeep);
  CHECK(std::isnan(r.tau));
  CHECK(step.state.colony.population.females[1] == 1000.0);
}

TEST_CASE("one foraging day balances by hand") {
  auto sc = small_colony();
  const auto& c = sc.coefficients;
  const auto s0 = initial_state(sc);
  const auto step = step_day(s0, sc, 0);
  const auto& r = step.report;
  REQUIRE_FALSE(step.halted);
  CHECK(r.status == "ok");
  CHECK(r.nectar_foragers > 0.0);

  // Nurses are ages 0..11, 600 each; larvae present so the brood target applies.
  const double nurses = 12 * 600.0;
  CHECK(r.heating_power ==
        doctest::Approx(sc.thermal.theta * nurses * (sc.thermal.t_brood - 20.0)));
  CHECK(r.eggs_laid == std::min(sc.queen_rate, sc.nurse_capacity * nurses));
  CHECK(r.emerged == 1000.0);
  const double fed = 20 * 1000.0 + r.eggs_laid;
  CHECK(r.honey_brood == quantize(fed * c.alpha / (21.0 * c.mu)));
  CHECK(r.pollen_brood == quantize(fed * c.alpha_tilde / 21.0));

  // Every flux is on the grid, so the stock updates close exactly.
  for (double x : {r.honey_foraged, r.honey_pollen_trips, r.honey_upkeep, r.honey_heating,
                   r.honey_brood, r.pollen_foraged, r.deaths_natural, r.deaths_predation}) {
    CHECK(on_grid(x));
  }
  CHECK(r.honey == s0.colony.honey + r.honey_foraged - r.honey_pollen_trips - r.honey_upkeep -
                       r.honey_heating - r.honey_brood);
  CHECK(r.pollen == s0.colony.pollen + r.pollen_foraged - r.pollen_brood);
  CHECK(r.females == s0.colony.population.total_females() + r.emerged - r.deaths_natural -
                         r.deaths_predation);
  CHECK(r.nectar_foragers + r.pollen_foragers + r.reserve_foragers ==
        doctest::Approx(25 * 600.0));
  // Predation only takes foragers.
  const auto untouched = demography::advance_day(s0.colony.population, sc.survival, r.emerged);
  for (int d = 0; d <= 21; ++d) {
    CHECK(step.state.colony.population.females[d] == untouched.females[d]);
  }
}

TEST_CASE("winter decline follows the closed form") {
  // No deaths before age 200 and no brood: a fixed daily bill.
  auto sc = winter_cohort(8000.0, 30000.0, -5.0, 100);
  const auto& c = sc.coefficients;
  const auto res = run(sc);
  REQUIRE_FALSE(res.halted);
  const double heat = 0.03 * std::cbrt(8000.0) * 25.0;
  const double bill =
      quantize(heat * 86400.0 / c.mu) + quantize(c.pi * 8000.0 * 86400.0 / c.mu);
  for (std::size_t t = 0; t < res.reports.size(); ++t) {
    CHECK(res.reports[t].honey == 30000.0 - double(t + 1) * bill);
    CHECK(res.reports[t].females == 8000.0);
  }

  // Linear survival: the cohort shrinks as N0 s(t).
  auto lin = winter_cohort(8000.0, 30000.0, -5.0, 100);
  lin.survival = demography::SurvivalCurve::linear(200);
  const auto res2 = run(lin);
  for (std::size_t t = 0; t < res2.reports.size(); ++t) {
    const double expected = 8000.0 * lin.survival.at(int(t) + 1);
    CHECK(std::abs(res2.reports[t].females - expected) <= 1e-6 * (t + 1));
  }
  CHECK(res2.final_state.colony.honey > res.final_state.colony.honey);
}

TEST_CASE("colder winters cost more honey") {
  double prev = -1.0;
  for (double t_out : {15.0, 10.0, 5.0, 0.0, -5.0, -10.0}) {
    const auto res = run(winter_cohort(5000.0, 20000.0, t_out, 60));
    REQUIRE_FALSE(res.halted);
    const double used = 20000.0 - res.final_state.colony.honey;
    CHECK(used > prev);
    prev = used;
  }
}

TEST_CASE("starvation halts without committing the day") {
  const auto res = run(winter_cohort(20000.0, 50.0, -10.0, 30));
  REQUIRE(res.halted);
  CHECK(res.reports.back().status == "starved: honey");
  CHECK(res.reports.back().honey < 0.0);
  CHECK(res.final_state.colony.honey >= 0.0);
  CHECK(res.reports.size() < 30u);
}

TEST_CASE("winter survival check") {
  EnergyCoefficients c;
  thermo::ThermalParams p;
  ColonyState s;
  s.population.females.assign(10, 1000.0);
  s.honey = 20000.0;
  s.pollen = 100.0;

  const auto empty = winter_survival_check(s, WeatherSeries{}, c, p);
  CHECK(empty.survives);
  CHECK(std::isinf(empty.margin_days));

  WeatherSeries winter;
  winter.days.assign(100, {0.0, 0.0, true});
  const double n = 10000.0;
  const double daily = (0.03 * std::cbrt(n) * 20.0 + c.pi * n) * 86400.0;
  const auto ok = winter_survival_check(s, winter, c, p);
  CHECK(ok.need == doctest::Approx(100 * daily));
  CHECK(ok.margin_days == doctest::Approx((c.mu * s.honey - 100 * daily) / daily));
  CHECK(ok.survives == (c.mu * s.honey >= ok.need && ok.r_hive >= ok.r_target));

  s.honey = 100.0;
  const auto poor = winter_survival_check(s, winter, c, p);
  CHECK_FALSE(poor.survives);
  CHECK(poor.margin_days < 0.0);

  s.honey = 1e6;
  s.pollen = 1e6;  // plenty of honey but the ratio is far too low
  const auto skewed = winter_survival_check(s, winter, c, p);
  CHECK(c.mu * s.honey > skewed.need);
  CHECK_FALSE(skewed.survives);
}

TEST_CASE("balanced regime reuses the previous plan") {
  auto sc = small_colony();
  const auto setup = prepare(sc);
  auto state = initial_state(sc);
  const auto in = market_inputs(sc, setup, state, 0);
  REQUIRE_FALSE(in.nectar.empty());
  REQUIRE_FALSE(in.pollen.empty());

  const auto fresh = solve_regime(market::Regime::kBalanced, in.nectar, in.pollen, in.budget,
                                  in.base_need, in.min_income, sc.market, nullptr);
  CHECK(fresh.path == market::SolvePath::kDeficit);

  market::ExchangeSolution prev;
  prev.path = market::SolvePath::kSurplus;
  prev.tau = 0.75;
  prev.tau_defined = true;
  prev.nectar.assigned = {{1, 100.0}};
  prev.nectar.total = 100.0;
  prev.pollen.assigned = {{2, 50.0}};
  prev.pollen.total = 50.0;
  const auto again = solve_regime(market::Regime::kBalanced, in.nectar, in.pollen, in.budget,
                                  in.base_need, in.min_income, sc.market, &prev);
  CHECK(again.path == market::SolvePath::kFrozen);
  CHECK(again.tau == 0.75);
  CHECK(again.nectar.bees_on(1) == 100.0);
  CHECK(again.pollen.bees_on(2) == 50.0);
  CHECK(again.pollen_income > 0.0);
}

TEST_CASE("year-long run closes the ledger and repeats exactly") {
  const auto sc = load("default.json");
  const auto a = run(sc);
  REQUIRE_FALSE(a.halted);
  REQUIRE(a.reports.size() == 365u);
  const auto& c = sc.coefficients;
  auto s = initial_state(sc).colony;
  double honey = s.honey, pollen = s.pollen, bees = s.population.total();
  for (const auto& r : a.reports) {
    honey = honey + r.honey_foraged - r.honey_pollen_trips - r.honey_upkeep - r.honey_heating -
            r.honey_brood;
    pollen = pollen + r.pollen_foraged - r.pollen_brood;
    bees = bees + r.emerged - r.deaths_natural - r.deaths_predation;
    CHECK(honey == r.honey);
    CHECK(pollen == r.pollen);
    CHECK(bees == r.females + r.males);
    CHECK(demography::total_energy(honey, bees, r.comb, c) == r.energy);
    CHECK(r.eggs_laid <= sc.queen_rate);
  }

  const auto b = run(sc);
  std::ostringstream x, y;
  write_reports_csv(x, a.reports);
  write_reports_csv(y, b.reports);
  CHECK(x.str() == y.str());
  CHECK(summary_json(sc, a).dump() == summary_json(sc, b).dump());
}

TEST_CASE("population stays within what was laid") {
  const auto sc = load("default.json");
  const auto res = run(sc);
  double laid = 0.0, emerged = 0.0;
  const double start = initial_state(sc).colony.population.total_females();
  double initial_brood = 0.0;
  for (double b : initial_state(sc).colony.brood) initial_brood += b;
  for (const auto& r : res.reports) {
    laid += r.eggs_laid;
    emerged += r.emerged;
    CHECK(r.females <= start + emerged);
    CHECK(emerged <= initial_brood + laid);
    CHECK(r.females >= 0.0);
    CHECK(r.foragers <= r.females);
  }
}

TEST_CASE("reports csv layout") {
  auto sc = small_colony();
  sc.horizon = 2;
  const auto res = run(sc);
  std::ostringstream out;
  write_reports_csv(out, res.reports);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.rfind("day,winter,t_out_C,", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), ',') + 1 ==
        static_cast<long>(report_columns().size()));
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
  CHECK(row.find("\"ok\"") != std::string::npos);
}
