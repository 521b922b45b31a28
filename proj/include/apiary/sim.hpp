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

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "apiary/demography.hpp"
#include "apiary/flora.hpp"
#include "apiary/foraging.hpp"
#include "apiary/market.hpp"
#include "apiary/thermo.hpp"
#include "apiary/weather.hpp"

namespace apiary::sim {

using demography::ColonyState;
using demography::EnergyCoefficients;

/// Inclusive day window during which a resource is in flower.
struct Bloom {
  int first = 0;
  int last = std::numeric_limits<int>::max();

  bool active(int day) const { return day >= first && day <= last; }
};

struct Scenario {
  flora::Landscape landscape;
  int hive_row = 0;
  int hive_col = 0;
  std::map<int, Bloom> bloom;  // resources without an entry always flower

  ColonyState initial;
  demography::SurvivalCurve survival;
  demography::TaskSchedule schedule;
  std::string forager_label = "forager";
  std::string nurse_label = "nurse";

  EnergyCoefficients coefficients;
  thermo::ThermalParams thermal;
  flora::ForagingParams foraging;
  foraging::PredationParams predation;
  market::MarketParams market;
  WeatherSeries weather;

  double queen_rate = 1500.0;  // eggs/day
  double nurse_capacity = 3.0;  // larvae per nurse
  int brood_days = 21;
  int horizon = 365;
  std::uint64_t seed = 0;  // reserved

  /// Every violated invariant, each message naming its config key.
  std::vector<std::string> violations() const;
  /// Throws std::invalid_argument listing all violations.
  void validate() const;

  /// Weather for `day`; the series repeats when shorter than the horizon.
  const WeatherDay& weather_on(int day) const;
};

/// Fixed per-scenario quantities the daily step needs.
struct Setup {
  struct Site {
    const flora::FloralResource* resource = nullptr;
    double distance = 0.0;  // m, hive to nearest patch cell
    foraging::TripCycle cycle;
    double quality = 0.0;  // nectar field value at the hive
  };
  std::vector<Site> sites;
  double r_target = 0.0;
  int forager_task = -1;
  int nurse_task = -1;
};

Setup prepare(const Scenario& sc);

/// Colony plus the market memory carried from one day to the next.
struct SimState {
  ColonyState colony;
  market::ExchangeSolution last;
  bool has_last = false;
  double tau = 1.0;  // last defined exchange rate, prices predation before any solve
};

SimState initial_state(const Scenario& sc);

/// One row of reports.csv. Mass and head-count fluxes are exact on the ledger
/// grid; joule columns are the same fluxes priced with mu and alpha.
struct DailyReport {
  int day = 0;
  bool winter = false;
  double t_out = 0.0;
  double foraging_hours = 0.0;
  market::Regime regime = market::Regime::kBalanced;
  market::SolvePath path = market::SolvePath::kIdle;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double r_hive = 0.0;
  double r_target = 0.0;
  std::string status = "ok";

  double nectar_foragers = 0.0;
  double pollen_foragers = 0.0;
  double reserve_foragers = 0.0;

  // honey ledger, g
  double honey_foraged = 0.0;
  double honey_pollen_trips = 0.0;
  double honey_upkeep = 0.0;
  double honey_heating = 0.0;
  double honey_brood = 0.0;
  // pollen ledger, g
  double pollen_foraged = 0.0;
  double pollen_brood = 0.0;
  // adult ledger, bees
  double emerged = 0.0;
  double deaths_natural = 0.0;
  double deaths_predation = 0.0;
  double eggs_laid = 0.0;

  double heating_power = 0.0;  // W
  double upkeep_power = 0.0;  // W

  // stocks after the day
  double honey = 0.0;
  double pollen = 0.0;
  double comb = 0.0;
  double females = 0.0;
  double males = 0.0;
  double foragers = 0.0;
  double nurses = 0.0;
  double larvae = 0.0;
  double energy = 0.0;  // J

  /// Signed joule fluxes: mu (honey in - honey out) + alpha (emerged - deaths).
  double energy_flux(const EnergyCoefficients& c) const;
};

/// Everything the daily market solve sees: regime, forager budget, the
/// nectar need (W during foraging hours) and options in flower.
struct MarketInputs {
  market::Regime regime = market::Regime::kBalanced;
  double r_hive = 0.0;
  double r_target = 0.0;
  double budget = 0.0;
  double foraging_seconds = 0.0;
  double base_need = 0.0;
  double min_income = 0.0;
  std::vector<market::NectarOption> nectar;
  std::vector<market::PollenOption> pollen;
};

MarketInputs market_inputs(const Scenario& sc, const Setup& setup, const SimState& state,
                           int day_index);

/// Deficit runs case A, Surplus case B (or its scarce variant when pollen
/// capacity cannot absorb the spare foragers), Balanced echoes `previous`
/// when there is one. Throws market::MarketError.
market::ExchangeSolution solve_regime(market::Regime regime,
                                      std::span<const market::NectarOption> nectar,
                                      std::span<const market::PollenOption> pollen,
                                      double budget, double base_need, double min_income,
                                      const market::MarketParams& params,
                                      const market::ExchangeSolution* previous);

struct StepResult {
  SimState state;
  DailyReport report;
  bool halted = false;
};

StepResult step_day(const SimState& state, const Scenario& sc, const Setup& setup,
                    int day_index);
StepResult step_day(const SimState& state, const Scenario& sc, int day_index);

struct RunResult {
  std::vector<DailyReport> reports;
  SimState final_state;
  bool halted = false;
};

RunResult run(const Scenario& sc);

struct WinterCheck {
  bool survives = true;
  double margin_days = std::numeric_limits<double>::infinity();
  double need = 0.0;  // J of honey over the winter
  double r_hive = 0.0;
  double r_target = 0.0;
};

/// Cluster-model parameters: winter heating aims for the minimal centre
/// temperature, not brood temperature.
thermo::ThermalParams winter_thermal(thermo::ThermalParams p);

/// Compares the honey stock with winter cluster heating plus upkeep for the
/// current population, day by day, and the hive ratio with its target.
WinterCheck winter_survival_check(const ColonyState& state, const WeatherSeries& winter,
                                  const EnergyCoefficients& c,
                                  const thermo::ThermalParams& p);

/// Column names of reports.csv, in their frozen order.
const std::vector<std::string>& report_columns();
void write_reports_csv(std::ostream& out, const std::vector<DailyReport>& reports);
nlohmann::json summary_json(const Scenario& sc, const RunResult& result);

}  // namespace apiary::sim
