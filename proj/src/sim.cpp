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

#include "apiary/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "apiary/ledger.hpp"

namespace apiary::sim {

namespace {

constexpr double kSecondsPerDay = 86400.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs `check` and records its message under `key` if it throws.
template <typename F>
void collect(std::vector<std::string>& out, const std::string& key, F&& check) {
  try {
    check();
  } catch (const std::exception& e) {
    out.push_back(key + ": " + e.what());
  }
}

void resource_violations(std::vector<std::string>& out, const flora::FloralResource& r,
                         const std::string& key) {
  if (!(r.rho > 0)) out.push_back(key + ".rho: must be > 0");
  if (!(r.m >= 1)) out.push_back(key + ".m: must be >= 1");
  if (r.n != 2 && r.n != 3) out.push_back(key + ".n: must be 2 or 3");
  if (!(r.area > 0)) out.push_back(key + ".area: must be > 0");
  if (!(r.q > 0)) out.push_back(key + ".q: must be > 0");
  if (!(r.lambda >= 0)) out.push_back(key + ".lambda: must be >= 0");
  if (!(r.beta >= 0)) out.push_back(key + ".beta: must be >= 0");
}

}  // namespace

std::vector<std::string> Scenario::violations() const {
  std::vector<std::string> v;
  if (horizon < 1) v.push_back("horizon_days: must be >= 1");
  if (!(queen_rate >= 0)) v.push_back("demography.queen_rate: must be >= 0");
  if (!(nurse_capacity >= 0)) v.push_back("demography.nurse_capacity: must be >= 0");
  if (brood_days < 1) v.push_back("demography.brood_days: must be >= 1");

  collect(v, "coefficients", [&] { coefficients.validate(); });
  collect(v, "thermal", [&] { thermal.validate(); });
  collect(v, "foraging", [&] { foraging.validate(); });
  collect(v, "predation", [&] { predation.validate(foraging); });
  collect(v, "market", [&] { market.validate(); });
  collect(v, "weather", [&] { weather.validate(); });

  const int age_max = survival.max_age();
  if (initial.population.max_age() != age_max) {
    v.push_back("colony.females: needs " + std::to_string(age_max + 1) +
                " age classes to match the survival curve");
  }
  for (double n : initial.population.females) {
    if (!(n >= 0)) {
      v.push_back("colony.females: counts must be >= 0");
      break;
    }
  }
  if (!(initial.population.males >= 0)) v.push_back("colony.males: must be >= 0");
  if (!(initial.honey >= 0)) v.push_back("colony.honey: must be >= 0");
  if (!(initial.pollen >= 0)) v.push_back("colony.pollen: must be >= 0");
  if (!(initial.comb >= 0)) v.push_back("colony.comb: must be >= 0");
  if (brood_days >= 1 && initial.brood.size() > static_cast<std::size_t>(brood_days)) {
    v.push_back("colony.brood: longer than demography.brood_days");
  }
  for (double b : initial.brood) {
    if (!(b >= 0)) {
      v.push_back("colony.brood: counts must be >= 0");
      break;
    }
  }

  collect(v, "demography.schedule", [&] { schedule.validate(age_max); });
  if (schedule.find(forager_label) < 0) {
    v.push_back("demography.schedule: no task labelled '" + forager_label + "'");
  }
  if (schedule.find(nurse_label) < 0) {
    v.push_back("demography.schedule: no task labelled '" + nurse_label + "'");
  }

  const auto& land = landscape;
  if (!(land.cell_size > 0)) v.push_back("landscape.cell_size: must be > 0");
  if (land.cell_size > foraging.d_max / 100.0) {
    v.push_back("landscape.cell_size: exceeds d_max/100");
  }
  if (land.ids.empty()) {
    v.push_back("landscape.raster: empty");
  } else if (hive_row < 0 || hive_row >= land.ids.rows || hive_col < 0 ||
             hive_col >= land.ids.cols) {
    v.push_back("landscape.hive: outside the raster");
  }
  for (std::size_t i = 0; i < land.resources.size(); ++i) {
    const auto& r = land.resources[i];
    const std::string key = "landscape.resources[" + std::to_string(i) + "]";
    if (r.id <= 0) v.push_back(key + ".id: must be > 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (land.resources[j].id == r.id) v.push_back(key + ".id: duplicate " + std::to_string(r.id));
    }
    resource_violations(v, r, key);
  }
  for (int id : land.ids.cells) {
    if (id != 0 && land.find(id) == nullptr) {
      v.push_back("landscape.raster: cell id " + std::to_string(id) + " has no resource");
      break;
    }
  }
  for (const auto& [id, b] : bloom) {
    if (land.find(id) == nullptr) {
      v.push_back("landscape.resources: bloom for unknown id " + std::to_string(id));
    }
    if (b.first > b.last) v.push_back("landscape.resources: empty bloom window for id " + std::to_string(id));
  }
  return v;
}

void Scenario::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg;
  for (const auto& s : v) msg += (msg.empty() ? "" : "\n") + s;
  throw std::invalid_argument(msg);
}

const WeatherDay& Scenario::weather_on(int day) const {
  static const WeatherDay kDefault{};
  if (weather.empty()) return kDefault;
  return weather.days[static_cast<std::size_t>(day) % weather.size()];
}

thermo::ThermalParams winter_thermal(thermo::ThermalParams p) {
  p.t_target = p.t_center_min;
  return p;
}

Setup prepare(const Scenario& sc) {
  Setup s;
  for (const auto& res : sc.landscape.resources) {
    const double d = flora::distance_to_resource(sc.landscape, res.id, sc.hive_row, sc.hive_col);
    if (!std::isfinite(d)) continue;
    Setup::Site site;
    site.resource = &res;
    site.distance = d;
    site.cycle = foraging::trip_cycle(res, d, sc.foraging);
    if (res.kind == flora::ResourceKind::kNectar) {
      site.quality = flora::quality_at_distance(res, d, sc.foraging);
    }
    s.sites.push_back(site);
  }
  s.r_target = market::target_ratio(sc.coefficients.alpha, sc.coefficients.alpha_tilde,
                                    sc.weather.winter_only(), sc.market.winter_colony_size,
                                    winter_thermal(sc.thermal));
  s.forager_task = sc.schedule.find(sc.forager_label);
  s.nurse_task = sc.schedule.find(sc.nurse_label);
  return s;
}

SimState initial_state(const Scenario& sc) {
  SimState s;
  auto& c = s.colony;
  c = sc.initial;
  c.honey = quantize(c.honey);
  c.pollen = quantize(c.pollen);
  c.comb = quantize(c.comb);
  for (double& n : c.population.females) n = quantize(n);
  c.population.males = quantize(c.population.males);
  c.brood.resize(static_cast<std::size_t>(sc.brood_days), 0.0);
  for (double& b : c.brood) b = quantize(b);
  return s;
}

double DailyReport::energy_flux(const EnergyCoefficients& c) const {
  const double honey_in = honey_foraged;
  const double honey_out =
      honey_pollen_trips + honey_upkeep + honey_heating + honey_brood;
  return c.mu * (honey_in - honey_out) +
         c.alpha * (emerged - deaths_natural - deaths_predation);
}

namespace {

struct Options {
  std::vector<market::NectarOption> nectar;  // all active nectar sites
  std::vector<market::NectarOption> ranked;
  std::vector<market::PollenOption> pollen;
};

Options build_options(const Scenario& sc, const Setup& setup, int day) {
  Options o;
  for (const auto& site : setup.sites) {
    const auto& res = *site.resource;
    if (auto it = sc.bloom.find(res.id); it != sc.bloom.end() && !it->second.active(day)) {
      continue;
    }
    if (res.kind == flora::ResourceKind::kNectar) {
      o.nectar.push_back(market::nectar_option(res, site.distance, site.quality, sc.foraging));
    } else {
      o.pollen.push_back(market::pollen_option(res, site.distance, sc.foraging, sc.market.xi));
    }
  }
  o.ranked = market::rank_nectar(o.nectar);
  return o;
}

const market::NectarOption* find_nectar(const Options& o, int id) {
  for (const auto& n : o.nectar) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const market::PollenOption* find_pollen(const Options& o, int id) {
  for (const auto& p : o.pollen) {
    if (p.id() == id) return &p;
  }
  return nullptr;
}

const Setup::Site* find_site(const Setup& s, int id) {
  for (const auto& site : s.sites) {
    if (site.resource->id == id) return &site;
  }
  return nullptr;
}

// When the market has no consistent answer: pollen by the deficit ranking up
// to the requested income, then nectar by efficiency, tau left undefined.
market::ExchangeSolution best_effort(const Options& o, double min_income, double budget) {
  market::ExchangeSolution s;
  s.path = market::SolvePath::kDeficit;
  std::vector<const market::PollenOption*> order;
  for (const auto& p : o.pollen) {
    if (p.efficiency.capacity > 0.0 && p.income_per_bee > 0.0) order.push_back(&p);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    if (a->efficiency.slope != b->efficiency.slope) return a->efficiency.slope > b->efficiency.slope;
    return a->id() < b->id();
  });
  double left = budget;
  double income_left = min_income;
  for (const auto* p : order) {
    if (income_left <= 0.0 || left <= 0.0) break;
    const double bees = std::min({p->efficiency.capacity, income_left / p->income_per_bee, left});
    s.pollen.assigned.push_back({p->id(), bees});
    s.pollen.total += bees;
    s.pollen_income += bees * p->income_per_bee;
    s.pollen_cost += bees * p->efficiency.cost();
    income_left -= bees * p->income_per_bee;
    left -= bees;
  }
  for (const auto& n : o.ranked) {
    if (left <= 0.0) break;
    const double bees = std::min(n.capacity, left);
    s.nectar.assigned.push_back({n.id, bees});
    s.nectar.total += bees;
    s.eta_cut = n.efficiency;
    left -= bees;
  }
  s.pollen.reserve = std::max(0.0, left);
  return s;
}

// Previous plan restricted to resources still in flower and scaled down to
// today's forager count.
market::ExchangeSolution frozen(const market::ExchangeSolution& last,
                                std::span<const market::NectarOption> nectar,
                                std::span<const market::PollenOption> pollen, double budget) {
  market::ExchangeSolution s = last;
  s.path = market::SolvePath::kFrozen;
  s.trace.clear();
  s.notes = {"balanced: previous allocation kept"};
  auto keep = [&](foraging::AllocationPlan& plan, bool is_nectar) {
    foraging::AllocationPlan out;
    for (const auto& a : plan.assigned) {
      const bool present =
          is_nectar ? std::any_of(nectar.begin(), nectar.end(), [&](auto& n) { return n.id == a.id; })
                    : std::any_of(pollen.begin(), pollen.end(), [&](auto& q) { return q.id() == a.id; });
      if (present) {
        out.assigned.push_back(a);
        out.total += a.bees;
      }
    }
    plan = out;
  };
  keep(s.nectar, true);
  keep(s.pollen, false);
  const double used = s.nectar.total + s.pollen.total;
  if (used > budget && used > 0.0) {
    const double scale = budget / used;
    for (auto* plan : {&s.nectar, &s.pollen}) {
      plan->total = 0.0;
      for (auto& a : plan->assigned) {
        a.bees *= scale;
        plan->total += a.bees;
      }
    }
  }
  s.pollen.reserve = std::max(0.0, budget - s.nectar.total - s.pollen.total);
  s.pollen_income = 0.0;
  s.pollen_cost = 0.0;
  for (const auto& a : s.pollen.assigned) {
    for (const auto& q : pollen) {
      if (q.id() != a.id) continue;
      s.pollen_income += a.bees * q.income_per_bee;
      s.pollen_cost += a.bees * q.efficiency.cost();
    }
  }
  return s;
}

struct Consumption {
  double heating_power = 0.0;
  double upkeep_power = 0.0;
  double eggs = 0.0;
  double emerged = 0.0;
  std::vector<double> brood;  // pipeline after today's shift and laying
  double honey_brood = 0.0;
  double pollen_brood = 0.0;
  double honey_upkeep = 0.0;
  double honey_heating = 0.0;
};

Consumption consumption(const ColonyState& col, const Scenario& sc, const Setup& setup,
                        const WeatherDay& w) {
  const auto& c = sc.coefficients;
  Consumption u;
  const double nurses =
      setup.nurse_task >= 0
          ? demography::cohort_count(col.population, sc.schedule, setup.nurse_task)
          : 0.0;
  const double adults = col.population.total();
  if (w.winter) {
    u.heating_power = thermo::cluster_heating_power(adults, w.t_out, winter_thermal(sc.thermal));
  } else {
    auto p = sc.thermal;
    p.t_target = col.larvae() > 0.0 ? p.t_brood : p.t_center_min;
    u.heating_power = thermo::active_heating_power(nurses, w.t_out, p);
  }
  u.upkeep_power = c.pi * adults;

  // Larvae are fed alpha/brood_days and alpha~/brood_days on each day from
  // laying to the eve of emergence.
  u.eggs = w.winter ? 0.0 : quantize(std::min(sc.queen_rate, sc.nurse_capacity * nurses));
  u.brood.assign(static_cast<std::size_t>(sc.brood_days), 0.0);
  std::copy_n(col.brood.begin(), std::min(col.brood.size(), u.brood.size()), u.brood.begin());
  u.emerged = u.brood.back();
  std::rotate(u.brood.rbegin(), u.brood.rbegin() + 1, u.brood.rend());
  u.brood.front() = u.eggs;
  double fed = 0.0;
  for (double b : u.brood) fed += b;
  const double bd = static_cast<double>(sc.brood_days);
  u.honey_brood = quantize(fed * c.alpha / (bd * c.mu));
  u.pollen_brood = quantize(fed * c.alpha_tilde / bd);
  u.honey_upkeep = quantize(u.upkeep_power * kSecondsPerDay / c.mu);
  u.honey_heating = quantize(u.heating_power * kSecondsPerDay / c.mu);
  return u;
}

// Forager power during the foraging hours that covers the whole day's honey
// consumption.
double nectar_need(const Consumption& u, double t_f, const EnergyCoefficients& c) {
  const double daily =
      (u.honey_upkeep + u.honey_heating + u.honey_brood) * c.mu;
  return daily / t_f;
}

// Removes `deaths` bees from the forager cohort in proportion to each age
// class; returns the exact number removed.
double remove_foragers(demography::AgeStructure& pop, std::pair<int, int> window,
                       double available, double deaths) {
  if (!(deaths > 0.0) || !(available > 0.0)) return 0.0;
  const double frac = std::min(1.0, deaths / available);
  double removed = 0.0;
  for (int d = window.first; d <= window.second; ++d) {
    double& n = pop.females[static_cast<std::size_t>(d)];
    const double k = quantize(n * frac);
    n -= k;
    removed += k;
  }
  return removed;
}

}  // namespace

market::ExchangeSolution solve_regime(market::Regime regime,
                                      std::span<const market::NectarOption> nectar,
                                      std::span<const market::PollenOption> pollen,
                                      double budget, double base_need, double min_income,
                                      const market::MarketParams& params,
                                      const market::ExchangeSolution* previous) {
  const auto ranked = market::rank_nectar({nectar.begin(), nectar.end()});
  switch (regime) {
    case market::Regime::kBalanced:
      if (previous != nullptr && previous->path != market::SolvePath::kIdle) {
        return frozen(*previous, nectar, pollen, budget);
      }
      [[fallthrough]];
    case market::Regime::kDeficit:
      return market::solve_case_A(ranked, pollen, min_income, budget);
    case market::Regime::kSurplus:
      break;
  }
  if (pollen.empty()) {
    auto s = market::solve_case_A(ranked, pollen, 0.0, budget);
    s.path = market::SolvePath::kSurplus;
    return s;
  }
  try {
    return market::solve_case_B(ranked, pollen, budget, base_need, params.tolerance,
                                params.max_iter);
  } catch (const market::MarketError& e) {
    if (e.reason() != market::MarketError::Reason::kInfiniteT0) throw;
  }
  return market::solve_case_B_scarce(nectar, pollen, budget, base_need, params);
}

MarketInputs market_inputs(const Scenario& sc, const Setup& setup, const SimState& state,
                           int day_index) {
  const auto& c = sc.coefficients;
  const auto& w = sc.weather_on(day_index);
  const auto& col = state.colony;
  MarketInputs in;
  in.r_hive = market::hive_ratio(col, c.mu);
  in.r_target = setup.r_target;
  in.regime = market::classify_regime(col, setup.r_target, sc.market.hysteresis, c.mu);
  in.budget = setup.forager_task >= 0
                  ? demography::cohort_count(col.population, sc.schedule, setup.forager_task)
                  : 0.0;
  in.foraging_seconds = w.winter ? 0.0 : w.foraging_hours * 3600.0;
  const auto opts = build_options(sc, setup, day_index);
  in.nectar = opts.nectar;
  in.pollen = opts.pollen;
  if (in.foraging_seconds > 0.0) {
    const auto use = consumption(col, sc, setup, w);
    in.base_need = nectar_need(use, in.foraging_seconds, c);
    in.min_income = std::max(sc.market.min_pollen_income, use.pollen_brood / in.foraging_seconds);
  }
  return in;
}

StepResult step_day(const SimState& state, const Scenario& sc, const Setup& setup,
                    int day_index) {
  const auto& c = sc.coefficients;
  const auto& w = sc.weather_on(day_index);
  const ColonyState& col = state.colony;
  const int age_max = sc.survival.max_age();

  StepResult out;
  DailyReport& r = out.report;
  r.day = day_index;
  r.winter = w.winter;
  r.t_out = w.t_out;
  r.foraging_hours = w.foraging_hours;
  r.r_target = setup.r_target;
  r.r_hive = market::hive_ratio(col, c.mu);

  // 1. regime
  r.regime = market::classify_regime(col, setup.r_target, sc.market.hysteresis, c.mu);

  const double foragers =
      setup.forager_task >= 0
          ? demography::cohort_count(col.population, sc.schedule, setup.forager_task)
          : 0.0;

  // Consumption does not depend on the allocation, so it is settled first
  // and informs the market's nectar need.
  Consumption use = consumption(col, sc, setup, w);
  r.heating_power = use.heating_power;
  r.upkeep_power = use.upkeep_power;
  r.eggs_laid = use.eggs;
  r.emerged = use.emerged;
  r.honey_brood = use.honey_brood;
  r.pollen_brood = use.pollen_brood;
  r.honey_upkeep = use.honey_upkeep;
  r.honey_heating = use.honey_heating;
  std::vector<double> brood = std::move(use.brood);

  // 2. market
  const double t_f = w.foraging_hours * 3600.0;
  const bool can_forage = !w.winter && t_f > 0.0 && foragers > 0.0;
  out.state = state;
  market::ExchangeSolution sol;
  Options opts;
  if (can_forage) {
    opts = build_options(sc, setup, day_index);
    if (opts.ranked.empty() && opts.pollen.empty()) {
      sol = market::ExchangeSolution{};
      sol.pollen.reserve = foragers;
    } else {
      const double base_need = nectar_need(use, t_f, c);
      const double min_income = std::max(sc.market.min_pollen_income, use.pollen_brood / t_f);
      const market::ExchangeSolution* prev = state.has_last ? &state.last : nullptr;
      try {
        sol = solve_regime(r.regime, opts.nectar, opts.pollen, foragers, base_need, min_income,
                           sc.market, prev);
      } catch (const market::MarketError& e) {
        r.status = std::string("market: ") + e.what();
        sol = best_effort(opts, min_income, foragers);
        sol.notes.push_back(r.status);
      }
    }
  } else {
    sol.pollen.reserve = foragers;
  }
  if (can_forage) {
    out.state.last = sol;
    out.state.has_last = true;
  }
  if (sol.tau_defined) out.state.tau = sol.tau;
  r.path = sol.path;
  r.tau = sol.tau_defined ? sol.tau : std::numeric_limits<double>::quiet_NaN();
  r.nectar_foragers = sol.nectar.total;
  r.pollen_foragers = sol.pollen.total;
  r.reserve_foragers = std::max(0.0, foragers - sol.nectar.total - sol.pollen.total);

  // 3. income
  double nectar_energy = 0.0;
  for (const auto& a : sol.nectar.assigned) {
    if (const auto* n = find_nectar(opts, a.id)) nectar_energy += a.bees * n->efficiency * t_f;
  }
  double pollen_mass = 0.0;
  double pollen_trip_energy = 0.0;
  for (const auto& a : sol.pollen.assigned) {
    if (const auto* p = find_pollen(opts, a.id)) {
      pollen_mass += a.bees * p->income_per_bee * t_f;
      pollen_trip_energy += a.bees * p->efficiency.cost() * t_f;
    }
  }
  r.honey_foraged = quantize(nectar_energy / c.mu);
  r.honey_pollen_trips = quantize(pollen_trip_energy / c.mu);
  r.pollen_foraged = quantize(pollen_mass);

  // 4. predation on assigned foragers, then natural mortality
  demography::AgeStructure pop = col.population;
  if (can_forage && setup.forager_task >= 0) {
    const double tau = out.state.tau;
    const double p_flight =
        foraging::predation_flight_rate(tau, c, sc.foraging, sc.predation);
    double expected = 0.0;
    auto add = [&](const foraging::AllocationPlan& plan) {
      for (const auto& a : plan.assigned) {
        const auto* site = find_site(setup, a.id);
        if (site == nullptr || !(a.bees > 0.0)) continue;
        auto pred = sc.predation;
        pred.rho_crit_local = std::max(pred.rho_crit_local,
                                       flora::critical_density(*site->resource, sc.foraging));
        const double p_foraging = foraging::predation_foraging_rate(
            *site->resource, tau, c, sc.foraging, pred);
        const auto& cy = site->cycle;
        const double rate =
            p_flight * (cy.t_flight / cy.total) + p_foraging * (cy.t_foraging / cy.total);
        expected += a.bees * std::min(1.0, rate * t_f);
      }
    };
    add(sol.nectar);
    add(sol.pollen);
    r.deaths_predation = remove_foragers(
        pop, sc.schedule.window(static_cast<std::size_t>(setup.forager_task), age_max),
        foragers, expected);
  }
  r.deaths_natural = demography::daily_mortality(pop, sc.survival);

  // 5-8. stocks, brood, ageing
  ColonyState& next = out.state.colony;
  next.honey = col.honey + r.honey_foraged - r.honey_pollen_trips - r.honey_upkeep -
               r.honey_heating - r.honey_brood;
  next.pollen = col.pollen + r.pollen_foraged - r.pollen_brood;
  next.comb = col.comb;
  next.brood = std::move(brood);
  next.population = demography::advance_day(pop, sc.survival, r.emerged);

  r.honey = next.honey;
  r.pollen = next.pollen;
  r.comb = next.comb;
  r.females = next.population.total_females();
  r.males = next.population.males;
  r.larvae = next.larvae();
  r.foragers = setup.forager_task >= 0
                   ? demography::cohort_count(next.population, sc.schedule, setup.forager_task)
                   : 0.0;
  r.nurses = setup.nurse_task >= 0
                 ? demography::cohort_count(next.population, sc.schedule, setup.nurse_task)
                 : 0.0;
  r.energy = demography::total_energy(next, c);

  if (next.honey < 0.0 || next.pollen < 0.0) {
    out.halted = true;
    r.status = next.honey < 0.0 ? "starved: honey" : "starved: pollen";
  }
  return out;
}

StepResult step_day(const SimState& state, const Scenario& sc, int day_index) {
  return step_day(state, sc, prepare(sc), day_index);
}

RunResult run(const Scenario& sc) {
  sc.validate();
  const Setup setup = prepare(sc);
  RunResult out;
  out.final_state = initial_state(sc);
  out.reports.reserve(static_cast<std::size_t>(sc.horizon));
  for (int day = 0; day < sc.horizon; ++day) {
    auto step = step_day(out.final_state, sc, setup, day);
    out.reports.push_back(std::move(step.report));
    if (step.halted) {
      out.halted = true;
      break;
    }
    out.final_state = std::move(step.state);
  }
  return out;
}

WinterCheck winter_survival_check(const ColonyState& state, const WeatherSeries& winter,
                                  const EnergyCoefficients& c,
                                  const thermo::ThermalParams& p) {
  WinterCheck w;
  w.r_hive = market::hive_ratio(state, c.mu);
  if (winter.empty()) {
    w.r_target = c.alpha / c.alpha_tilde;
    return w;
  }
  const auto pw = winter_thermal(p);
  const double n = state.population.total();
  for (const auto& day : winter.days) {
    w.need += (thermo::cluster_heating_power(n, day.t_out, pw) + c.pi * n) * kSecondsPerDay;
  }
  w.r_target = n > 0.0 ? market::target_ratio(c.alpha, c.alpha_tilde, winter, n, pw)
                       : c.alpha / c.alpha_tilde;
  const double stock = c.mu * state.honey;
  w.survives = stock >= w.need && w.r_hive >= w.r_target;
  const double daily = w.need / static_cast<double>(winter.size());
  if (daily > 0.0) {
    w.margin_days = (stock - w.need) / daily;
  } else {
    w.margin_days = stock >= 0.0 ? kInf : -kInf;
  }
  return w;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "day", "winter", "t_out_C", "foraging_hours", "regime", "path", "tau",
      "r_hive", "r_target", "status", "nectar_foragers", "pollen_foragers",
      "reserve_foragers", "honey_foraged_g", "honey_pollen_trips_g", "honey_upkeep_g",
      "honey_heating_g", "honey_brood_g", "pollen_foraged_g", "pollen_brood_g",
      "emerged", "deaths_natural", "deaths_predation", "eggs_laid", "heating_W",
      "upkeep_W", "honey_g", "pollen_g", "comb_g", "females", "males", "foragers",
      "nurses", "larvae", "energy_J",
  };
  return cols;
}

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<DailyReport>& reports) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : reports) {
    out << r.day << ',' << (r.winter ? 1 : 0) << ',' << num(r.t_out) << ','
        << num(r.foraging_hours) << ',' << market::to_string(r.regime) << ','
        << market::to_string(r.path) << ',' << num(r.tau) << ',' << num(r.r_hive) << ','
        << num(r.r_target) << ',' << '"' << r.status << '"' << ',' << num(r.nectar_foragers)
        << ',' << num(r.pollen_foragers) << ',' << num(r.reserve_foragers) << ','
        << num(r.honey_foraged) << ',' << num(r.honey_pollen_trips) << ','
        << num(r.honey_upkeep) << ',' << num(r.honey_heating) << ',' << num(r.honey_brood)
        << ',' << num(r.pollen_foraged) << ',' << num(r.pollen_brood) << ','
        << num(r.emerged) << ',' << num(r.deaths_natural) << ','
        << num(r.deaths_predation) << ',' << num(r.eggs_laid) << ','
        << num(r.heating_power) << ',' << num(r.upkeep_power) << ',' << num(r.honey)
        << ',' << num(r.pollen) << ',' << num(r.comb) << ',' << num(r.females) << ','
        << num(r.males) << ',' << num(r.foragers) << ',' << num(r.nurses) << ','
        << num(r.larvae) << ',' << num(r.energy) << '\n';
  }
}

nlohmann::json summary_json(const Scenario& sc, const RunResult& result) {
  nlohmann::json j;
  j["horizon_days"] = sc.horizon;
  j["days_completed"] = result.halted ? result.reports.size() - 1 : result.reports.size();
  j["halted"] = result.halted;
  j["status"] = result.reports.empty() ? "ok" : result.reports.back().status;
  double foraged = 0, pollen = 0, pred = 0, nat = 0, eggs = 0;
  for (const auto& r : result.reports) {
    foraged += r.honey_foraged;
    pollen += r.pollen_foraged;
    pred += r.deaths_predation;
    nat += r.deaths_natural;
    eggs += r.eggs_laid;
  }
  j["totals"] = {{"honey_foraged_g", foraged},
                 {"pollen_foraged_g", pollen},
                 {"deaths_predation", pred},
                 {"deaths_natural", nat},
                 {"eggs_laid", eggs}};
  const auto& s = result.final_state.colony;
  j["final"] = {{"honey_g", s.honey},
                {"pollen_g", s.pollen},
                {"comb_g", s.comb},
                {"females", s.population.total_females()},
                {"males", s.population.males},
                {"larvae", s.larvae()},
                {"energy_J", demography::total_energy(s, sc.coefficients)}};
  const Setup setup = prepare(sc);
  j["r_target"] = setup.r_target;
  const auto winter = sc.weather.winter_only();
  const auto check =
      winter_survival_check(s, winter, sc.coefficients, sc.thermal);
  j["winter_check"] = {{"survives", check.survives},
                       {"need_J", check.need},
                       {"r_hive", check.r_hive},
                       {"r_target", check.r_target}};
  if (std::isfinite(check.margin_days)) {
    j["winter_check"]["margin_days"] = check.margin_days;
  } else {
    j["winter_check"]["margin_days"] = nullptr;
  }
  return j;
}

}  // namespace apiary::sim
