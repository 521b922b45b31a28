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

#include "apiary/foraging.hpp"

#include <cmath>
#include <stdexcept>

namespace apiary::foraging {

void PredationParams::validate(const ForagingParams& p) const {
  if (!(d_max_local > 0.0)) throw std::invalid_argument("predation.d_max_local must be > 0");
  if (d_max_local > p.d_max) {
    throw std::invalid_argument("predation.d_max_local exceeds d_max");
  }
  if (rho_crit_local < 0.0) throw std::invalid_argument("predation.rho_crit_local must be >= 0");
  if (!(l_forager > 0.0 && l_average > 0.0)) {
    throw std::invalid_argument("predation lifespans must be > 0");
  }
  if (l_forager > l_average) {
    throw std::invalid_argument("predation.l_forager exceeds l_average");
  }
}

double AllocationPlan::bees_on(int id) const {
  for (const auto& a : assigned) {
    if (a.id == id) return a.bees;
  }
  return 0.0;
}

TripCycle trip_cycle(const FloralResource& res, double d, const ForagingParams& p) {
  if (d < 0.0) throw std::invalid_argument("negative distance");
  TripCycle t;
  t.t_hive = p.t_hive;
  t.t_flight = 2.0 * d / p.v_cruise;
  t.t_foraging = res.m * (res.beta + p.k(res.n) / (p.v_hop * std::pow(res.rho, 1.0 / res.n)));
  t.total = t.t_hive + t.t_flight + t.t_foraging;
  return t;
}

double foragers_required(const FloralResource& res, double d, const ForagingParams& p) {
  return res.area * res.rho * (res.lambda / res.q) * trip_cycle(res, d, p).total;
}

double resource_power_gain(const FloralResource& res, double field_quality,
                           const ForagingParams& p) {
  if (field_quality <= 0.0) return 0.0;
  return res.area * res.rho * res.lambda * (p.q0 / res.q) * field_quality;
}

double efficiency(const FloralResource& res, double d, double field_quality,
                  const ForagingParams& p) {
  return p.q0 * field_quality / trip_cycle(res, d, p).total;
}

namespace {

// 1 + tau (alpha~ q0 / (alpha q0~)) L_f / (2 L_avg); the cost of a death in
// units of alpha.
double death_cost_factor(double tau, const EnergyCoefficients& c, const ForagingParams& p,
                         const PredationParams& pred) {
  if (tau < 0.0) throw std::invalid_argument("negative exchange rate");
  return 1.0 + tau * (c.alpha_tilde * p.q0 / (c.alpha * p.q0_tilde)) *
                   (pred.l_forager / (2.0 * pred.l_average));
}

}  // namespace

double predation_cost_per_death(double tau, const EnergyCoefficients& c,
                                const ForagingParams& p, const PredationParams& pred) {
  if (tau < 0.0) throw std::invalid_argument("negative exchange rate");
  return c.alpha + tau * (c.alpha_tilde * p.q0 / p.q0_tilde) *
                       (pred.l_forager / (2.0 * pred.l_average));
}

double predation_flight_rate(double tau, const EnergyCoefficients& c,
                             const ForagingParams& p, const PredationParams& pred) {
  if (pred.d_max_local > p.d_max) {
    throw std::invalid_argument("d_max_local exceeds d_max");
  }
  const double per_metre = p.q0 * (1.0 / pred.d_max_local - 1.0 / p.d_max);
  return p.v_cruise * per_metre / (c.alpha * death_cost_factor(tau, c, p, pred));
}

double predation_foraging_rate(const FloralResource& res, double tau,
                               const EnergyCoefficients& c, const ForagingParams& p,
                               const PredationParams& pred) {
  const double crit = flora::critical_density(res, p);
  if (pred.rho_crit_local < crit) {
    throw std::invalid_argument("rho_crit_local below the resource's critical density");
  }
  const double kn = p.k(res.n);
  const double root = 1.0 / res.n;
  const double speed = 1.0 / (1.0 / p.v_hop + res.beta * std::pow(res.rho, root) / kn);
  const double excess = std::pow(pred.rho_crit_local, root) - std::pow(crit, root);
  return speed * p.q0 * excess / (c.alpha * kn * death_cost_factor(tau, c, p, pred));
}

}  // namespace apiary::foraging
