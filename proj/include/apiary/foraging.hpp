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

#include <vector>

#include "apiary/demography.hpp"
#include "apiary/flora.hpp"

namespace apiary::foraging {

using demography::EnergyCoefficients;
using flora::FloralResource;
using flora::ForagingParams;

struct TripCycle {
  double t_hive = 0.0;
  double t_flight = 0.0;  // 2 d / V
  double t_foraging = 0.0;  // m_f (beta_f + k_n / (v_hop rho_f^(1/n)))
  double total = 0.0;
};

struct PredationParams {
  double d_max_local = 10000.0;  // m
  double rho_crit_local = 0.0;  // flowers per m^n; 0 means no site predators
  double l_forager = 10.0;  // days
  double l_average = 30.0;  // days

  void validate(const ForagingParams& p) const;
};

struct Assignment {
  int id = 0;
  double bees = 0.0;
};

struct AllocationPlan {
  std::vector<Assignment> assigned;
  double total = 0.0;
  double reserve = 0.0;

  double bees_on(int id) const;
};

TripCycle trip_cycle(const FloralResource& res, double d, const ForagingParams& p);

/// Head-count that exhausts a patch: S rho_f (lambda_f / q_f) times the cycle.
double foragers_required(const FloralResource& res, double d, const ForagingParams& p);

/// S rho_f lambda_f (q0/q_f) Q_f, zero for a worthless patch.
double resource_power_gain(const FloralResource& res, double field_quality,
                           const ForagingParams& p);

/// q0 Q_f / cycle, net power per forager.
double efficiency(const FloralResource& res, double d, double field_quality,
                  const ForagingParams& p);

/// alpha + tau (alpha~ q0 / q0~) L_forager / (2 L_average).
double predation_cost_per_death(double tau, const EnergyCoefficients& c,
                                const ForagingParams& p, const PredationParams& pred);

/// Deaths per forager-second while flying between hive and patch.
double predation_flight_rate(double tau, const EnergyCoefficients& c,
                             const ForagingParams& p, const PredationParams& pred);

/// Deaths per forager-second on the patch itself.
double predation_foraging_rate(const FloralResource& res, double tau,
                               const EnergyCoefficients& c, const ForagingParams& p,
                               const PredationParams& pred);

}  // namespace apiary::foraging
