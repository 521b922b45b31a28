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

namespace apiary::thermo {

struct ThermalParams {
  double theta = 0.0005;  // W/K per heating bee
  double kappa = 0.03;  // W/(K bee^(1/3)), winter cluster
  int nu = 1;  // cluster profile exponent
  double t_brood = 35.5;  // C
  double t_center_min = 20.0;  // C
  double t_target = 35.5;  // C, target currently pursued
  double r_bee = 0.004;  // m, cluster radius R = r_bee N^(1/3)

  void validate() const;
};

/// theta N_h |T_target - T_out|.
double active_heating_power(double n_heaters, double t_out, const ThermalParams& p);

/// Stationary cluster profile T(r) = T_target - (T_target - T_out)(r/R)^(2 nu).
/// Throws std::domain_error for r outside [0, R].
double cluster_temperature(double r, double radius, double t_out,
                           const ThermalParams& p);

/// Radial derivative of cluster_temperature.
double cluster_temperature_slope(double r, double radius, double t_out,
                                 const ThermalParams& p);

struct SourceDensity {
  double value = 0.0;  // K/m^2
  bool singular = false;  // r = 0 with nu > 1; value is the limit 0
};

/// Heat source keeping the cluster profile stationary:
/// 2 nu (2 nu + 1) (T_target - T_out) r^(2 nu - 2) / R^(2 nu).
SourceDensity cluster_source_density(double r, double radius, double t_out,
                                     const ThermalParams& p);

/// Source a bee can compute from its surroundings alone:
/// (2 nu + 1)/(2 nu) |grad T|^2 / (T_target - T). Published with the positive
/// sign so sources are nonnegative. Throws std::domain_error when
/// t_local >= t_target (the core cell).
double local_source_from_gradient(double grad_norm, double t_local,
                                  const ThermalParams& p);

/// kappa N^(1/3) (T_target - T_out); zero when it is warmer outside.
double cluster_heating_power(double n_bees, double t_out, const ThermalParams& p);

/// r_bee N^(1/3).
double cluster_radius(double n_bees, const ThermalParams& p);

}  // namespace apiary::thermo
