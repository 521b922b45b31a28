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

#include "apiary/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace apiary::thermo {

void ThermalParams::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("thermal.theta must be > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("thermal.kappa must be > 0");
  if (nu < 1) throw std::invalid_argument("thermal.nu must be >= 1");
  if (!(r_bee > 0.0)) throw std::invalid_argument("thermal.r_bee must be > 0");
}

double active_heating_power(double n_heaters, double t_out, const ThermalParams& p) {
  if (n_heaters < 0.0) throw std::invalid_argument("negative heater count");
  return p.theta * n_heaters * std::abs(p.t_target - t_out);
}

namespace {

void check_radius(double r, double radius) {
  if (!(radius > 0.0)) throw std::domain_error("cluster radius must be > 0");
  if (!(r >= 0.0 && r <= radius)) throw std::domain_error("r outside [0, R]");
}

}  // namespace

double cluster_temperature(double r, double radius, double t_out,
                           const ThermalParams& p) {
  check_radius(r, radius);
  return p.t_target - (p.t_target - t_out) * std::pow(r / radius, 2 * p.nu);
}

double cluster_temperature_slope(double r, double radius, double t_out,
                                 const ThermalParams& p) {
  check_radius(r, radius);
  const int k = 2 * p.nu;
  return -(p.t_target - t_out) * k * std::pow(r, k - 1) / std::pow(radius, k);
}

SourceDensity cluster_source_density(double r, double radius, double t_out,
                                     const ThermalParams& p) {
  check_radius(r, radius);
  const int k = 2 * p.nu;
  const double gap = p.t_target - t_out;
  if (r == 0.0 && p.nu > 1) return {0.0, true};
  return {k * (k + 1) * gap * std::pow(r, k - 2) / std::pow(radius, k), false};
}

double local_source_from_gradient(double grad_norm, double t_local,
                                  const ThermalParams& p) {
  const double below = p.t_target - t_local;
  if (!(below > 0.0)) {
    throw std::domain_error("local temperature at or above target");
  }
  const double k = 2.0 * p.nu;
  return (k + 1.0) / k * grad_norm * grad_norm / below;
}

double cluster_heating_power(double n_bees, double t_out, const ThermalParams& p) {
  if (n_bees < 0.0) throw std::invalid_argument("negative cluster size");
  const double gap = p.t_target - t_out;
  if (gap <= 0.0) return 0.0;
  return p.kappa * std::cbrt(n_bees) * gap;
}

double cluster_radius(double n_bees, const ThermalParams& p) {
  return p.r_bee * std::cbrt(n_bees);
}

}  // namespace apiary::thermo
