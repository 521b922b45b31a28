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
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "apiary/thermo.hpp"

using namespace apiary::thermo;

namespace {

ThermalParams with(double target, int nu = 1) {
  ThermalParams p;
  p.t_target = target;
  p.nu = nu;
  return p;
}

double sphere_integral(double radius, double t_out, const ThermalParams& p) {
  auto f = [&](double r) {
    return cluster_source_density(r, radius, t_out, p).value * r * r;
  };
  return 4.0 * std::numbers::pi *
         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, radius, 10, 1e-14);
}

}  // namespace

TEST_CASE("parameter validation") {
  ThermalParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.t_brood == 35.5);
  p.nu = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ThermalParams{};
  p.kappa = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("active heating") {
  auto p = with(30.0);
  CHECK(active_heating_power(500.0, 30.0, p) == 0.0);
  CHECK(active_heating_power(0.0, 10.0, p) == 0.0);
  p.theta = 0.5;
  CHECK(active_heating_power(100.0, 20.0, p) == 500.0);
  CHECK(active_heating_power(200.0, 20.0, p) == 2.0 * active_heating_power(100.0, 20.0, p));
  CHECK_THROWS_AS(active_heating_power(-1.0, 20.0, p), std::invalid_argument);
}

TEST_CASE("cluster temperature profile") {
  const auto p = with(35.0);
  CHECK(cluster_temperature(0.0, 0.2, -5.0, p) == 35.0);
  CHECK(cluster_temperature(0.2, 0.2, -5.0, p) == doctest::Approx(-5.0));
  CHECK(cluster_temperature(0.1, 0.2, -5.0, p) == doctest::Approx(25.0));
  double prev = cluster_temperature(0.0, 0.2, -5.0, p);
  for (int i = 1; i <= 100; ++i) {
    const double t = cluster_temperature(0.002 * i, 0.2, -5.0, p);
    CHECK(t < prev);
    prev = t;
  }
  CHECK_THROWS_AS(cluster_temperature(0.3, 0.2, -5.0, p), std::domain_error);
  CHECK_THROWS_AS(cluster_temperature(-0.1, 0.2, -5.0, p), std::domain_error);
}

TEST_CASE("cluster source density") {
  const auto p = with(35.0);
  // nu = 1: uniform 6 dT / R^2.
  for (double r : {0.0, 0.05, 0.1, 0.2}) {
    CHECK(cluster_source_density(r, 0.2, -5.0, p).value == doctest::Approx(6000.0));
  }
  CHECK(cluster_source_density(0.1, 0.2, 35.0, p).value == 0.0);

  const auto p2 = with(35.0, 2);
  const auto core = cluster_source_density(0.0, 0.2, -5.0, p2);
  CHECK(core.singular);
  CHECK(core.value == 0.0);
  const double a = cluster_source_density(0.01, 0.2, -5.0, p2).value;
  const double b = cluster_source_density(0.02, 0.2, -5.0, p2).value;
  CHECK(b / a == doctest::Approx(4.0));
}

TEST_CASE("local source law reproduces the cluster source") {
  for (int nu : {1, 2, 3}) {
    const auto p = with(35.0, nu);
    const double R = 0.15;
    // Near the core T_target - T cancels, so the error is bounded against the rim value.
    const double scale = cluster_source_density(R, R, -3.0, p).value;
    for (int i = 1; i <= 100; ++i) {
      const double r = R * i / 101.0;
      const double g = std::abs(cluster_temperature_slope(r, R, -3.0, p));
      const double t = cluster_temperature(r, R, -3.0, p);
      const double local = local_source_from_gradient(g, t, p);
      const double direct = cluster_source_density(r, R, -3.0, p).value;
      CHECK(std::abs(local - direct) <= 1e-9 * scale);
    }
  }
  const auto p = with(35.0);
  CHECK(local_source_from_gradient(0.0, 20.0, p) == 0.0);
  CHECK(local_source_from_gradient(3.0, 20.0, p) ==
        doctest::Approx(9.0 * local_source_from_gradient(1.0, 20.0, p)));
  CHECK_THROWS_AS(local_source_from_gradient(1.0, 35.0, p), std::domain_error);
}

TEST_CASE("cluster heating power") {
  auto p = with(20.0);
  p.kappa = 1.0;
  CHECK(cluster_heating_power(1000.0, 0.0, p) == doctest::Approx(200.0));
  CHECK(cluster_heating_power(1000.0, 20.0, p) == 0.0);
  CHECK(cluster_heating_power(1000.0, 25.0, p) == 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double n = u(rng);
    CHECK(cluster_heating_power(8.0 * n, 3.0, p) == 2.0 * cluster_heating_power(n, 3.0, p));
  }
}

TEST_CASE("sphere quadrature scales with R dT") {
  for (int nu : {1, 2}) {
    const auto p = with(35.0, nu);
    const double expected = 8.0 * std::numbers::pi * nu;  // 4 pi (2 nu)
    for (double R : {0.1, 0.2, 0.4}) {
      for (double dT : {10.0, 20.0, 40.0}) {
        const double ratio = sphere_integral(R, 35.0 - dT, p) / (R * dT);
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}
