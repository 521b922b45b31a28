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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "apiary/cli.hpp"
#include "apiary/config.hpp"
#include "apiary/demography.hpp"
#include "apiary/flora.hpp"
#include "apiary/foraging.hpp"
#include "apiary/ledger.hpp"
#include "apiary/market.hpp"
#include "apiary/sim.hpp"
#include "apiary/thermo.hpp"
#include "oracles.hpp"

using namespace apiary;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(APIARY_SOURCE_DIR) / "configs";

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void constants() {
  cli::Command cmd{"check", kConfigs / "default.json", std::filesystem::temp_directory_path(), {}};
  std::ostringstream out, err;
  const int rc = cli::dispatch(cmd, out, err);
  std::istringstream lines(out.str());
  bool brood = false, dmax = false;
  for (std::string line; std::getline(lines, line);) {
    brood = brood || line == "t_brood_C 35.5";
    dmax = dmax || line == "d_max_m 10000";
  }
  verdict(1, rc == 0 && brood && dmax, "check output has t_brood_C 35.5 and d_max_m 10000");
}

void field_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> patches(1, 5);
  flora::ForagingParams p;
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 20; ++k) {
    const auto land = oracle::random_landscape(rng, 64, 64, patches(rng));
    const auto field = flora::quality_field(land, p);
    const auto brute = oracle::brute_field(land, p);
    for (std::size_t i = 0; i < brute.cells.size(); ++i) {
      worst = std::max(worst, std::abs(field.values.cells[i] - brute.cells[i]));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  verdict(2, worst < 1e-9 && secs < 5.0,
          fmt("field vs brute force: max error %.3g (< 1e-9), %.2f s (< 5 s)", worst, secs));
}

void eikonal() {
  flora::Landscape land;
  land.cell_size = 50.0;
  land.ids = flora::Raster<int>(256, 256, 0);
  land.ids(128, 128) = 1;
  flora::FloralResource res;
  res.id = 1;
  land.resources.push_back(res);
  flora::ForagingParams p;
  const auto e = flora::eikonal_residual(flora::quality_field(land, p), p);
  const double frac = e.fraction_within(0.05);
  verdict(3, !e.degenerate && frac >= 0.95,
          fmt("eikonal: %.4f of vacuum cells within 5%% of 1/d_max (>= 0.95)", frac));
}

void cluster_law() {
  thermo::ThermalParams p;
  p.t_target = 20.0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1.0, 1e6);
  bool exact = true;
  for (int i = 0; i < 1000; ++i) {
    const double n = u(rng);
    const double t = -20.0 + 30.0 * u(rng) / 1e6;
    const double h = thermo::cluster_heating_power(n, t, p);
    exact = exact && thermo::cluster_heating_power(8.0 * n, t, p) / h == 2.0;
  }
  p.t_target = 35.0;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (double R : {0.1, 0.2, 0.4}) {
    for (double dT : {10.0, 20.0, 40.0}) {
      auto f = [&](double r) {
        return thermo::cluster_source_density(r, R, 35.0 - dT, p).value * r * r;
      };
      const double total =
          4.0 * std::numbers::pi *
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, R, 10, 1e-14);
      const double ratio = total / (R * dT);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      sum += ratio;
    }
  }
  const double spread = (hi - lo) / (sum / 9.0);
  verdict(4, exact && spread < 1e-6,
          std::string("cluster power: h(8N)/h(N) == 2 ") + (exact ? "exactly" : "not exactly") +
              fmt(", quadrature spread %.3g (< 1e-6)", spread));
}

void efficiency_identity() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  flora::ForagingParams p;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    flora::FloralResource r;
    r.id = k + 1;
    r.q = 100.0 + 200.0 * u(rng);
    r.rho = 0.1 + 100.0 * u(rng);
    r.lambda = 1e-6 + 1e-3 * u(rng);
    r.m = 10.0 + 200.0 * u(rng);
    r.beta = 0.5 + 5.0 * u(rng);
    r.n = u(rng) < 0.5 ? 2 : 3;
    r.area = 10.0 + 1e6 * u(rng);
    const double d = 8000.0 * u(rng);
    const double q = 0.01 + u(rng);
    const double lhs = foraging::efficiency(r, d, q, p) * foraging::foragers_required(r, d, p);
    const double rhs = foraging::resource_power_gain(r, q, p);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  verdict(5, worst < 1e-12, fmt("efficiency x head-count = power gain: rel error %.3g (< 1e-12)", worst));
}

void cut_oracle() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  double worst = 0.0;
  bool structure = true;
  for (int k = 0; k < 50; ++k) {
    std::vector<market::AffineEfficiency> lines;
    double total = 0.0;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      lines.push_back({i + 1, 0.01 + u(rng), -u(rng), 10.0 + 90.0 * u(rng)});
      total += lines.back().capacity;
    }
    const double demand = total * (0.05 + 0.9 * u(rng));
    const auto cut = market::build_eta_cut(lines, demand);
    structure = structure && !cut.scarce();
    const double top = 2.0 * std::max(cut.t1(), 1.0);
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double tau = top * i / 999.0;
      const double v = cut.value(tau);
      worst = std::max(worst, std::abs(v - oracle::greedy_cut(lines, demand, tau)));
      structure = structure && v >= prev - 1e-12;
      if (tau <= cut.t0()) structure = structure && v == 0.0;
      prev = v;
    }
    for (double x : cut.breakpoints()) {
      const double left = cut.value(std::nextafter(x, -1.0));
      structure = structure && std::abs(cut.value(x) - left) < 1e-9;
    }
    const double a = cut.value(cut.t1() + 1.0), b = cut.value(cut.t1() + 2.0),
                 c = cut.value(cut.t1() + 5.0);
    structure = structure && b > a && std::abs((c - b) - 3.0 * (b - a)) < 1e-9;
  }
  verdict(6, worst < 1e-9 && structure,
          fmt("cut envelope vs greedy: max error %.3g (< 1e-9), structure ", worst) +
              (structure ? "ok" : "broken"));
}

void case_b() {
  std::mt19937_64 rng(4242);
  bool nested = true, converged = true;
  double worst_step = 0.0, worst_resolve = 0.0;
  std::size_t longest = 0;
  int errors = 0;
  for (int k = 0; k < 50; ++k) {
    const auto inst = oracle::random_surplus(rng);
    market::ExchangeSolution s;
    try {
      s = market::solve_case_B(inst.nectar, inst.pollen, inst.budget, inst.base_need, 1e-6, 100);
    } catch (const market::MarketError&) {
      ++errors;
      continue;
    }
    nested = nested && oracle::nested(s.trace, 1e-12);
    converged = converged && s.converged;
    longest = std::max(longest, s.trace.size());
    const std::size_t n = s.trace.size();
    if (n >= 2) worst_step = std::max(worst_step, std::abs(s.trace[n - 1] - s.trace[n - 2]));
    std::vector<market::AffineEfficiency> lines;
    for (const auto& p : inst.pollen) lines.push_back(p.efficiency);
    const auto fill = oracle::nectar_fill(inst.nectar, s.nectar_need, inst.budget);
    const double again = oracle::greedy_inverse(lines, inst.budget - fill.bees, fill.eta_cut);
    worst_resolve = std::max(worst_resolve, std::abs(again - s.tau));
  }
  const bool ok = errors == 0 && nested && converged && worst_step < 1e-6 && longest <= 101 &&
                  worst_resolve < 2e-6;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "case B: nested %s, converged %s, last step %.3g (< 1e-6), %zu iterates, "
                "re-solve shift %.3g (< 2e-6)",
                nested ? "yes" : "no", converged ? "yes" : "no", worst_step, longest,
                worst_resolve);
  verdict(7, ok, buf);
}

void ledger() {
  const auto path = kConfigs / "default.json";
  const auto sc = config::scenario_from_json(config::read_json(path), path.parent_path());
  const auto a = sim::run(sc);
  const auto b = sim::run(sc);
  const auto s0 = sim::initial_state(sc).colony;
  double honey = s0.honey, bees = s0.population.total();
  bool exact = !a.halted && a.reports.size() == 365;
  for (const auto& r : a.reports) {
    honey = honey + r.honey_foraged - r.honey_pollen_trips - r.honey_upkeep - r.honey_heating -
            r.honey_brood;
    bees = bees + r.emerged - r.deaths_natural - r.deaths_predation;
    exact = exact && demography::total_energy(honey, bees, r.comb, sc.coefficients) == r.energy;
  }
  std::ostringstream x, y;
  sim::write_reports_csv(x, a.reports);
  sim::write_reports_csv(y, b.reports);
  const bool same = x.str() == y.str();
  verdict(8, exact && same,
          std::string("365-day ledger: E rebuilt bit for bit ") + (exact ? "yes" : "no") +
              ", repeat run byte-identical " + (same ? "yes" : "no"));
}

void conservation() {
  const int L = 40;
  const auto flat = demography::SurvivalCurve::flat(L);
  demography::AgeStructure p;
  p.females.assign(L + 1, 0.0);
  for (int d = 0; d <= L; ++d) p = demography::advance_day(p, flat, 1234.5);
  bool fixed = std::all_of(p.females.begin(), p.females.end(), [](double n) { return n == 1234.5; });

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool conserved = true;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> s{1.0};
    for (int d = 1; d <= L; ++d) s.push_back(s.back() * (1.0 - 0.1 * u(rng)));
    const demography::SurvivalCurve curve(s);
    demography::AgeStructure pop;
    for (int d = 0; d <= L; ++d) pop.females.push_back(quantize(5000.0 * u(rng)));
    const double eggs = quantize(3000.0 * u(rng));
    const auto next = demography::advance_day(pop, curve, eggs);
    conserved = conserved && next.total_females() ==
                                 pop.total_females() - demography::daily_mortality(pop, curve) + eggs;
  }
  verdict(9, fixed && conserved,
          std::string("demography: fixed point ") + (fixed ? "exact" : "missed") +
              ", conservation on 100 states " + (conserved ? "exact" : "broken"));
}

void predation() {
  flora::ForagingParams p;
  demography::EnergyCoefficients c;
  foraging::PredationParams pred;
  flora::FloralResource res;
  res.rho = 5.0;
  pred.d_max_local = p.d_max;
  pred.rho_crit_local = flora::critical_density(res, p);
  const bool zeros = foraging::predation_flight_rate(0.7, c, p, pred) == 0.0 &&
                     foraging::predation_foraging_rate(res, 0.7, c, p, pred) == 0.0;
  pred.d_max_local = 0.6 * p.d_max;
  pred.rho_crit_local = 9.0 * flora::critical_density(res, p);
  bool decreasing = true;
  double pf = INFINITY, ps = INFINITY;
  for (int i = 0; i <= 100; ++i) {
    const double tau = 0.1 * i;
    const double f = foraging::predation_flight_rate(tau, c, p, pred);
    const double s = foraging::predation_foraging_rate(res, tau, c, p, pred);
    decreasing = decreasing && f < pf && s < ps;
    pf = f;
    ps = s;
  }
  verdict(10, zeros && decreasing,
          std::string("predation: exact zeros ") + (zeros ? "yes" : "no") +
              ", strictly decreasing in tau " + (decreasing ? "yes" : "no"));
}

}  // namespace

int main() {
  constants();
  field_oracle();
  eikonal();
  cluster_law();
  efficiency_identity();
  cut_oracle();
  case_b();
  ledger();
  conservation();
  predation();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
