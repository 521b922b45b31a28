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

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "apiary/demography.hpp"
#include "apiary/flora.hpp"
#include "apiary/foraging.hpp"
#include "apiary/thermo.hpp"
#include "apiary/weather.hpp"

namespace apiary::market {

using flora::FloralResource;
using flora::ForagingParams;
using foraging::AllocationPlan;

// Exchange rate tau prices one reference pollen load in reference nectar
// loads: tau = 1 means q0~ grams of pollen are worth q0 joules of honey.

/// An affine function of tau with a head-count capacity. Used for pollen
/// efficiency eta~_f(tau) (W/bee) and, on the scarce path, pollen quality.
struct AffineEfficiency {
  int id = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double capacity = 0.0;

  double value(double tau) const { return slope * tau + intercept; }
  double cost() const { return -intercept; }
};

struct NectarOption {
  int id = 0;
  double efficiency = 0.0;  // W per bee
  double quality = 0.0;  // dimensionless field value at the hive
  double capacity = 0.0;  // bees
};

struct PollenOption {
  AffineEfficiency efficiency;
  AffineEfficiency quality;
  double income_per_bee = 0.0;  // g/s of reference-equivalent pollen

  int id() const { return efficiency.id; }
};

struct MarketParams {
  double xi = 1.0;
  double hysteresis = 0.05;
  double tolerance = 1e-6;
  int max_iter = 100;
  double tau_max = 100.0;
  double min_pollen_income = 0.0;  // g/s, deficit policy
  double winter_colony_size = 10000.0;  // bees

  void validate() const;
};

enum class Regime { kDeficit, kSurplus, kBalanced };
enum class SolvePath { kDeficit, kSurplus, kScarce, kFrozen, kIdle };

std::string to_string(Regime r);
std::string to_string(SolvePath p);

struct CutSegment {
  double start = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  int marginal = -1;  // resource id, -1 on the zero stretch
};

/// Piecewise-affine marginal efficiency eta~_cut(tau) on tau >= 0.
class CutFunction {
 public:
  CutFunction() = default;
  CutFunction(std::vector<CutSegment> segments, double t0, double t1)
      : segments_(std::move(segments)), t0_(t0), t1_(t1) {}

  double value(double tau) const;
  /// Smallest tau with value(tau) = level, for level > 0. Requires a finite t0.
  double inverse(double level) const;
  std::span<const CutSegment> segments() const { return segments_; }
  std::vector<double> breakpoints() const;
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool scarce() const { return t0_ == std::numeric_limits<double>::infinity(); }

 private:
  std::vector<CutSegment> segments_;
  double t0_ = std::numeric_limits<double>::infinity();
  double t1_ = 0.0;
};

struct ExchangeSolution {
  SolvePath path = SolvePath::kIdle;
  double tau = std::numeric_limits<double>::quiet_NaN();
  bool tau_defined = false;
  double eta_cut = 0.0;
  AllocationPlan nectar;
  AllocationPlan pollen;
  std::vector<double> trace;
  bool converged = true;
  double nectar_need = 0.0;  // W, surplus paths
  double pollen_income = 0.0;  // g/s
  double pollen_cost = 0.0;  // W of honey spent fetching pollen
  std::vector<std::string> notes;

  double reserve() const { return pollen.reserve; }
};

class MarketError : public std::runtime_error {
 public:
  enum class Reason {
    kInfeasiblePollenIncome,
    kNoUsefulNectar,
    kInfiniteT0,
    kNoPollenForagers,
    kEmptyResources,
  };
  MarketError(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Honey/pollen ratio the colony should hold entering winter:
/// per-bee ratio plus the cluster heating bill over the winter series (daily
/// rectangles) shared among n_winter bees.
double target_ratio(double per_bee_honey, double per_bee_pollen,
                    const WeatherSeries& winter, double n_winter,
                    const thermo::ThermalParams& p);

/// tau q~_f/q~0 - xi (d/d_max + (rho_crit/rho_f)^(1/n)).
double pollen_quality(const FloralResource& res, double d, double tau, double xi,
                      const ForagingParams& p);

/// eta~_f(tau) = q0 Q~_f(tau) / cycle, with the patch-exhausting head-count as capacity.
AffineEfficiency pollen_affine(const FloralResource& res, double d,
                               const ForagingParams& p, double xi);

PollenOption pollen_option(const FloralResource& res, double d, const ForagingParams& p,
                           double xi);
NectarOption nectar_option(const FloralResource& res, double d, double field_quality,
                           const ForagingParams& p);

/// Decreasing efficiency, ties by id. Drops worthless resources.
std::vector<NectarOption> rank_nectar(std::vector<NectarOption> options);
/// Decreasing quality, ties by id. Drops worthless resources.
std::vector<NectarOption> rank_nectar_by_quality(std::vector<NectarOption> options);

/// Exact piecewise-affine capacity envelope: at each tau, the value of the
/// resource where cumulative capacity (in decreasing value order) first
/// reaches `demand`, floored at zero. t0 is +inf when total capacity falls
/// short of demand.
CutFunction build_eta_cut(std::span<const AffineEfficiency> lines, double demand);

/// Fills `demand` bees greedily by decreasing value(tau), positive values only.
AllocationPlan allocate_at(std::span<const AffineEfficiency> lines, double demand,
                           double tau);

/// Deficit: secure the minimal pollen income with the costless ranking, send
/// the rest to nectar, and price pollen so the marginal pollen forager earns
/// the nectar cut plus the shared pollen cost.
ExchangeSolution solve_case_A(std::span<const NectarOption> nectar_ranked,
                              std::span<const PollenOption> pollen,
                              double min_pollen_income, double forager_budget);

/// Surplus with a finite t0: alternate nectar allocation and envelope
/// inversion, folding the pollen-fetching cost back into the nectar need.
ExchangeSolution solve_case_B(std::span<const NectarOption> nectar_ranked,
                              std::span<const PollenOption> pollen, double forager_budget,
                              double base_nectar_need, double tolerance, int max_iter);

/// Surplus under scarcity: the same iteration ranked by quality. Every pollen
/// patch is staffed and the envelope is the worst patch's quality; bees that
/// find no work stay in reserve.
ExchangeSolution solve_case_B_scarce(std::span<const NectarOption> nectar,
                                     std::span<const PollenOption> pollen,
                                     double forager_budget, double base_nectar_need,
                                     const MarketParams& params);

/// mu M / P in J/g; zero pollen reads as +inf unless honey is zero too.
double hive_ratio(const demography::ColonyState& state, double mu);

Regime classify_regime(const demography::ColonyState& state, double r_target,
                       double hysteresis, double mu);

nlohmann::json to_json(const AllocationPlan& plan);
nlohmann::json to_json(const ExchangeSolution& s);

}  // namespace apiary::market
