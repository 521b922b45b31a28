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

#include "apiary/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace apiary::market {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSecondsPerDay = 86400.0;

}  // namespace

void MarketParams::validate() const {
  if (!(xi >= 0.0)) throw std::invalid_argument("market.xi must be >= 0");
  if (!(hysteresis >= 0.0 && hysteresis < 1.0)) {
    throw std::invalid_argument("market.hysteresis must be in [0, 1)");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("market.tolerance must be > 0");
  if (max_iter < 1) throw std::invalid_argument("market.max_iter must be >= 1");
  if (!(tau_max > 0.0)) throw std::invalid_argument("market.tau_max must be > 0");
  if (!(min_pollen_income >= 0.0)) {
    throw std::invalid_argument("market.min_pollen_income must be >= 0");
  }
  if (!(winter_colony_size > 0.0)) {
    throw std::invalid_argument("market.winter_colony_size must be > 0");
  }
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kDeficit: return "deficit";
    case Regime::kSurplus: return "surplus";
    case Regime::kBalanced: return "balanced";
  }
  return "?";
}

std::string to_string(SolvePath p) {
  switch (p) {
    case SolvePath::kDeficit: return "A";
    case SolvePath::kSurplus: return "B.i";
    case SolvePath::kScarce: return "B.ii";
    case SolvePath::kFrozen: return "frozen";
    case SolvePath::kIdle: return "idle";
  }
  return "?";
}

double CutFunction::value(double tau) const {
  if (segments_.empty()) return 0.0;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), tau,
                             [](double t, const CutSegment& s) { return t < s.start; });
  if (it == segments_.begin()) return 0.0;
  --it;
  return it->slope * tau + it->intercept;
}

double CutFunction::inverse(double level) const {
  if (scarce()) throw MarketError(MarketError::Reason::kInfiniteT0, "cut function has t0 = +inf");
  if (level <= 0.0) return t0_;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (s.marginal < 0) continue;
    const bool last = k + 1 == segments_.size();
    const double end_value = last ? kInf : s.slope * segments_[k + 1].start + s.intercept;
    if (level <= end_value) {
      return std::max(s.start, (level - s.intercept) / s.slope);
    }
  }
  return kInf;
}

std::vector<double> CutFunction::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments_) out.push_back(s.start);
  return out;
}

double target_ratio(double per_bee_honey, double per_bee_pollen,
                    const WeatherSeries& winter, double n_winter,
                    const thermo::ThermalParams& p) {
  if (!(n_winter > 0.0)) throw std::invalid_argument("winter colony size must be > 0");
  if (!(per_bee_pollen > 0.0)) throw std::invalid_argument("per-bee pollen must be > 0");
  double heating = 0.0;
  for (const auto& day : winter.days) {
    heating += thermo::cluster_heating_power(n_winter, day.t_out, p) * kSecondsPerDay;
  }
  return per_bee_honey / per_bee_pollen + heating / (n_winter * per_bee_pollen);
}

double pollen_quality(const FloralResource& res, double d, double tau, double xi,
                      const ForagingParams& p) {
  if (res.kind != flora::ResourceKind::kPollen) {
    throw std::invalid_argument("pollen_quality applies to pollen resources");
  }
  if (tau < 0.0) throw std::invalid_argument("negative exchange rate");
  return tau * res.q / p.q0_tilde - xi * (d / p.d_max + flora::hopping_cost(res, p));
}

AffineEfficiency pollen_affine(const FloralResource& res, double d,
                               const ForagingParams& p, double xi) {
  if (res.kind != flora::ResourceKind::kPollen) {
    throw std::invalid_argument("pollen_affine applies to pollen resources");
  }
  const double cycle = foraging::trip_cycle(res, d, p).total;
  AffineEfficiency a;
  a.id = res.id;
  a.slope = p.q0 * (res.q / p.q0_tilde) / cycle;
  a.intercept = -p.q0 * xi * (d / p.d_max + flora::hopping_cost(res, p)) / cycle;
  a.capacity = foraging::foragers_required(res, d, p);
  return a;
}

PollenOption pollen_option(const FloralResource& res, double d, const ForagingParams& p,
                           double xi) {
  PollenOption o;
  o.efficiency = pollen_affine(res, d, p, xi);
  o.quality.id = res.id;
  o.quality.slope = res.q / p.q0_tilde;
  o.quality.intercept = -xi * (d / p.d_max + flora::hopping_cost(res, p));
  o.quality.capacity = o.efficiency.capacity;
  o.income_per_bee = res.q / foraging::trip_cycle(res, d, p).total;
  return o;
}

NectarOption nectar_option(const FloralResource& res, double d, double field_quality,
                           const ForagingParams& p) {
  NectarOption o;
  o.id = res.id;
  o.quality = field_quality;
  o.efficiency = foraging::efficiency(res, d, field_quality, p);
  o.capacity = field_quality > 0.0 ? foraging::foragers_required(res, d, p) : 0.0;
  return o;
}

namespace {

template <typename Key>
std::vector<NectarOption> rank_by(std::vector<NectarOption> options, Key key) {
  std::erase_if(options, [](const NectarOption& o) {
    return !(o.quality > 0.0) || !(o.capacity > 0.0);
  });
  std::sort(options.begin(), options.end(), [&](const NectarOption& a, const NectarOption& b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a.id < b.id;
  });
  return options;
}

}  // namespace

std::vector<NectarOption> rank_nectar(std::vector<NectarOption> options) {
  return rank_by(std::move(options), [](const NectarOption& o) { return o.efficiency; });
}

std::vector<NectarOption> rank_nectar_by_quality(std::vector<NectarOption> options) {
  return rank_by(std::move(options), [](const NectarOption& o) { return o.quality; });
}

namespace {

// Indices of `lines` in decreasing value at tau, ties by id.
std::vector<std::size_t> order_at(std::span<const AffineEfficiency> lines, double tau) {
  std::vector<std::size_t> idx(lines.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double va = lines[a].value(tau), vb = lines[b].value(tau);
    if (va != vb) return va > vb;
    return lines[a].id < lines[b].id;
  });
  return idx;
}

// Position of the marginal line: cumulative capacity first reaches demand.
std::size_t marginal_at(std::span<const AffineEfficiency> lines, double demand, double tau) {
  auto idx = order_at(lines, tau);
  double cum = 0.0;
  for (std::size_t k : idx) {
    cum += lines[k].capacity;
    if (cum >= demand) return k;
  }
  // Rounding in the running sum can leave it a hair short of the total.
  return idx.back();
}

}  // namespace

CutFunction build_eta_cut(std::span<const AffineEfficiency> lines_in, double demand) {
  if (lines_in.empty()) {
    throw MarketError(MarketError::Reason::kEmptyResources, "no pollen resource");
  }
  if (!(demand > 0.0)) throw std::invalid_argument("cut demand must be > 0");
  std::vector<AffineEfficiency> lines;
  double total = 0.0;
  for (const auto& l : lines_in) {
    if (!(l.slope > 0.0)) throw std::invalid_argument("pollen efficiency slope must be > 0");
    if (l.capacity < 0.0) throw std::invalid_argument("negative capacity");
    if (l.capacity > 0.0) {
      lines.push_back(l);
      total += l.capacity;
    }
  }
  if (total < demand) return CutFunction({CutSegment{}}, kInf, 0.0);

  // The marginal line can only change where two lines cross or one crosses 0.
  std::vector<double> events{0.0};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double z = -lines[i].intercept / lines[i].slope;
    if (z > 0.0) events.push_back(z);
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double ds = lines[i].slope - lines[j].slope;
      if (ds == 0.0) continue;
      const double x = (lines[j].intercept - lines[i].intercept) / ds;
      if (x > 0.0) events.push_back(x);
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::vector<CutSegment> segments;
  for (std::size_t e = 0; e < events.size(); ++e) {
    const double lo = events[e];
    const double probe = e + 1 < events.size() ? 0.5 * (lo + events[e + 1])
                                               : lo + std::max(1.0, lo);
    const auto& m = lines[marginal_at(lines, demand, probe)];
    CutSegment seg{lo, 0.0, 0.0, -1};
    if (m.value(probe) > 0.0) seg = {lo, m.slope, m.intercept, m.id};
    if (!segments.empty() && segments.back().marginal == seg.marginal &&
        segments.back().slope == seg.slope && segments.back().intercept == seg.intercept) {
      continue;
    }
    segments.push_back(seg);
  }

  double t0 = 0.0;
  for (const auto& s : segments) {
    if (s.marginal >= 0) {
      t0 = s.start;
      break;
    }
  }
  const double t1 = segments.back().start;
  return CutFunction(std::move(segments), t0, t1);
}

AllocationPlan allocate_at(std::span<const AffineEfficiency> lines, double demand,
                           double tau) {
  AllocationPlan plan;
  double left = std::max(0.0, demand);
  for (std::size_t k : order_at(lines, tau)) {
    const auto& l = lines[k];
    if (left <= 0.0) break;
    if (!(l.value(tau) > 0.0) || !(l.capacity > 0.0)) continue;
    const double bees = std::min(l.capacity, left);
    plan.assigned.push_back({l.id, bees});
    plan.total += bees;
    left -= bees;
  }
  plan.reserve = std::max(0.0, demand) - plan.total;
  return plan;
}

namespace {

struct NectarFill {
  AllocationPlan plan;
  double eta_cut = 0.0;
  double quality_cut = 0.0;
  double power = 0.0;
};

// Staffs ranked nectar patches until `need` watts are covered or the budget
// runs out. The cut is the last visited patch, or the best one if none is.
NectarFill fill_nectar_need(std::span<const NectarOption> ranked, double need,
                            double budget) {
  if (ranked.empty()) {
    throw MarketError(MarketError::Reason::kNoUsefulNectar,
                      "no nectar resource with positive quality");
  }
  NectarFill f;
  f.eta_cut = ranked.front().efficiency;
  f.quality_cut = ranked.front().quality;
  double left = need;
  double bees_left = budget;
  for (const auto& o : ranked) {
    if (left <= 0.0 || bees_left <= 0.0) break;
    // When this patch covers the rest, close the need outright: subtracting
    // bees * efficiency can leave a rounding crumb that would drag the cut
    // onto the next patch.
    const double full = left / o.efficiency;
    const bool covers = full <= o.capacity && full <= bees_left;
    const double bees = covers ? full : std::min(o.capacity, bees_left);
    if (!(bees > 0.0)) continue;
    f.plan.assigned.push_back({o.id, bees});
    f.plan.total += bees;
    f.power += bees * o.efficiency;
    f.eta_cut = o.efficiency;
    f.quality_cut = o.quality;
    left = covers ? 0.0 : left - bees * o.efficiency;
    bees_left -= bees;
  }
  return f;
}

const PollenOption* find_pollen(std::span<const PollenOption> pollen, int id) {
  for (const auto& p : pollen) {
    if (p.id() == id) return &p;
  }
  return nullptr;
}

void price_pollen(ExchangeSolution& s, std::span<const PollenOption> pollen) {
  s.pollen_cost = 0.0;
  s.pollen_income = 0.0;
  for (const auto& a : s.pollen.assigned) {
    const auto* p = find_pollen(pollen, a.id);
    s.pollen_cost += a.bees * p->efficiency.cost();
    s.pollen_income += a.bees * p->income_per_bee;
  }
}

std::vector<AffineEfficiency> efficiency_lines(std::span<const PollenOption> pollen) {
  std::vector<AffineEfficiency> out;
  for (const auto& p : pollen) out.push_back(p.efficiency);
  return out;
}

std::vector<AffineEfficiency> quality_lines(std::span<const PollenOption> pollen) {
  std::vector<AffineEfficiency> out;
  for (const auto& p : pollen) out.push_back(p.quality);
  return out;
}

}  // namespace

ExchangeSolution solve_case_A(std::span<const NectarOption> nectar_ranked,
                              std::span<const PollenOption> pollen,
                              double min_pollen_income, double forager_budget) {
  ExchangeSolution s;
  s.path = SolvePath::kDeficit;

  // Costless efficiency is tau * slope, so its ranking is the slope ranking.
  std::vector<const PollenOption*> order;
  for (const auto& p : pollen) {
    if (p.efficiency.capacity > 0.0 && p.income_per_bee > 0.0) order.push_back(&p);
  }
  std::sort(order.begin(), order.end(), [](const PollenOption* a, const PollenOption* b) {
    if (a->efficiency.slope != b->efficiency.slope) {
      return a->efficiency.slope > b->efficiency.slope;
    }
    return a->id() < b->id();
  });

  double income_left = min_pollen_income;
  const PollenOption* cut = order.empty() ? nullptr : order.front();
  for (const auto* p : order) {
    if (income_left <= 0.0) break;
    const double bees = std::min(p->efficiency.capacity, income_left / p->income_per_bee);
    s.pollen.assigned.push_back({p->id(), bees});
    s.pollen.total += bees;
    income_left -= bees * p->income_per_bee;
    cut = p;
  }
  if (income_left > 1e-12 * std::max(1.0, min_pollen_income)) {
    throw MarketError(MarketError::Reason::kInfeasiblePollenIncome,
                      "pollen resources cannot supply the minimal income");
  }
  if (s.pollen.total > forager_budget) {
    throw MarketError(MarketError::Reason::kInfeasiblePollenIncome,
                      "not enough foragers for the minimal pollen income");
  }
  price_pollen(s, pollen);

  if (nectar_ranked.empty()) {
    throw MarketError(MarketError::Reason::kNoUsefulNectar,
                      "no nectar resource with positive quality");
  }
  double bees_left = forager_budget - s.pollen.total;
  s.eta_cut = nectar_ranked.front().efficiency;
  for (const auto& o : nectar_ranked) {
    if (bees_left <= 0.0) break;
    const double bees = std::min(o.capacity, bees_left);
    if (!(bees > 0.0)) continue;
    s.nectar.assigned.push_back({o.id, bees});
    s.nectar.total += bees;
    s.eta_cut = o.efficiency;
    bees_left -= bees;
  }
  s.nectar.reserve = 0.0;
  s.pollen.reserve = std::max(0.0, bees_left);

  if (cut == nullptr) {
    s.notes.push_back("no pollen resource: tau undefined");
    return s;
  }
  double shared_cost = cut->efficiency.cost();
  if (s.pollen.total > 0.0) {
    double weighted = 0.0;
    for (const auto& a : s.pollen.assigned) {
      weighted += a.bees * find_pollen(pollen, a.id)->efficiency.cost();
    }
    shared_cost = weighted / s.pollen.total;
  }
  s.tau = (s.eta_cut + shared_cost) / cut->efficiency.slope;
  s.tau_defined = true;
  s.trace = {s.tau};
  return s;
}

ExchangeSolution solve_case_B(std::span<const NectarOption> nectar_ranked,
                              std::span<const PollenOption> pollen, double forager_budget,
                              double base_nectar_need, double tolerance, int max_iter) {
  ExchangeSolution s;
  s.path = SolvePath::kSurplus;
  s.converged = false;
  const auto lines = efficiency_lines(pollen);
  double need = base_nectar_need;
  NectarFill fill;
  double demand = 0.0;
  for (int k = 0; k <= max_iter; ++k) {
    fill = fill_nectar_need(nectar_ranked, need, forager_budget);
    demand = forager_budget - fill.plan.total;
    if (!(demand > 0.0)) {
      throw MarketError(MarketError::Reason::kNoPollenForagers,
                        "nectar need absorbs every forager");
    }
    const auto cut = build_eta_cut(lines, demand);
    if (cut.scarce()) {
      throw MarketError(MarketError::Reason::kInfiniteT0,
                        "pollen capacity below demand; use the scarce path");
    }
    const double tau = cut.inverse(fill.eta_cut);
    s.trace.push_back(tau);
    const std::size_t n = s.trace.size();
    if (n >= 2 && std::abs(s.trace[n - 1] - s.trace[n - 2]) < tolerance) {
      s.converged = true;
      break;
    }
    s.pollen = allocate_at(lines, demand, tau);
    price_pollen(s, pollen);
    need = base_nectar_need + s.pollen_cost;
  }
  const std::size_t n = s.trace.size();
  s.tau = n >= 2 ? 0.5 * (s.trace[n - 1] + s.trace[n - 2]) : s.trace.back();
  s.tau_defined = true;
  if (!s.converged) s.notes.push_back("case B did not converge; returning bracket midpoint");
  s.eta_cut = fill.eta_cut;
  s.nectar = fill.plan;
  s.nectar_need = need;
  s.pollen = allocate_at(lines, demand, s.tau);
  price_pollen(s, pollen);
  return s;
}

ExchangeSolution solve_case_B_scarce(std::span<const NectarOption> nectar,
                                     std::span<const PollenOption> pollen,
                                     double forager_budget, double base_nectar_need,
                                     const MarketParams& params) {
  ExchangeSolution s;
  s.path = SolvePath::kScarce;
  s.converged = false;
  const auto ranked = rank_nectar_by_quality({nectar.begin(), nectar.end()});
  const auto qlines = quality_lines(pollen);
  double capacity = 0.0;
  for (const auto& l : qlines) capacity += std::max(0.0, l.capacity);

  double need = base_nectar_need;
  NectarFill fill;
  for (int k = 0; k <= params.max_iter; ++k) {
    fill = fill_nectar_need(ranked, need, forager_budget);
    const double free_bees = std::max(0.0, forager_budget - fill.plan.total);
    double tau = kInf;
    if (capacity > 0.0) tau = build_eta_cut(qlines, capacity).inverse(fill.quality_cut);
    if (!(tau <= params.tau_max)) {
      s.nectar = fill.plan;
      s.eta_cut = fill.eta_cut;
      s.nectar_need = need;
      s.pollen = AllocationPlan{};
      s.pollen.reserve = free_bees;
      s.pollen_cost = s.pollen_income = 0.0;
      s.tau_defined = false;
      s.converged = true;
      s.notes.push_back("no pollen worth fetching below tau_max: tau undefined");
      return s;
    }
    s.trace.push_back(tau);
    const std::size_t n = s.trace.size();
    s.pollen = allocate_at(qlines, std::min(free_bees, capacity), tau);
    s.pollen.reserve = free_bees - s.pollen.total;
    price_pollen(s, pollen);
    if (n >= 2 && std::abs(s.trace[n - 1] - s.trace[n - 2]) < params.tolerance) {
      s.converged = true;
      break;
    }
    need = base_nectar_need + s.pollen_cost;
  }
  const std::size_t n = s.trace.size();
  s.tau = n >= 2 ? 0.5 * (s.trace[n - 1] + s.trace[n - 2]) : s.trace.back();
  s.tau_defined = true;
  if (!s.converged) s.notes.push_back("scarce path did not converge; returning bracket midpoint");
  const double free_bees = std::max(0.0, forager_budget - fill.plan.total);
  s.pollen = allocate_at(qlines, std::min(free_bees, capacity), s.tau);
  s.pollen.reserve = free_bees - s.pollen.total;
  price_pollen(s, pollen);
  s.nectar = fill.plan;
  s.eta_cut = fill.eta_cut;
  s.nectar_need = need;
  return s;
}

double hive_ratio(const demography::ColonyState& state, double mu) {
  if (state.pollen <= 0.0) return state.honey > 0.0 ? kInf : 0.0;
  return mu * state.honey / state.pollen;
}

Regime classify_regime(const demography::ColonyState& state, double r_target,
                       double hysteresis, double mu) {
  if (state.pollen <= 0.0 || state.honey <= 0.0) return Regime::kDeficit;
  const double r = hive_ratio(state, mu);
  if (r < r_target * (1.0 - hysteresis)) return Regime::kDeficit;
  if (r > r_target * (1.0 + hysteresis)) return Regime::kSurplus;
  return Regime::kBalanced;
}

nlohmann::json to_json(const AllocationPlan& plan) {
  nlohmann::json out;
  out["assigned"] = nlohmann::json::array();
  for (const auto& a : plan.assigned) {
    out["assigned"].push_back({{"id", a.id}, {"bees", a.bees}});
  }
  out["total"] = plan.total;
  out["reserve"] = plan.reserve;
  return out;
}

nlohmann::json to_json(const ExchangeSolution& s) {
  nlohmann::json out;
  out["path"] = to_string(s.path);
  out["tau"] = s.tau_defined ? nlohmann::json(s.tau) : nlohmann::json(nullptr);
  out["eta_cut"] = s.eta_cut;
  out["converged"] = s.converged;
  out["nectar_need_W"] = s.nectar_need;
  out["pollen_income_g_per_s"] = s.pollen_income;
  out["pollen_cost_W"] = s.pollen_cost;
  out["nectar"] = to_json(s.nectar);
  out["pollen"] = to_json(s.pollen);
  out["trace"] = s.trace;
  out["notes"] = s.notes;
  return out;
}

}  // namespace apiary::market
