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

#include "apiary/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "apiary/config.hpp"
#include "apiary/flora.hpp"
#include "apiary/market.hpp"
#include "apiary/sim.hpp"

namespace apiary::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Shortest text that round-trips; used for human-facing tables.
std::string short_num(double x) {
  for (int digits = 6; digits <= 17; ++digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return num(x);
}

json load_document(const Command& cmd) {
  json doc = config::read_json(cmd.config);
  for (const auto& o : cmd.overrides) config::apply_override(doc, o);
  return doc;
}

fs::path base_dir(const Command& cmd) {
  const auto parent = cmd.config.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void report(const config::ConfigError& e, std::ostream& err) {
  for (const auto& p : e.problems()) err << "config error: " << p << '\n';
}

bool prepare_out(const Command& cmd, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(cmd.out, ec);
  if (ec) {
    err << "config error: --out " << cmd.out.string() << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

template <typename F>
bool write_file(const fs::path& path, std::ostream& err, F&& body, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) {
    err << "cannot write " << path.string() << '\n';
    return false;
  }
  body(f);
  return static_cast<bool>(f);
}

json eikonal_json(const flora::EikonalResidual& r) {
  return {{"samples", r.samples},
          {"max", r.max},
          {"mean", r.mean},
          {"target", r.target},
          {"degenerate", r.degenerate},
          {"fraction_within_5pct", r.fraction_within(0.05)}};
}

// Foragers left for pollen once the ranked nectar patches cover `need`.
double pollen_demand(const sim::MarketInputs& in) {
  const auto ranked = market::rank_nectar(in.nectar);
  double left = in.base_need;
  double bees = in.budget;
  for (const auto& o : ranked) {
    if (left <= 0.0 || bees <= 0.0) break;
    const double b = std::min({o.capacity, left / o.efficiency, bees});
    bees -= b;
    left -= b * o.efficiency;
  }
  return bees;
}

std::string reason_name(market::MarketError::Reason r) {
  using R = market::MarketError::Reason;
  switch (r) {
    case R::kInfeasiblePollenIncome: return "infeasible_pollen_income";
    case R::kNoUsefulNectar: return "no_useful_nectar";
    case R::kInfiniteT0: return "infinite_t0";
    case R::kNoPollenForagers: return "no_pollen_foragers";
    case R::kEmptyResources: return "empty_resources";
  }
  return "unknown";
}

}  // namespace

int cmd_run(const Command& cmd, std::ostream& out, std::ostream& err) {
  sim::Scenario sc;
  try {
    sc = config::scenario_from_json(load_document(cmd), base_dir(cmd));
  } catch (const config::ConfigError& e) {
    report(e, err);
    return kConfigError;
  }
  if (!prepare_out(cmd, err)) return kConfigError;
  spdlog::info("running {} days", sc.horizon);
  const auto result = sim::run(sc);
  const bool ok =
      write_file(cmd.out / "reports.csv", err,
                 [&](std::ostream& f) { sim::write_reports_csv(f, result.reports); }) &&
      write_file(cmd.out / "summary.json", err, [&](std::ostream& f) {
        f << sim::summary_json(sc, result).dump(2) << '\n';
      });
  if (!ok) return kConfigError;
  const auto& s = result.final_state.colony;
  out << "days " << result.reports.size() << " of " << sc.horizon << '\n';
  out << "honey_g " << short_num(s.honey) << '\n';
  out << "pollen_g " << short_num(s.pollen) << '\n';
  out << "females " << short_num(s.population.total_females()) << '\n';
  if (result.halted) {
    const auto& last = result.reports.back();
    err << "halted on day " << last.day << ": " << last.status << '\n';
    return kStarvation;
  }
  return kOk;
}

int cmd_field(const Command& cmd, std::ostream& out, std::ostream& err) {
  config::FieldConfig fc;
  try {
    fc = config::field_config_from_json(load_document(cmd), base_dir(cmd));
  } catch (const config::ConfigError& e) {
    report(e, err);
    return kConfigError;
  }
  flora::QualityField combined;
  try {
    combined = flora::quality_field(fc.landscape, fc.foraging);
  } catch (const std::invalid_argument& e) {
    err << "config error: landscape: " << e.what() << '\n';
    return kConfigError;
  }
  if (!prepare_out(cmd, err)) return kConfigError;

  json summary;
  summary["resources"] = json::array();
  auto dump = [&](const std::string& stem, const flora::QualityField& f) {
    return write_file(cmd.out / (stem + ".csv"), err,
                      [&](std::ostream& s) { flora::write_field_csv(s, f.values); }) &&
           write_file(
               cmd.out / (stem + ".pgm"), err,
               [&](std::ostream& s) { flora::write_field_pgm(s, f.values); }, true);
  };
  for (const auto& res : fc.landscape.resources) {
    if (res.kind != flora::ResourceKind::kNectar) continue;
    if (fc.landscape.cell_count(res.id) == 0) {
      err << "resource " << res.id << " has no cell on the raster; skipped\n";
      continue;
    }
    const auto f = flora::resource_quality_field(fc.landscape, res, fc.foraging);
    if (!dump("quality_" + std::to_string(res.id), f)) return kConfigError;
    auto entry = eikonal_json(flora::eikonal_residual(f, fc.foraging));
    entry["id"] = res.id;
    summary["resources"].push_back(entry);
  }
  if (!dump("quality_combined", combined)) return kConfigError;
  const auto eik = flora::eikonal_residual(combined, fc.foraging);
  summary["combined"] = eikonal_json(eik);
  if (!write_file(cmd.out / "eikonal.json", err,
                  [&](std::ostream& s) { s << summary.dump(2) << '\n'; })) {
    return kConfigError;
  }
  out << "cells " << combined.values.rows << "x" << combined.values.cols << '\n';
  out << "eikonal_samples " << eik.samples << '\n';
  out << "eikonal_mean_residual " << short_num(eik.mean) << '\n';
  out << "eikonal_fraction_within_5pct " << short_num(eik.fraction_within(0.05)) << '\n';
  return kOk;
}

int cmd_market(const Command& cmd, std::ostream& out, std::ostream& err) {
  sim::Scenario sc;
  json doc;
  market::ExchangeSolution previous;
  bool has_previous = false;
  int day = 0;
  try {
    doc = load_document(cmd);
    sc = config::scenario_from_json(doc, base_dir(cmd));
    if (doc.contains("market")) {
      const auto& m = doc.at("market");
      if (m.contains("previous")) {
        previous = config::solution_from_json(m.at("previous"));
        has_previous = true;
      }
      if (m.contains("day")) {
        if (!m.at("day").is_number_integer() || m.at("day").get<int>() < 0) {
          throw config::ConfigError({"market.day: expected a non-negative integer"});
        }
        day = m.at("day").get<int>();
      }
    }
  } catch (const config::ConfigError& e) {
    report(e, err);
    return kConfigError;
  }
  if (!prepare_out(cmd, err)) return kConfigError;

  const auto setup = sim::prepare(sc);
  const auto state = sim::initial_state(sc);
  const auto in = sim::market_inputs(sc, setup, state, day);

  json j;
  j["regime"] = market::to_string(in.regime);
  j["r_hive"] = in.r_hive;
  j["r_target"] = in.r_target;
  j["forager_budget"] = in.budget;
  j["nectar_need_W"] = in.base_need;
  j["min_pollen_income_g_per_s"] = in.min_income;

  market::ExchangeSolution sol;
  if (in.foraging_seconds > 0.0 && in.budget > 0.0) {
    try {
      sol = sim::solve_regime(in.regime, in.nectar, in.pollen, in.budget, in.base_need,
                              in.min_income, sc.market, has_previous ? &previous : nullptr);
    } catch (const market::MarketError& e) {
      err << "market infeasible (" << reason_name(e.reason()) << "): " << e.what() << '\n';
      j["error"] = {{"reason", reason_name(e.reason())}, {"message", e.what()}};
      write_file(cmd.out / "solution.json", err,
                 [&](std::ostream& s) { s << j.dump(2) << '\n'; });
      return kMarketInfeasible;
    }
  } else {
    sol.notes.push_back("no foraging on this day");
  }
  j["solution"] = market::to_json(sol);
  if (sol.path == market::SolvePath::kSurplus) {
    std::vector<market::AffineEfficiency> lines;
    for (const auto& p : in.pollen) lines.push_back(p.efficiency);
    const auto cut = market::build_eta_cut(lines, in.budget - sol.nectar.total);
    j["cut"] = {{"t0", cut.t0()}, {"t1", cut.t1()}, {"breakpoints", cut.breakpoints()}};
  }
  if (!write_file(cmd.out / "solution.json", err,
                  [&](std::ostream& s) { s << j.dump(2) << '\n'; })) {
    return kConfigError;
  }
  out << "regime " << market::to_string(in.regime) << '\n';
  out << "path " << market::to_string(sol.path) << '\n';
  out << "tau " << (sol.tau_defined ? short_num(sol.tau) : std::string("undefined")) << '\n';
  out << "iterations " << sol.trace.size() << '\n';
  return kOk;
}

int cmd_check(const Command& cmd, std::ostream& out, std::ostream& err) {
  sim::Scenario sc;
  try {
    sc = config::scenario_from_json(load_document(cmd), base_dir(cmd));
  } catch (const config::ConfigError& e) {
    report(e, err);
    return kConfigError;
  }
  const auto setup = sim::prepare(sc);
  out << "t_brood_C " << short_num(sc.thermal.t_brood) << '\n';
  out << "t_center_min_C " << short_num(sc.thermal.t_center_min) << '\n';
  out << "d_max_m " << short_num(sc.foraging.d_max) << '\n';
  out << "r_target_J_per_g " << short_num(setup.r_target) << '\n';
  out << "resource kind rho_crit distance_m quality_at_hive\n";
  for (const auto& res : sc.landscape.resources) {
    const auto* site = [&]() -> const sim::Setup::Site* {
      for (const auto& s : setup.sites) {
        if (s.resource->id == res.id) return &s;
      }
      return nullptr;
    }();
    out << res.id << ' ' << (res.kind == flora::ResourceKind::kNectar ? "nectar" : "pollen")
        << ' ' << short_num(flora::critical_density(res, sc.foraging)) << ' '
        << (site ? short_num(site->distance) : std::string("absent")) << ' '
        << (site && res.kind == flora::ResourceKind::kNectar ? short_num(site->quality)
                                                             : std::string("-"))
        << '\n';
  }
  const auto in = sim::market_inputs(sc, setup, sim::initial_state(sc), 0);
  out << "regime " << market::to_string(in.regime) << '\n';
  const double demand = pollen_demand(in);
  if (in.pollen.empty() || !(demand > 0.0)) {
    out << "cut_t0 n/a\ncut_t1 n/a\n";
  } else {
    std::vector<market::AffineEfficiency> lines;
    for (const auto& p : in.pollen) lines.push_back(p.efficiency);
    const auto cut = market::build_eta_cut(lines, demand);
    out << "cut_t0 " << short_num(cut.t0()) << '\n';
    out << "cut_t1 " << short_num(cut.t1()) << '\n';
  }
  return kOk;
}

int dispatch(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (cmd.name == "run") return cmd_run(cmd, out, err);
    if (cmd.name == "field") return cmd_field(cmd, out, err);
    if (cmd.name == "market") return cmd_market(cmd, out, err);
    if (cmd.name == "check") return cmd_check(cmd, out, err);
  } catch (const config::ConfigError& e) {
    report(e, err);
    return kConfigError;
  }
  err << "unknown command " << cmd.name << '\n';
  return kConfigError;
}

int main_entry(int argc, char** argv) {
  auto logger = spdlog::get("apiary");
  if (!logger) logger = spdlog::stderr_color_mt("apiary");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=info, debug, ...

  CLI::App app{"Honey bee colony energy and foraging simulator"};
  app.require_subcommand(1);
  Command cmd;
  for (const char* name : {"run", "field", "market", "check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", cmd.config, "scenario JSON")->required();
    sub->add_option("--out", cmd.out, "output directory");
    sub->add_option("--set", cmd.overrides, "override, dotted.key=value");
    sub->callback([&cmd, name] { cmd.name = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  return dispatch(cmd, std::cout, std::cerr);
}

}  // namespace apiary::cli
