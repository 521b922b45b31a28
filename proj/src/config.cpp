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

#include "apiary/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace apiary::config {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects problems while reading typed values out of a JSON tree.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void problem(const std::string& key, const std::string& what) {
    problems_.push_back(key + ": " + what);
  }

  bool object(const json& j, const std::string& key) {
    if (j.is_object()) return true;
    problem(key, "expected an object");
    return false;
  }

  void allowed(const json& obj, const std::string& path,
               std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        problem(path.empty() ? k : path + "." + k, "unknown key");
      }
    }
  }

  void number(const json& obj, const char* key, const std::string& path, double& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      problem(path + "." + key, "expected a number");
      return;
    }
    out = v.get<double>();
  }

  void integer(const json& obj, const char* key, const std::string& path, int& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
      problem(path + "." + key, "expected an integer");
      return;
    }
    out = v.get<int>();
  }

  void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
      problem(path + "." + key, "expected true or false");
      return;
    }
    out = v.get<bool>();
  }

  void string(const json& obj, const char* key, const std::string& path, std::string& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
      problem(path + "." + key, "expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  bool numbers(const json& v, const std::string& key, std::vector<double>& out) {
    if (!v.is_array()) {
      problem(key, "expected an array of numbers");
      return false;
    }
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) {
        problem(key, "expected an array of numbers");
        return false;
      }
      out.push_back(x.get<double>());
    }
    return true;
  }

 private:
  std::vector<std::string>& problems_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void read_coefficients(Reader& rd, const json& j, demography::EnergyCoefficients& c) {
  const std::string k = "coefficients";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"mu", "alpha", "alpha_tilde", "gamma", "pi"});
  rd.number(j, "mu", k, c.mu);
  rd.number(j, "alpha", k, c.alpha);
  rd.number(j, "alpha_tilde", k, c.alpha_tilde);
  rd.number(j, "gamma", k, c.gamma);
  rd.number(j, "pi", k, c.pi);
}

void read_thermal(Reader& rd, const json& j, thermo::ThermalParams& p) {
  const std::string k = "thermal";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"theta", "kappa", "nu", "t_brood", "t_center_min", "t_target", "r_bee"});
  rd.number(j, "theta", k, p.theta);
  rd.number(j, "kappa", k, p.kappa);
  rd.integer(j, "nu", k, p.nu);
  rd.number(j, "t_brood", k, p.t_brood);
  rd.number(j, "t_center_min", k, p.t_center_min);
  rd.number(j, "t_target", k, p.t_target);
  rd.number(j, "r_bee", k, p.r_bee);
}

void read_foraging(Reader& rd, const json& j, flora::ForagingParams& p) {
  const std::string k = "foraging";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"q0", "q0_tilde", "d_max", "v_cruise", "v_hop", "k2", "k3", "t_hive"});
  rd.number(j, "q0", k, p.q0);
  rd.number(j, "q0_tilde", k, p.q0_tilde);
  rd.number(j, "d_max", k, p.d_max);
  rd.number(j, "v_cruise", k, p.v_cruise);
  rd.number(j, "v_hop", k, p.v_hop);
  rd.number(j, "k2", k, p.k2);
  rd.number(j, "k3", k, p.k3);
  rd.number(j, "t_hive", k, p.t_hive);
}

void read_predation(Reader& rd, const json& j, foraging::PredationParams& p) {
  const std::string k = "predation";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"d_max_local", "rho_crit_local", "l_forager", "l_average"});
  rd.number(j, "d_max_local", k, p.d_max_local);
  rd.number(j, "rho_crit_local", k, p.rho_crit_local);
  rd.number(j, "l_forager", k, p.l_forager);
  rd.number(j, "l_average", k, p.l_average);
}

void read_market(Reader& rd, const json& j, market::MarketParams& p) {
  const std::string k = "market";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k,
             {"xi", "hysteresis", "tolerance", "max_iter", "tau_max", "min_pollen_income",
              "winter_colony_size", "previous", "day"});
  rd.number(j, "xi", k, p.xi);
  rd.number(j, "hysteresis", k, p.hysteresis);
  rd.number(j, "tolerance", k, p.tolerance);
  rd.integer(j, "max_iter", k, p.max_iter);
  rd.number(j, "tau_max", k, p.tau_max);
  rd.number(j, "min_pollen_income", k, p.min_pollen_income);
  rd.number(j, "winter_colony_size", k, p.winter_colony_size);
}

void read_resource(Reader& rd, const json& j, const std::string& k, sim::Scenario& sc) {
  if (!rd.object(j, k)) return;
  rd.allowed(j, k,
             {"id", "name", "kind", "q", "rho", "lambda", "m", "beta", "n", "area", "bloom"});
  flora::FloralResource r;
  if (!j.contains("id")) rd.problem(k + ".id", "missing required key");
  rd.integer(j, "id", k, r.id);
  rd.string(j, "name", k, r.name);
  std::string kind = "nectar";
  rd.string(j, "kind", k, kind);
  if (kind == "nectar") {
    r.kind = flora::ResourceKind::kNectar;
  } else if (kind == "pollen") {
    r.kind = flora::ResourceKind::kPollen;
  } else {
    rd.problem(k + ".kind", "expected \"nectar\" or \"pollen\"");
  }
  rd.number(j, "q", k, r.q);
  rd.number(j, "rho", k, r.rho);
  rd.number(j, "lambda", k, r.lambda);
  rd.number(j, "m", k, r.m);
  rd.number(j, "beta", k, r.beta);
  rd.integer(j, "n", k, r.n);
  rd.number(j, "area", k, r.area);
  if (j.contains("bloom")) {
    const auto& b = j.at("bloom");
    if (b.is_array() && b.size() == 2 && b[0].is_number_integer() && b[1].is_number_integer()) {
      sc.bloom[r.id] = sim::Bloom{b[0].get<int>(), b[1].get<int>()};
    } else {
      rd.problem(k + ".bloom", "expected [first_day, last_day]");
    }
  }
  sc.landscape.resources.push_back(r);
}

void read_landscape(Reader& rd, const json& j, const fs::path& base, sim::Scenario& sc) {
  const std::string k = "landscape";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"raster_csv", "raster", "cell_size", "hive", "resources"});
  auto& land = sc.landscape;
  rd.number(j, "cell_size", k, land.cell_size);
  if (j.contains("raster_csv") == j.contains("raster")) {
    rd.problem(k + ".raster", "give exactly one of raster_csv or raster");
  } else if (j.contains("raster_csv")) {
    std::string path;
    rd.string(j, "raster_csv", k, path);
    try {
      if (!path.empty()) land.ids = flora::read_raster_csv(resolve(base, path));
    } catch (const std::exception& e) {
      rd.problem(k + ".raster_csv", e.what());
    }
  } else {
    const auto& rows = j.at("raster");
    bool ok = rows.is_array() && !rows.empty();
    const std::size_t cols = ok && rows[0].is_array() ? rows[0].size() : 0;
    ok = ok && cols > 0;
    for (const auto& row : rows) {
      if (!ok) break;
      ok = row.is_array() && row.size() == cols &&
           std::all_of(row.begin(), row.end(), [](const json& x) { return x.is_number_integer(); });
    }
    if (!ok) {
      rd.problem(k + ".raster", "expected a non-empty rectangular array of integer ids");
    } else {
      land.ids = flora::Raster<int>(static_cast<int>(rows.size()), static_cast<int>(cols));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          land.ids(static_cast<int>(r), static_cast<int>(c)) = rows[r][c].get<int>();
        }
      }
    }
  }
  if (!j.contains("hive")) {
    rd.problem(k + ".hive", "missing required key");
  } else {
    const auto& h = j.at("hive");
    if (h.is_array() && h.size() == 2 && h[0].is_number_integer() && h[1].is_number_integer()) {
      sc.hive_row = h[0].get<int>();
      sc.hive_col = h[1].get<int>();
    } else {
      rd.problem(k + ".hive", "expected [row, col]");
    }
  }
  if (j.contains("resources")) {
    const auto& rs = j.at("resources");
    if (!rs.is_array()) {
      rd.problem(k + ".resources", "expected an array");
    } else {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        read_resource(rd, rs[i], k + ".resources[" + std::to_string(i) + "]", sc);
      }
    }
  }
}

void read_demography(Reader& rd, const json& j, const fs::path& base, sim::Scenario& sc) {
  const std::string k = "demography";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k,
             {"survival", "schedule", "queen_rate", "nurse_capacity", "brood_days",
              "forager_label", "nurse_label"});
  rd.number(j, "queen_rate", k, sc.queen_rate);
  rd.number(j, "nurse_capacity", k, sc.nurse_capacity);
  rd.integer(j, "brood_days", k, sc.brood_days);
  rd.string(j, "forager_label", k, sc.forager_label);
  rd.string(j, "nurse_label", k, sc.nurse_label);

  const std::string sk = k + ".survival";
  if (!j.contains("survival")) {
    rd.problem(sk, "missing required key");
  } else if (const auto& s = j.at("survival"); rd.object(s, sk)) {
    rd.allowed(s, sk, {"csv", "values", "linear", "flat"});
    try {
      if (s.size() != 1) {
        rd.problem(sk, "give exactly one of csv, values, linear or flat");
      } else if (s.contains("csv")) {
        std::string path;
        rd.string(s, "csv", sk, path);
        if (!path.empty()) sc.survival = demography::read_survival_csv(resolve(base, path));
      } else if (s.contains("values")) {
        std::vector<double> v;
        if (rd.numbers(s.at("values"), sk + ".values", v)) {
          sc.survival = demography::SurvivalCurve(std::move(v));
        }
      } else if (s.contains("linear")) {
        int L = 0;
        rd.integer(s, "linear", sk, L);
        sc.survival = demography::SurvivalCurve::linear(L);
      } else if (s.contains("flat")) {
        int L = 0;
        rd.integer(s, "flat", sk, L);
        sc.survival = demography::SurvivalCurve::flat(L);
      }
    } catch (const std::exception& e) {
      rd.problem(sk, e.what());
    }
  }

  const std::string tk = k + ".schedule";
  if (!j.contains("schedule")) {
    rd.problem(tk, "missing required key");
  } else if (const auto& t = j.at("schedule"); !t.is_array()) {
    rd.problem(tk, "expected an array of {label, from}");
  } else {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string ek = tk + "[" + std::to_string(i) + "]";
      if (!rd.object(t[i], ek)) continue;
      rd.allowed(t[i], ek, {"label", "from"});
      std::string label;
      int from = 0;
      rd.string(t[i], "label", ek, label);
      rd.integer(t[i], "from", ek, from);
      sc.schedule.labels.push_back(label);
      sc.schedule.boundaries.push_back(from);
    }
  }
}

void read_colony(Reader& rd, const json& j, sim::Scenario& sc) {
  const std::string k = "colony";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k,
             {"honey", "pollen", "comb", "females", "females_per_age", "males", "brood",
              "brood_per_day"});
  auto& c = sc.initial;
  rd.number(j, "honey", k, c.honey);
  rd.number(j, "pollen", k, c.pollen);
  rd.number(j, "comb", k, c.comb);
  rd.number(j, "males", k, c.population.males);
  const auto ages = static_cast<std::size_t>(sc.survival.max_age() + 1);
  if (j.contains("females") && j.contains("females_per_age")) {
    rd.problem(k + ".females", "give females or females_per_age, not both");
  } else if (j.contains("females")) {
    rd.numbers(j.at("females"), k + ".females", c.population.females);
  } else {
    double per_age = 0.0;
    rd.number(j, "females_per_age", k, per_age);
    c.population.females.assign(ages, per_age);
  }
  if (j.contains("brood") && j.contains("brood_per_day")) {
    rd.problem(k + ".brood", "give brood or brood_per_day, not both");
  } else if (j.contains("brood")) {
    rd.numbers(j.at("brood"), k + ".brood", c.brood);
  } else if (j.contains("brood_per_day")) {
    double per_day = 0.0;
    rd.number(j, "brood_per_day", k, per_day);
    c.brood.assign(static_cast<std::size_t>(std::max(sc.brood_days, 0)), per_day);
  }
}

void read_weather(Reader& rd, const json& j, const fs::path& base, sim::Scenario& sc) {
  const std::string k = "weather";
  if (!rd.object(j, k)) return;
  rd.allowed(j, k, {"csv", "days"});
  if (j.contains("csv") == j.contains("days")) {
    rd.problem(k, "give exactly one of csv or days");
    return;
  }
  if (j.contains("csv")) {
    std::string path;
    rd.string(j, "csv", k, path);
    try {
      if (!path.empty()) sc.weather = parse_weather_csv(read_text(resolve(base, path)));
    } catch (const std::exception& e) {
      rd.problem(k + ".csv", e.what());
    }
    return;
  }
  const auto& days = j.at("days");
  if (!days.is_array()) {
    rd.problem(k + ".days", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < days.size(); ++i) {
    const std::string dk = k + ".days[" + std::to_string(i) + "]";
    if (!rd.object(days[i], dk)) continue;
    rd.allowed(days[i], dk, {"t_out", "foraging_hours", "winter", "count"});
    WeatherDay d;
    int count = 1;
    rd.number(days[i], "t_out", dk, d.t_out);
    rd.number(days[i], "foraging_hours", dk, d.foraging_hours);
    rd.boolean(days[i], "winter", dk, d.winter);
    rd.integer(days[i], "count", dk, count);
    if (count < 1) rd.problem(dk + ".count", "must be >= 1");
    for (int n = 0; n < count; ++n) sc.weather.days.push_back(d);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError({"config: file not found: " + path.string()});
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError({"config: " + std::string(e.what())});
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError({"--set " + assignment + ": expected key=value"});
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  // "a.list[1]" is shorthand for "a.list.1".
  std::string path;
  for (char ch : key) {
    if (ch == '[') path += '.';
    else if (ch != ']') path += ch;
  }
  json* node = &doc;
  const auto parts = split(path, '.');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& part = parts[i];
    if (part.empty()) throw ConfigError({"--set " + key + ": empty path component"});
    const bool is_index = std::all_of(part.begin(), part.end(), ::isdigit);
    if (node->is_array() && is_index) {
      const auto idx = std::stoul(part);
      if (idx >= node->size()) throw ConfigError({"--set " + key + ": index out of range"});
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError({"--set " + key + ": " + part + " is not an object"});
      node = &(*node)[part];
    }
    if (i + 1 == parts.size()) *node = value;
  }
}

FieldConfig field_config_from_json(const json& doc, const fs::path& base_dir) {
  std::vector<std::string> problems;
  Reader rd(problems);
  sim::Scenario sc;
  if (!doc.is_object()) throw ConfigError({"config: top level must be an object"});
  if (!doc.contains("landscape")) {
    rd.problem("landscape", "missing required key");
  } else {
    read_landscape(rd, doc.at("landscape"), base_dir, sc);
  }
  if (doc.contains("foraging")) read_foraging(rd, doc.at("foraging"), sc.foraging);
  if (problems.empty()) {
    for (auto& v : sc.violations()) {
      if (v.rfind("landscape", 0) == 0 || v.rfind("foraging", 0) == 0) problems.push_back(v);
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return {std::move(sc.landscape), sc.foraging, sc.hive_row, sc.hive_col};
}

sim::Scenario scenario_from_json(const json& doc, const fs::path& base_dir) {
  std::vector<std::string> problems;
  Reader rd(problems);
  sim::Scenario sc;
  if (!doc.is_object()) throw ConfigError({"config: top level must be an object"});
  rd.allowed(doc, "",
             {"schema_version", "horizon_days", "seed", "coefficients", "thermal", "foraging",
              "predation", "market", "landscape", "colony", "demography", "weather"});
  if (doc.contains("schema_version")) {
    int v = 0;
    rd.integer(doc, "schema_version", "config", v);
    if (v != kSchemaVersion) {
      rd.problem("schema_version", "unsupported version " + std::to_string(v));
    }
  }
  rd.integer(doc, "horizon_days", "config", sc.horizon);
  if (doc.contains("seed")) {
    if (doc.at("seed").is_number_unsigned()) {
      sc.seed = doc.at("seed").get<std::uint64_t>();
    } else {
      rd.problem("seed", "expected a non-negative integer");
    }
  }
  for (const char* required : {"landscape", "colony", "demography"}) {
    if (!doc.contains(required)) rd.problem(required, "missing required key");
  }
  if (doc.contains("coefficients")) read_coefficients(rd, doc.at("coefficients"), sc.coefficients);
  if (doc.contains("thermal")) read_thermal(rd, doc.at("thermal"), sc.thermal);
  if (doc.contains("foraging")) read_foraging(rd, doc.at("foraging"), sc.foraging);
  if (doc.contains("predation")) read_predation(rd, doc.at("predation"), sc.predation);
  if (doc.contains("market")) read_market(rd, doc.at("market"), sc.market);
  if (doc.contains("landscape")) read_landscape(rd, doc.at("landscape"), base_dir, sc);
  if (doc.contains("demography")) read_demography(rd, doc.at("demography"), base_dir, sc);
  if (doc.contains("colony")) read_colony(rd, doc.at("colony"), sc);
  if (doc.contains("weather")) read_weather(rd, doc.at("weather"), base_dir, sc);

  // Invariants only make sense on a document that parsed.
  if (problems.empty()) {
    for (auto& v : sc.violations()) problems.push_back(std::move(v));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return sc;
}

market::ExchangeSolution solution_from_json(const json& j) {
  market::ExchangeSolution s;
  s.path = market::SolvePath::kFrozen;
  std::vector<std::string> problems;
  if (!j.is_object()) throw ConfigError({"market.previous: expected an object"});
  if (j.contains("tau") && j.at("tau").is_number()) {
    s.tau = j.at("tau").get<double>();
    s.tau_defined = true;
  }
  auto plan = [&](const char* key, foraging::AllocationPlan& out) {
    if (!j.contains(key)) return;
    const auto& p = j.at(key);
    const json& list = p.is_object() && p.contains("assigned") ? p.at("assigned") : p;
    if (!list.is_array()) {
      problems.push_back(std::string("market.previous.") + key + ": expected an array");
      return;
    }
    for (const auto& a : list) {
      if (!a.is_object() || !a.contains("id") || !a.contains("bees") ||
          !a.at("id").is_number_integer() || !a.at("bees").is_number()) {
        problems.push_back(std::string("market.previous.") + key + ": expected {id, bees}");
        return;
      }
      out.assigned.push_back({a.at("id").get<int>(), a.at("bees").get<double>()});
      out.total += out.assigned.back().bees;
    }
  };
  plan("nectar", s.nectar);
  plan("pollen", s.pollen);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return s;
}

WeatherSeries parse_weather_csv(const std::string& text) {
  WeatherSeries w;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (cols.size() < 2 || cols.size() > 3) {
      throw std::invalid_argument("weather csv line " + std::to_string(line_no) +
                                  ": expected t_out,foraging_hours[,winter]");
    }
    WeatherDay d;
    try {
      d.t_out = std::stod(trim(cols[0]));
      d.foraging_hours = std::stod(trim(cols[1]));
      if (cols.size() == 3) {
        const auto flag = trim(cols[2]);
        if (flag == "1" || flag == "true") {
          d.winter = true;
        } else if (flag == "0" || flag == "false" || flag.empty()) {
          d.winter = false;
        } else {
          throw std::invalid_argument("bad winter flag");
        }
      }
    } catch (const std::exception&) {
      if (w.days.empty() && line_no == 1) continue;  // header
      throw std::invalid_argument("weather csv line " + std::to_string(line_no) +
                                  ": cannot parse");
    }
    w.days.push_back(d);
  }
  w.validate();
  return w;
}

}  // namespace apiary::config
