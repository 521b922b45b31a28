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

#include "apiary/demography.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "apiary/ledger.hpp"

namespace apiary::demography {

SurvivalCurve::SurvivalCurve(std::vector<double> fractions)
    : s_(std::move(fractions)) {
  if (s_.empty()) throw std::invalid_argument("survival curve is empty");
  if (s_.front() != 1.0) {
    throw std::invalid_argument("survival curve must start at s(0) = 1");
  }
  for (std::size_t d = 0; d < s_.size(); ++d) {
    if (!(s_[d] >= 0.0 && s_[d] <= 1.0)) {
      throw std::invalid_argument("survival fraction outside [0, 1] at age " +
                                  std::to_string(d));
    }
    if (d > 0 && s_[d] > s_[d - 1]) {
      throw std::invalid_argument("survival curve increases at age " +
                                  std::to_string(d));
    }
  }
}

SurvivalCurve SurvivalCurve::flat(int max_age) {
  if (max_age < 0) throw std::invalid_argument("negative lifespan");
  return SurvivalCurve(std::vector<double>(max_age + 1, 1.0));
}

SurvivalCurve SurvivalCurve::linear(int max_age) {
  if (max_age < 0) throw std::invalid_argument("negative lifespan");
  std::vector<double> s(max_age + 1);
  for (int d = 0; d <= max_age; ++d) {
    s[d] = 1.0 - static_cast<double>(d) / (max_age + 1);
  }
  return SurvivalCurve(std::move(s));
}

double SurvivalCurve::at(int age) const {
  if (age < 0) throw std::out_of_range("negative age");
  return age > max_age() ? 0.0 : s_[age];
}

namespace {

std::string_view trim(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
    v.remove_suffix(1);
  return v;
}

template <typename T>
bool parse_number(std::string_view v, T& out) {
  v = trim(v);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc() && ptr == v.data() + v.size();
}

}  // namespace

SurvivalCurve parse_survival_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> s;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("survival csv line " + std::to_string(line_no) +
                                  ": expected two columns");
    }
    std::string_view lhs(line.data(), comma);
    std::string_view rhs(line.data() + comma + 1, line.size() - comma - 1);
    int age = 0;
    double frac = 0.0;
    if (!parse_number(lhs, age)) {
      if (s.empty() && line_no == 1) continue;  // header
      throw std::invalid_argument("survival csv line " + std::to_string(line_no) +
                                  ": bad age");
    }
    if (!parse_number(rhs, frac)) {
      throw std::invalid_argument("survival csv line " + std::to_string(line_no) +
                                  ": bad fraction");
    }
    if (age != static_cast<int>(s.size())) {
      throw std::invalid_argument("survival csv line " + std::to_string(line_no) +
                                  ": ages must be contiguous from 0");
    }
    s.push_back(frac);
  }
  return SurvivalCurve(std::move(s));
}

SurvivalCurve read_survival_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_survival_csv(buf.str());
}

double AgeStructure::total_females() const {
  return std::accumulate(females.begin(), females.end(), 0.0);
}

void TaskSchedule::validate(int max_age) const {
  if (boundaries.empty()) throw std::invalid_argument("task schedule is empty");
  if (labels.size() != boundaries.size()) {
    throw std::invalid_argument("task schedule needs one label per boundary");
  }
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i] < 0 || boundaries[i] > max_age) {
      throw std::invalid_argument("task boundary outside [0, L]");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) {
      throw std::invalid_argument("task boundaries must strictly increase");
    }
  }
}

int TaskSchedule::find(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

std::pair<int, int> TaskSchedule::window(std::size_t index, int max_age) const {
  if (index >= boundaries.size()) {
    throw std::out_of_range("task index " + std::to_string(index) +
                            " out of range");
  }
  int last = index + 1 < boundaries.size() ? boundaries[index + 1] - 1 : max_age;
  return {boundaries[index], last};
}

double ColonyState::larvae() const {
  return std::accumulate(brood.begin(), brood.end(), 0.0);
}

void EnergyCoefficients::validate() const {
  if (!(mu > 0 && alpha > 0 && alpha_tilde > 0 && gamma > 0 && pi > 0)) {
    throw std::invalid_argument("energy coefficients must be strictly positive");
  }
}

double total_energy(double honey, double bees, double comb,
                    const EnergyCoefficients& c) {
  return c.mu * honey + c.alpha * bees + c.gamma * comb;
}

double total_energy(const ColonyState& state, const EnergyCoefficients& c) {
  return total_energy(state.honey, state.population.total(), state.comb, c);
}

double cohort_count(const AgeStructure& pop, const TaskSchedule& sched,
                    std::size_t task_index) {
  auto [first, last] = sched.window(task_index, pop.max_age());
  last = std::min(last, pop.max_age());
  double n = 0.0;
  for (int d = first; d <= last; ++d) n += pop.females[d];
  return n;
}

double cohort_from_history(std::span<const double> egg_history,
                           const SurvivalCurve& survival,
                           const TaskSchedule& sched, std::size_t task_index,
                           int day) {
  auto [first, last] = sched.window(task_index, survival.max_age());
  if (day < 0 || day >= static_cast<int>(egg_history.size()) || day - last < 0) {
    throw std::out_of_range("egg history too short for day " +
                            std::to_string(day));
  }
  double n = 0.0;
  for (int d = first; d <= last; ++d) n += egg_history[day - d] * survival.at(d);
  return n;
}

namespace {

// Survivors of age class d after one day, on the ledger grid.
double survivors(double count, const SurvivalCurve& s, int d) {
  double here = s.at(d);
  if (here == 0.0) {
    if (count > 0.0) {
      throw std::domain_error("bees present at age " + std::to_string(d) +
                              " where survival is zero");
    }
    return 0.0;
  }
  return quantize(count * (s.at(d + 1) / here));
}

void check_shape(const AgeStructure& pop, const SurvivalCurve& s) {
  if (pop.max_age() != s.max_age()) {
    throw std::invalid_argument("age structure and survival curve disagree on L");
  }
}

}  // namespace

double daily_mortality(const AgeStructure& pop, const SurvivalCurve& survival) {
  check_shape(pop, survival);
  double deaths = 0.0;
  for (int d = 0; d <= pop.max_age(); ++d) {
    double n = quantize(pop.females[d]);
    deaths += n - survivors(n, survival, d);
  }
  return deaths;
}

AgeStructure advance_day(const AgeStructure& pop, const SurvivalCurve& survival,
                         double emerging) {
  check_shape(pop, survival);
  if (emerging < 0.0) throw std::invalid_argument("negative emergence");
  AgeStructure next;
  next.males = pop.males;
  next.females.assign(pop.females.size(), 0.0);
  next.females[0] = quantize(emerging);
  for (int d = 0; d < pop.max_age(); ++d) {
    next.females[d + 1] = survivors(quantize(pop.females[d]), survival, d);
  }
  // The oldest class has s(L+1) = 0; it only needs the consistency check.
  survivors(quantize(pop.females.back()), survival, pop.max_age());
  return next;
}

}  // namespace apiary::demography
