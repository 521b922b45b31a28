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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace apiary::demography {

/// Fraction s(d) of bees surviving to age d, for d in [0, L].
/// Ages beyond L read as zero.
class SurvivalCurve {
 public:
  SurvivalCurve() = default;
  /// Throws std::invalid_argument unless s(0) = 1, s is nonincreasing and
  /// every value lies in [0, 1].
  explicit SurvivalCurve(std::vector<double> fractions);

  /// Constant 1 up to `max_age`, then 0.
  static SurvivalCurve flat(int max_age);
  /// s(d) = 1 - d / (max_age + 1).
  static SurvivalCurve linear(int max_age);

  int max_age() const { return static_cast<int>(s_.size()) - 1; }
  double at(int age) const;
  std::span<const double> values() const { return s_; }

 private:
  std::vector<double> s_{1.0};
};

/// Parses a two-column (age, fraction) CSV. The header line is optional;
/// ages must run 0..L without gaps.
SurvivalCurve read_survival_csv(const std::filesystem::path& path);
SurvivalCurve parse_survival_csv(const std::string& text);

/// Adult females by age in days (index 0..L) plus a lumped male count.
struct AgeStructure {
  std::vector<double> females;
  double males = 0.0;

  double total_females() const;
  double total() const { return total_females() + males; }
  int max_age() const { return static_cast<int>(females.size()) - 1; }
};

/// Task windows: task i covers ages [boundaries[i], boundaries[i+1] - 1];
/// the last task runs to the maximal age.
struct TaskSchedule {
  std::vector<int> boundaries;
  std::vector<std::string> labels;

  std::size_t size() const { return boundaries.size(); }
  /// Throws std::invalid_argument on malformed windows.
  void validate(int max_age) const;
  /// Index of the task with the given label, or -1.
  int find(const std::string& label) const;
  /// Inclusive age window [first, last] of task `index` for lifespan L.
  std::pair<int, int> window(std::size_t index, int max_age) const;
};

struct ColonyState {
  double honey = 0.0;  // g
  double pollen = 0.0;  // g
  double comb = 0.0;  // g
  AgeStructure population;
  // brood[k] holds eggs laid k days ago; they emerge as adults once k reaches
  // the development window.
  std::vector<double> brood;

  double larvae() const;
};

struct EnergyCoefficients {
  double mu = 12700.0;  // J per g of honey
  double alpha = 1000.0;  // J per bee
  double alpha_tilde = 0.13;  // g of pollen per bee
  double gamma = 40000.0;  // J per g of comb
  double pi = 0.002;  // W per bee

  void validate() const;
};

/// E = mu M + alpha N + gamma C.
double total_energy(const ColonyState& state, const EnergyCoefficients& c);
double total_energy(double honey, double bees, double comb,
                    const EnergyCoefficients& c);

double cohort_count(const AgeStructure& pop, const TaskSchedule& sched,
                    std::size_t task_index);

/// Sum over the task window of N0(t - d) s(d), where egg_history[k] holds the
/// number of bees entering age 0 on day k.
double cohort_from_history(std::span<const double> egg_history,
                           const SurvivalCurve& survival,
                           const TaskSchedule& sched, std::size_t task_index,
                           int day);

/// Expected deaths over one day: sum of N_d (s(d) - s(d+1)) / s(d). Each age
/// class is rounded onto the ledger grid so this equals the deaths that
/// advance_day applies.
double daily_mortality(const AgeStructure& pop, const SurvivalCurve& survival);

/// Ages every cohort by one day. Survivors of age d move to d+1 with weight
/// s(d+1)/s(d); `emerging` bees enter at age 0; males are carried unchanged.
AgeStructure advance_day(const AgeStructure& pop, const SurvivalCurve& survival,
                         double emerging);

}  // namespace apiary::demography
