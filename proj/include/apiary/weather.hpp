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

#include <stdexcept>
#include <vector>

namespace apiary {

struct WeatherDay {
  double t_out = 15.0;  // C
  double foraging_hours = 8.0;
  bool winter = false;
};

struct WeatherSeries {
  std::vector<WeatherDay> days;

  std::size_t size() const { return days.size(); }
  bool empty() const { return days.empty(); }

  void validate() const {
    for (const auto& d : days) {
      if (!(d.foraging_hours >= 0.0 && d.foraging_hours <= 24.0)) {
        throw std::invalid_argument("foraging hours outside [0, 24]");
      }
    }
  }

  WeatherSeries winter_only() const {
    WeatherSeries w;
    for (const auto& d : days) {
      if (d.winter) w.days.push_back(d);
    }
    return w;
  }
};

}  // namespace apiary
