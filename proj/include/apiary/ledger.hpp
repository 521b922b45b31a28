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

#include <cmath>

namespace apiary {

// Stocks (grams of honey and pollen, bee counts) live on a dyadic grid of
// 2^-24 units. Every value on the grid below 2^29 is an exact double, so sums
// and differences of stocks are exact and the daily ledger closes bit for bit.
inline constexpr int kLedgerBits = 24;

// Rounds to the nearest grid point (ties away from zero).
inline double quantize(double x) {
  return std::ldexp(std::round(std::ldexp(x, kLedgerBits)), -kLedgerBits);
}

inline bool on_grid(double x) { return quantize(x) == x; }

}  // namespace apiary
