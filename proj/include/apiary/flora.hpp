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

#include <cstdint>
#include <filesystem>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace apiary::flora {

struct ForagingParams {
  double q0 = 200.0;  // J, net energy of one benchmark nectar load
  double q0_tilde = 0.015;  // g, reference pollen load
  double d_max = 10000.0;  // m
  double v_cruise = 7.0;  // m/s
  double v_hop = 1.0;  // m/s
  double k2 = 0.5;
  double k3 = 0.5;
  double t_hive = 300.0;  // s

  double sigma() const { return q0 / d_max; }
  double k(int n) const { return n == 3 ? k3 : k2; }
  void validate() const;
};

enum class ResourceKind { kNectar, kPollen };

struct FloralResource {
  int id = 0;
  std::string name;
  ResourceKind kind = ResourceKind::kNectar;
  double q = 200.0;  // J per nectar load, or g of reference-equivalent pollen
  double rho = 10.0;  // flowers per m^n
  double lambda = 1e-3;  // power (or pollen rate) offered per flower
  double m = 100.0;  // flowers per trip
  double beta = 2.0;  // s per flower visit
  int n = 2;  // 2 for a field, 3 for a bush or tree
  double area = 1.0;  // m^2

  void validate() const;
};

/// k_n rho^(-1/n).
double mean_interflower_distance(double rho, int n, const ForagingParams& p);

/// (k_n m_f v_hop / (d_max V))^n.
double critical_density(const FloralResource& res, const ForagingParams& p);

/// (rho_crit / rho_f)^(1/n), the hopping cost in units of q0.
double hopping_cost(const FloralResource& res, const ForagingParams& p);

/// q_f/q0 - (rho_crit/rho_f)^(1/n). Nectar only; may be negative.
double intrinsic_quality(const FloralResource& res, const ForagingParams& p);

/// intrinsic_quality - d/d_max.
double quality_at_distance(const FloralResource& res, double d,
                           const ForagingParams& p);

template <typename T>
struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<T> cells;

  Raster() = default;
  Raster(int r, int c, T fill = T{}) : rows(r), cols(c), cells(std::size_t(r) * c, fill) {}

  T& operator()(int r, int c) { return cells[std::size_t(r) * cols + c]; }
  const T& operator()(int r, int c) const { return cells[std::size_t(r) * cols + c]; }
  bool empty() const { return cells.empty(); }
};

/// Cells hold resource ids; 0 marks floral vacuum.
struct Landscape {
  Raster<int> ids;
  double cell_size = 50.0;  // m
  std::vector<FloralResource> resources;

  const FloralResource* find(int id) const;
  std::size_t cell_count(int id) const;
};

/// Euclidean distance in m from cell (row, col) to the nearest cell of
/// resource `id`; +inf when the resource has no cell.
double distance_to_resource(const Landscape& land, int id, int row, int col);

Raster<int> parse_raster_csv(const std::string& text);
Raster<int> read_raster_csv(const std::filesystem::path& path);

/// Exact squared Euclidean distance, in cells, from every cell to the nearest
/// cell where `source` is true. Cells with no source anywhere get +inf.
Raster<double> squared_distance_transform(const Raster<std::uint8_t>& source);

struct QualityField {
  Raster<double> values;
  double cell_size = 0.0;
  // Resource id attaining the max at each cell; the field is defined there
  // but the cell itself holds no flowers when `vacuum` is set.
  Raster<int> source;
  Raster<std::uint8_t> vacuum;

  double at(int r, int c) const { return values(r, c); }
};

/// Field of one resource: intrinsic - dist(x, patch)/d_max.
QualityField resource_quality_field(const Landscape& land, const FloralResource& res,
                                    const ForagingParams& p);

/// Pointwise max over nectar resources of their fields. Throws
/// std::invalid_argument with no nectar resource on the raster or when the
/// raster is coarser than d_max/100.
QualityField quality_field(const Landscape& land, const ForagingParams& p);

struct EikonalResidual {
  Raster<double> residual;  // NaN outside the vacuum set
  std::size_t samples = 0;
  double max = 0.0;
  double mean = 0.0;
  double target = 0.0;  // 1/d_max
  bool degenerate = false;  // no vacuum cell with a usable gradient

  /// Fraction of sampled cells whose residual is below `rel` * target.
  double fraction_within(double rel) const;
};

/// | |grad Q| - 1/d_max | on vacuum cells, central differences inside the
/// raster and one-sided differences on its border.
EikonalResidual eikonal_residual(const QualityField& field, const ForagingParams& p);

void write_field_csv(std::ostream& out, const Raster<double>& values);
/// Binary 8-bit PGM; min maps to 0 and max to 255.
void write_field_pgm(std::ostream& out, const Raster<double>& values);

}  // namespace apiary::flora
