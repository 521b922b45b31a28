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

#include "apiary/flora.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apiary::flora {

void ForagingParams::validate() const {
  if (!(q0 > 0 && q0_tilde > 0 && d_max > 0 && v_cruise > 0 && v_hop > 0 &&
        k2 > 0 && k3 > 0 && t_hive > 0)) {
    throw std::invalid_argument("foraging parameters must be strictly positive");
  }
}

void FloralResource::validate() const {
  const std::string tag = "resource " + std::to_string(id);
  if (!(rho > 0)) throw std::invalid_argument(tag + ": rho must be > 0");
  if (!(m >= 1)) throw std::invalid_argument(tag + ": m must be >= 1");
  if (n != 2 && n != 3) throw std::invalid_argument(tag + ": n must be 2 or 3");
  if (!(area > 0)) throw std::invalid_argument(tag + ": area must be > 0");
  if (!(q > 0)) throw std::invalid_argument(tag + ": q must be > 0");
  if (!(lambda >= 0)) throw std::invalid_argument(tag + ": lambda must be >= 0");
  if (!(beta >= 0)) throw std::invalid_argument(tag + ": beta must be >= 0");
}

double mean_interflower_distance(double rho, int n, const ForagingParams& p) {
  if (!(rho > 0)) throw std::invalid_argument("density must be > 0");
  return p.k(n) * std::pow(rho, -1.0 / n);
}

double critical_density(const FloralResource& res, const ForagingParams& p) {
  const double base = p.k(res.n) * res.m * p.v_hop / (p.d_max * p.v_cruise);
  return std::pow(base, res.n);
}

double hopping_cost(const FloralResource& res, const ForagingParams& p) {
  return std::pow(critical_density(res, p) / res.rho, 1.0 / res.n);
}

double intrinsic_quality(const FloralResource& res, const ForagingParams& p) {
  if (res.kind != ResourceKind::kNectar) {
    throw std::invalid_argument("intrinsic_quality applies to nectar resources");
  }
  return res.q / p.q0 - hopping_cost(res, p);
}

double quality_at_distance(const FloralResource& res, double d,
                           const ForagingParams& p) {
  if (d < 0) throw std::invalid_argument("negative distance");
  return intrinsic_quality(res, p) - d / p.d_max;
}

const FloralResource* Landscape::find(int id) const {
  for (const auto& r : resources) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::size_t Landscape::cell_count(int id) const {
  return static_cast<std::size_t>(std::count(ids.cells.begin(), ids.cells.end(), id));
}

double distance_to_resource(const Landscape& land, int id, int row, int col) {
  std::int64_t best = -1;
  for (int r = 0; r < land.ids.rows; ++r) {
    for (int c = 0; c < land.ids.cols; ++c) {
      if (land.ids(r, c) != id) continue;
      std::int64_t d2 = std::int64_t(r - row) * (r - row) + std::int64_t(c - col) * (c - col);
      if (best < 0 || d2 < best) best = d2;
    }
  }
  if (best < 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(best)) * land.cell_size;
}

Raster<int> parse_raster_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<int> cells;
  int rows = 0, cols = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t end = line.find(',', pos);
      std::string_view tok(line.data() + pos,
                           (end == std::string::npos ? line.size() : end) - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      int v = 0;
      if (tok.empty()) {
        v = 0;
      } else {
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) {
          throw std::invalid_argument("raster row " + std::to_string(rows + 1) +
                                      ": bad cell '" + std::string(tok) + "'");
        }
      }
      cells.push_back(v);
      ++count;
      if (end == std::string::npos) break;
      pos = end + 1;
    }
    if (cols >= 0 && count != cols) {
      throw std::invalid_argument("raster row " + std::to_string(rows + 1) +
                                  " has " + std::to_string(count) + " cells, expected " +
                                  std::to_string(cols));
    }
    cols = count;
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("raster is empty");
  Raster<int> out(rows, cols);
  out.cells = std::move(cells);
  return out;
}

Raster<int> read_raster_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open raster " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_raster_csv(buf.str());
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

// Two-pass lower-envelope transform (Meijster, Roerdink and Hesselink). The
// column pass finds the vertical distance to the nearest source, the row pass
// takes the lower envelope of the parabolas (x - i)^2 + g(i)^2 with integer
// separators, so the result is exact.
Raster<double> squared_distance_transform(const Raster<std::uint8_t>& source) {
  const int rows = source.rows, cols = source.cols;
  const std::int64_t inf = rows + cols;
  Raster<std::int64_t> g(rows, cols, inf);

  for (int c = 0; c < cols; ++c) {
    std::int64_t run = inf;
    for (int r = 0; r < rows; ++r) {
      run = source(r, c) ? 0 : (run >= inf ? inf : run + 1);
      g(r, c) = run;
    }
    run = g(rows - 1, c);
    for (int r = rows - 2; r >= 0; --r) {
      if (run < inf && run + 1 < g(r, c)) g(r, c) = run + 1;
      run = g(r, c);
    }
  }

  Raster<double> out(rows, cols, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> s(cols), t(cols);
  for (int r = 0; r < rows; ++r) {
    auto gi = [&](std::int64_t i) { return g(r, static_cast<int>(i)); };
    auto f = [&](std::int64_t x, std::int64_t i) { return (x - i) * (x - i) + gi(i) * gi(i); };
    auto sep = [&](std::int64_t i, std::int64_t u) {
      return floor_div(u * u - i * i + gi(u) * gi(u) - gi(i) * gi(i), 2 * (u - i));
    };
    int q = 0;
    s[0] = 0;
    t[0] = 0;
    for (std::int64_t u = 1; u < cols; ++u) {
      while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
      if (q < 0) {
        q = 0;
        s[0] = u;
      } else {
        std::int64_t w = 1 + sep(s[q], u);
        if (w < cols) {
          ++q;
          s[q] = u;
          t[q] = w;
        }
      }
    }
    for (std::int64_t u = cols - 1; u >= 0; --u) {
      if (gi(s[q]) < inf) out(r, static_cast<int>(u)) = static_cast<double>(f(u, s[q]));
      if (u == t[q]) --q;
    }
  }
  return out;
}

namespace {

void check_resolution(const Landscape& land, const ForagingParams& p) {
  if (!(land.cell_size > 0)) throw std::invalid_argument("cell size must be > 0");
  if (land.cell_size > p.d_max / 100.0) {
    throw std::invalid_argument("raster cell size exceeds d_max/100");
  }
  if (land.ids.empty()) throw std::invalid_argument("landscape raster is empty");
}

Raster<std::uint8_t> vacuum_mask(const Landscape& land) {
  Raster<std::uint8_t> v(land.ids.rows, land.ids.cols);
  for (std::size_t i = 0; i < v.cells.size(); ++i) v.cells[i] = land.ids.cells[i] == 0;
  return v;
}

}  // namespace

QualityField resource_quality_field(const Landscape& land, const FloralResource& res,
                                    const ForagingParams& p) {
  check_resolution(land, p);
  const double intrinsic = intrinsic_quality(res, p);
  Raster<std::uint8_t> mask(land.ids.rows, land.ids.cols);
  bool any = false;
  for (std::size_t i = 0; i < mask.cells.size(); ++i) {
    mask.cells[i] = land.ids.cells[i] == res.id;
    any = any || mask.cells[i];
  }
  if (!any) {
    throw std::invalid_argument("resource " + std::to_string(res.id) +
                                " has no cell on the raster");
  }
  auto d2 = squared_distance_transform(mask);
  QualityField field;
  field.cell_size = land.cell_size;
  field.values = Raster<double>(mask.rows, mask.cols);
  field.source = Raster<int>(mask.rows, mask.cols, res.id);
  field.vacuum = vacuum_mask(land);
  for (std::size_t i = 0; i < d2.cells.size(); ++i) {
    field.values.cells[i] = intrinsic - std::sqrt(d2.cells[i]) * land.cell_size / p.d_max;
  }
  return field;
}

QualityField quality_field(const Landscape& land, const ForagingParams& p) {
  check_resolution(land, p);
  QualityField out;
  bool first = true;
  for (const auto& res : land.resources) {
    if (res.kind != ResourceKind::kNectar || land.cell_count(res.id) == 0) continue;
    auto f = resource_quality_field(land, res, p);
    if (first) {
      out = std::move(f);
      first = false;
      continue;
    }
    // Ties keep the lower id so the provenance map is deterministic.
    for (std::size_t i = 0; i < out.values.cells.size(); ++i) {
      double v = f.values.cells[i];
      if (v > out.values.cells[i] ||
          (v == out.values.cells[i] && res.id < out.source.cells[i])) {
        out.values.cells[i] = v;
        out.source.cells[i] = res.id;
      }
    }
  }
  if (first) throw std::invalid_argument("landscape has no nectar resource on the raster");
  return out;
}

double EikonalResidual::fraction_within(double rel) const {
  if (samples == 0) return 0.0;
  std::size_t ok = 0;
  for (double r : residual.cells) {
    if (!std::isnan(r) && r <= rel * target) ++ok;
  }
  return static_cast<double>(ok) / samples;
}

EikonalResidual eikonal_residual(const QualityField& field, const ForagingParams& p) {
  const auto& v = field.values;
  EikonalResidual out;
  out.target = 1.0 / p.d_max;
  out.residual = Raster<double>(v.rows, v.cols, std::numeric_limits<double>::quiet_NaN());
  const double h = field.cell_size;
  auto diff = [&](int r, int c, int dr, int dc, int extent) {
    int lo_r = r - dr, lo_c = c - dc, hi_r = r + dr, hi_c = c + dc;
    double span = 2.0 * h;
    bool lo_ok = (dr ? lo_r >= 0 : lo_c >= 0);
    bool hi_ok = (dr ? hi_r < extent : hi_c < extent);
    if (!lo_ok) { lo_r = r; lo_c = c; span = h; }
    if (!hi_ok) { hi_r = r; hi_c = c; span = h; }
    if (!lo_ok && !hi_ok) return 0.0;
    return (v(hi_r, hi_c) - v(lo_r, lo_c)) / span;
  };
  double sum = 0.0;
  for (int r = 0; r < v.rows; ++r) {
    for (int c = 0; c < v.cols; ++c) {
      if (!field.vacuum(r, c)) continue;
      if (v.rows < 2 && v.cols < 2) continue;
      double gr = v.rows > 1 ? diff(r, c, 1, 0, v.rows) : 0.0;
      double gc = v.cols > 1 ? diff(r, c, 0, 1, v.cols) : 0.0;
      double res = std::abs(std::hypot(gr, gc) - out.target);
      out.residual(r, c) = res;
      out.max = std::max(out.max, res);
      sum += res;
      ++out.samples;
    }
  }
  out.degenerate = out.samples == 0;
  out.mean = out.samples ? sum / out.samples : 0.0;
  return out;
}

void write_field_csv(std::ostream& out, const Raster<double>& values) {
  char buf[32];
  for (int r = 0; r < values.rows; ++r) {
    for (int c = 0; c < values.cols; ++c) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values(r, c));
      if (c) out << ',';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

void write_field_pgm(std::ostream& out, const Raster<double>& values) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : values.cells) {
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  out << "P5\n" << values.cols << ' ' << values.rows << "\n255\n";
  const double span = hi - lo;
  for (double x : values.cells) {
    double level = (std::isfinite(x) && span > 0) ? (x - lo) / span * 255.0 : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(level))));
  }
}

}  // namespace apiary::flora
