// Copyright 2026 The asrfe2 Project Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "asrfe2/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "asrfe2/errors.hpp"
#include "asrfe2/rng.hpp"

namespace asrfe2 {

double TriMesh::area(int e) const {
  const auto& t = triangles[static_cast<std::size_t>(e)];
  const Eigen::Vector2d a = nodes[static_cast<std::size_t>(t[0])];
  const Eigen::Vector2d b = nodes[static_cast<std::size_t>(t[1])];
  const Eigen::Vector2d c = nodes[static_cast<std::size_t>(t[2])];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Eigen::Vector2d TriMesh::centroid(int e) const {
  const auto& t = triangles[static_cast<std::size_t>(e)];
  return (nodes[static_cast<std::size_t>(t[0])] + nodes[static_cast<std::size_t>(t[1])] +
          nodes[static_cast<std::size_t>(t[2])]) /
         3.0;
}

namespace {

double circle_area(double d) { return std::numbers::pi * 0.25 * d * d; }

// Fuller cumulative area fraction over the truncated range [d_min, d_max]:
// affine in sqrt(d/d_max), renormalized so F(d_min)=0 and F(d_max)=1.
double fuller_cdf(double d, double d_min, double d_max) {
  const double lo = std::sqrt(d_min / d_max);
  return (std::sqrt(d / d_max) - lo) / (1.0 - lo);
}

} // namespace

std::vector<double> sample_aggregate_diameters(double d_min, double d_max,
                                               double target_fraction,
                                               double domain_area,
                                               std::uint64_t seed) {
  if (target_fraction == 0.0) return {};
  if (!(d_min > 0.0) || !(d_max > d_min))
    throw ConfigError("sample_aggregate_diameters: need 0 < d_min < d_max");
  if (!(target_fraction > 0.0) || !(target_fraction < 1.0))
    throw ConfigError("sample_aggregate_diameters: target_fraction must be in (0, 1)");
  if (!(domain_area > 0.0))
    throw ConfigError("sample_aggregate_diameters: domain_area must be positive");

  const double total_target = target_fraction * domain_area;
  constexpr int kBins = 16;
  std::array<double, kBins + 1> edge{};
  for (int b = 0; b <= kBins; ++b)
    edge[static_cast<std::size_t>(b)] =
        d_min * std::pow(d_max / d_min, static_cast<double>(b) / kBins);

  std::mt19937_64 rng(seed);
  std::vector<double> diameters;
  double placed_area = 0.0;
  // Largest bin first; each bin tops the running total up to its cumulative
  // Fuller quota, so per-bin overshoot is absorbed by the smaller bins.
  for (int b = kBins - 1; b >= 0; --b) {
    const double lo = edge[static_cast<std::size_t>(b)];
    const double hi = edge[static_cast<std::size_t>(b + 1)];
    const double cum_target =
        total_target * (1.0 - fuller_cdf(lo, d_min, d_max));
    while (placed_area < cum_target) {
      const double d = uniform_real(rng, lo, hi);
      diameters.push_back(d);
      placed_area += circle_area(d);
    }
  }
  std::sort(diameters.begin(), diameters.end(), std::greater<double>());
  return diameters;
}

namespace {

// Uniform hash over cells of size d_max; centers of overlapping circles are
// at most d_max apart, so a 3x3 cell ring bounds the candidate set.
class CircleGrid {
public:
  CircleGrid(double cell) : cell_(cell) {}

  void insert(const Circle& c, int idx) {
    cells_[key(c.center)].push_back(idx);
  }

  template <typename Circles>
  bool overlaps(const Circles& placed, const Eigen::Vector2d& p, double r) const {
    const long ix = cell_index(p.x());
    const long iy = cell_index(p.y());
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(pack(ix + dx, iy + dy));
        if (it == cells_.end()) continue;
        for (int idx : it->second) {
          const Circle& o = placed[static_cast<std::size_t>(idx)];
          const double min_dist = r + o.radius;
          if ((p - o.center).squaredNorm() < min_dist * min_dist) return true;
        }
      }
    }
    return false;
  }

private:
  long cell_index(double x) const { return static_cast<long>(std::floor(x / cell_)); }
  std::uint64_t key(const Eigen::Vector2d& p) const {
    return pack(cell_index(p.x()), cell_index(p.y()));
  }
  static std::uint64_t pack(long ix, long iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

} // namespace

PackingResult place_aggregates(const std::vector<double>& diameters,
                               double width, double height,
                               int max_attempts_per_circle, std::uint64_t seed) {
  PackingResult result;
  result.complete = true;
  if (diameters.empty()) return result;
  if (!(width > 0.0) || !(height > 0.0))
    throw ConfigError("place_aggregates: domain must have positive size");
  if (diameters.front() > std::min(width, height))
    throw ConfigError("place_aggregates: largest diameter exceeds the domain");

  std::mt19937_64 rng(seed);
  CircleGrid grid(diameters.front());
  result.circles.reserve(diameters.size());

  for (double d : diameters) {
    const double r = 0.5 * d;
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts_per_circle; ++attempt) {
      Eigen::Vector2d p(uniform_real(rng, r, width - r),
                        uniform_real(rng, r, height - r));
      if (grid.overlaps(result.circles, p, r)) continue;
      grid.insert(Circle{p, r}, static_cast<int>(result.circles.size()));
      result.circles.push_back(Circle{p, r});
      placed = true;
      break;
    }
    if (!placed) {
      result.complete = false;
      break;
    }
  }
  result.achieved_fraction = total_circle_area(result.circles) / (width * height);
  return result;
}

double total_circle_area(const std::vector<Circle>& circles) {
  double a = 0.0;
  for (const auto& c : circles) a += std::numbers::pi * c.radius * c.radius;
  return a;
}

TriMesh build_structured_mesh(double width, double height, double h) {
  if (!(h > 0.0) || !(width > 0.0) || !(height > 0.0))
    throw ConfigError("build_structured_mesh: sizes must be positive");
  const double fx = width / h;
  const double fy = height / h;
  const int nx = static_cast<int>(std::lround(fx));
  const int ny = static_cast<int>(std::lround(fy));
  const double tol = 1e-9;
  if (nx < 1 || ny < 1 || std::abs(fx - nx) > tol || std::abs(fy - ny) > tol)
    throw ConfigError("build_structured_mesh: width and height must be integer multiples of h");

  TriMesh mesh;
  mesh.element_size = h;
  mesh.width = width;
  mesh.height = height;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.emplace_back(i * h, j * h);

  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // Both triangles split along the same (lower-left to upper-right) diagonal.
      mesh.triangles.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
      mesh.triangles.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  }
  return mesh;
}

std::vector<Phase> assign_phases(const TriMesh& mesh,
                                 const std::vector<Circle>& circles,
                                 double asr_site_ratio, std::uint64_t seed) {
  if (!(asr_site_ratio >= 0.0) || !(asr_site_ratio < 1.0))
    throw ConfigError("assign_phases: asr_site_ratio must be in [0, 1)");

  const int n = mesh.num_elements();
  std::vector<Phase> phases(static_cast<std::size_t>(n), Phase::Mortar);
  for (int e = 0; e < n; ++e) {
    const Eigen::Vector2d c = mesh.centroid(e);
    for (const auto& circ : circles) {
      if ((c - circ.center).squaredNorm() <= circ.radius * circ.radius) {
        phases[static_cast<std::size_t>(e)] = Phase::Aggregate;
        break;
      }
    }
  }

  std::vector<int> aggregate_elems;
  for (int e = 0; e < n; ++e)
    if (phases[static_cast<std::size_t>(e)] == Phase::Aggregate)
      aggregate_elems.push_back(e);

  const auto n_sites = static_cast<std::size_t>(
      std::floor(asr_site_ratio * static_cast<double>(aggregate_elems.size())));
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first n_sites entries become the site set.
  for (std::size_t k = 0; k < n_sites; ++k) {
    const std::size_t j =
        k + static_cast<std::size_t>(uniform_index(rng, aggregate_elems.size() - k));
    std::swap(aggregate_elems[k], aggregate_elems[j]);
    phases[static_cast<std::size_t>(aggregate_elems[k])] = Phase::AsrSite;
  }
  return phases;
}

void write_geometry_file(const std::string& path,
                         const std::vector<Circle>& circles) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open geometry file for writing: " + path);
  char line[128];
  for (const auto& c : circles) {
    std::snprintf(line, sizeof(line), "circle %.17g %.17g %.17g\n", c.center.x(),
                  c.center.y(), c.radius);
    out << line;
  }
}

} // namespace asrfe2
