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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asrfe2 {

/// Circular aggregate, all lengths in mm.
struct Circle {
  Eigen::Vector2d center;
  double radius = 0.0;
};

enum class Phase : std::uint8_t { Mortar = 0, Aggregate = 1, AsrSite = 2 };

/// Linear-triangle mesh on a rectangle. Structured meshes keep (nx, ny) so
/// that phase assignment and boundary classification can index cells directly.
struct TriMesh {
  std::vector<Eigen::Vector2d> nodes;             // mm
  std::vector<std::array<int, 3>> triangles;      // counter-clockwise
  double element_size = 0.0;                      // h, mm
  double width = 0.0, height = 0.0;               // mm
  int nx = 0, ny = 0;                             // structured grid cells

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(triangles.size()); }
  double area(int e) const;
  Eigen::Vector2d centroid(int e) const;
};

/// Aggregate diameters (mm, descending) whose cumulative area follows a
/// Fuller grading with exponent 0.5 over [d_min, d_max], totalling
/// target_fraction * domain_area within 2%.
std::vector<double> sample_aggregate_diameters(double d_min, double d_max,
                                               double target_fraction,
                                               double domain_area,
                                               std::uint64_t seed);

/// Random sequential placement outcome. `complete` is false when some
/// diameter exceeded max_attempts; circles placed so far are kept and
/// achieved_fraction reports how much area landed.
struct PackingResult {
  std::vector<Circle> circles;
  double achieved_fraction = 0.0;
  bool complete = false;
};

/// Largest-first rejection placement of non-overlapping circles fully inside
/// the width x height rectangle. Deterministic in (diameters, seed).
PackingResult place_aggregates(const std::vector<double>& diameters,
                               double width, double height,
                               int max_attempts_per_circle, std::uint64_t seed);

/// Uniform right-triangle grid: (width/h) x (height/h) squares, each split
/// along the same diagonal. Opposite boundary nodes match exactly, which the
/// periodic tying relies on. Throws ConfigError unless width/h and height/h
/// are integers.
TriMesh build_structured_mesh(double width, double height, double h);

/// Phase label per triangle: Aggregate iff the centroid lies inside a circle,
/// then floor(asr_site_ratio * n_aggregate) aggregate elements are re-labelled
/// AsrSite uniformly at random; everything else Mortar.
std::vector<Phase> assign_phases(const TriMesh& mesh,
                                 const std::vector<Circle>& circles,
                                 double asr_site_ratio, std::uint64_t seed);

/// One `circle <cx> <cy> <r>` line per circle, mm, '.' decimal separator.
void write_geometry_file(const std::string& path,
                         const std::vector<Circle>& circles);

double total_circle_area(const std::vector<Circle>& circles);

} // namespace asrfe2
