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

#include <vector>

#include <Eigen/Dense>

#include "asrfe2/homogenization.hpp"
#include "asrfe2/meso.hpp"

namespace asrfe2 {

/// Opened crack area of one element: initial area times the positive part of
/// the volumetric strain; zero for undamaged elements or closed cracks.
double crack_area(double element_area, double eps_volumetric, bool damaged);

/// Sum of element crack areas within a phase divided by the phase area.
/// Throws ConfigError when the phase has no area.
double crack_density(const RveProblem& rve, const std::vector<Eigen::Vector3d>& strain,
                     Phase phase);

/// Face-displacement stiffness probe: a small uniform normal displacement on
/// one face (tension or compression), opposite face held, one node pinned;
/// one solve with closure resolution, damage and flags untouched afterwards.
/// Returns 100 * (face reaction integral) / (same integral with pristine
/// states). axis: 0 = x, 1 = y.
double relative_stiffness(RveProblem& rve, int axis, TestMode mode,
                          double probe_strain = 1e-4);

/// Area-weighted histogram of crack-normal angles over [0, pi), normalized
/// to unit mass; empty (all zero) when nothing is cracked or opened.
std::vector<double> orientation_histogram(const RveProblem& rve,
                                          const std::vector<Eigen::Vector3d>& strain,
                                          int bins);

} // namespace asrfe2
