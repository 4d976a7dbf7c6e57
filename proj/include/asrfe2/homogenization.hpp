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

#include <Eigen/Dense>

#include "asrfe2/meso.hpp"

namespace asrfe2 {

enum class TestMode { Tension, Compression };

/// Homogenized response of one RVE at its current state.
struct EffectiveState {
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();  // Pa
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();      // Pa, Voigt [xx, yy, xy]
  TestMode mode = TestMode::Tension;
};

/// Volume average of the element stresses over the RVE area.
Eigen::Matrix2d average_stress(const RveProblem& rve,
                               const std::vector<Eigen::Vector3d>& stress_voigt);

/// Uniaxial probe direction from the sign of the hydrostatic stress;
/// exactly zero resolves to Tension.
TestMode select_test_mode(const Eigen::Matrix2d& sigma);

/// Effective stiffness by three independent virtual load tests on the frozen
/// state: +/-delta uniaxial in x and y (sign per mode) and one symmetric pure
/// shear of amplitude delta. Each test excludes the eigenstrain load and
/// re-resolves the crack closure flags; the pre-test flags are restored
/// afterwards, so the probe has no side effects. Result is symmetrized.
Eigen::Matrix3d virtual_test_stiffness(RveSystem& periodic_system, TestMode mode,
                                       double delta = 1e-4);

/// average_stress + select_test_mode + virtual_test_stiffness in one sweep.
EffectiveState homogenize(RveSystem& periodic_system, const MesoSolution& converged,
                          double delta = 1e-4);

} // namespace asrfe2
