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

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asrfe2/fem.hpp"
#include "asrfe2/homogenization.hpp"
#include "asrfe2/meso.hpp"

namespace asrfe2 {

struct DirichletBc {
  int node = 0;
  int component = 0;  // 0 = x, 1 = y
  double value = 0.0;
};

struct EdgeTraction {
  int node_a = 0;
  int node_b = 0;
  Eigen::Vector2d traction = Eigen::Vector2d::Zero();  // Pa
};

struct Fe2Options {
  double tolerance = 1e-4;   // relative residual
  int iteration_cap = 50;
  double virtual_test_delta = 1e-4;
  unsigned workers = 0;      // 0 = hardware concurrency
};

/// One macro element bound to its RVE: keeps the periodic system (and its
/// factorization pattern) plus the latest converged meso solution.
struct RveBinding {
  std::unique_ptr<RveSystem> system;
  MesoSolution last_solution;
  EffectiveState effective;
  Eigen::Matrix3d pristine_C = Eigen::Matrix3d::Zero();
};

/// Macro boundary value problem with one integration point per triangle and
/// one RVE per integration point.
struct MacroProblem {
  TriMesh mesh;
  std::vector<DirichletBc> dirichlet;
  std::vector<EdgeTraction> tractions;
  double temperature_K = 0.0;
  AsrLaw law;
  Fe2Options options;

  std::vector<ElementGeometry> geometry;
  std::vector<RveProblem> rves;       // one per macro element
  std::vector<RveBinding> bindings;
  Eigen::VectorXd u;                  // nodal displacements, mm
  Eigen::VectorXd f_ext;

  int n_dofs() const { return 2 * mesh.num_nodes(); }
  int num_elements() const { return mesh.num_elements(); }
};

/// Wire up geometry, external loads, constraints and per-element RVE systems;
/// runs the initial RVE pass so pristine effective stiffnesses are available.
void initialize_macro(MacroProblem& problem);

/// Constant deformation gradient of one macro element: F = I + grad(u).
Eigen::Matrix2d macro_gradient(const ElementGeometry& geom, const Eigen::VectorXd& u);

struct StepStats {
  double t_days = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double reference = 0.0;
  bool converged = false;
};

/// One load/time step at reaction time t_days: sets the expansion level in
/// every RVE, then alternates macro solves with parallel RVE passes until the
/// force residual drops below tolerance * reference, where reference is
/// max(|f_ext|, first residual of the step). Throws NonConvergenceError at
/// the iteration cap.
StepStats fe2_step(MacroProblem& problem, double t_days);

/// Volume average of the macro strain tensor.
Eigen::Matrix2d mean_macro_strain(const MacroProblem& problem);

using StepObserver = std::function<void(const MacroProblem&, const StepStats&)>;

/// Time march over t = 0, dt, 2*dt, ..., t_end. t_end <= 0 yields no steps.
/// The observer runs after every converged step (including t = 0).
std::vector<StepStats> fe2_time_march(MacroProblem& problem, double t_end_days,
                                      double dt_days,
                                      const StepObserver& observer = {});

} // namespace asrfe2
