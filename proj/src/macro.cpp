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

#include "asrfe2/macro.hpp"

#include <cmath>
#include <string>

#include "asrfe2/errors.hpp"
#include "asrfe2/parallel.hpp"

namespace asrfe2 {

Eigen::Matrix2d macro_gradient(const ElementGeometry& geom, const Eigen::VectorXd& u) {
  Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
  for (int i = 0; i < 3; ++i) {
    const double ux = u[geom.dofs[static_cast<std::size_t>(2 * i)]];
    const double uy = u[geom.dofs[static_cast<std::size_t>(2 * i + 1)]];
    F(0, 0) += ux * geom.grad_N(i, 0);
    F(0, 1) += ux * geom.grad_N(i, 1);
    F(1, 0) += uy * geom.grad_N(i, 0);
    F(1, 1) += uy * geom.grad_N(i, 1);
  }
  return F;
}

void initialize_macro(MacroProblem& p) {
  p.geometry = precompute_element_geometry(p.mesh);
  if (static_cast<int>(p.rves.size()) != p.num_elements())
    throw MeshError("initialize_macro: one RVE per macro element required");
  p.u = Eigen::VectorXd::Zero(p.n_dofs());
  for (const auto& bc : p.dirichlet) p.u[2 * bc.node + bc.component] = bc.value;

  p.f_ext = Eigen::VectorXd::Zero(p.n_dofs());
  std::vector<std::pair<int, int>> edges;
  for (const auto& tr : p.tractions) {
    edges.assign(1, {tr.node_a, tr.node_b});
    add_edge_tractions(p.mesh, edges, tr.traction, p.f_ext);
  }

  p.bindings.clear();
  p.bindings.resize(static_cast<std::size_t>(p.num_elements()));
  parallel_for(static_cast<std::size_t>(p.num_elements()), p.options.workers,
               [&](std::size_t e) {
                 RveBinding& b = p.bindings[e];
                 b.system = std::make_unique<RveSystem>(
                     RveSystem::periodic(p.rves[e], Eigen::Matrix2d::Identity()));
                 b.last_solution = b.system->run_damage_loop();
                 b.effective = homogenize(*b.system, b.last_solution,
                                          p.options.virtual_test_delta);
                 b.pristine_C = b.effective.C;
               });
}

namespace {

Constraints macro_constraints(const MacroProblem& p) {
  Constraints cons(p.n_dofs());
  for (const auto& bc : p.dirichlet) cons.prescribe(2 * bc.node + bc.component, 0.0);
  cons.finalize();
  return cons;
}

void rve_pass(MacroProblem& p) {
  parallel_for(static_cast<std::size_t>(p.num_elements()), p.options.workers,
               [&](std::size_t e) {
                 RveBinding& b = p.bindings[e];
                 const Eigen::Matrix2d F = macro_gradient(p.geometry[e], p.u);
                 b.system->set_deformation(F);
                 b.last_solution = b.system->run_damage_loop();
                 b.effective = homogenize(*b.system, b.last_solution,
                                          p.options.virtual_test_delta);
               });
}

Eigen::VectorXd macro_internal_force(const MacroProblem& p) {
  std::vector<Eigen::Vector3d> stress(static_cast<std::size_t>(p.num_elements()));
  for (int e = 0; e < p.num_elements(); ++e) {
    const Eigen::Matrix2d& s = p.bindings[static_cast<std::size_t>(e)].effective.sigma;
    stress[static_cast<std::size_t>(e)] = Eigen::Vector3d(s(0, 0), s(1, 1), s(0, 1));
  }
  return assemble_internal_force(p.geometry, stress, p.n_dofs());
}

} // namespace

StepStats fe2_step(MacroProblem& p, double t_days) {
  const Eigen::Matrix2d eig = eigenstrain(t_days, p.temperature_K, p.law);
  for (auto& rve : p.rves) rve.eigen_level = eig;

  Constraints cons = macro_constraints(p);
  SparseSolver solver;

  StepStats stats;
  stats.t_days = t_days;
  const double f_ext_norm = (cons.T().transpose() * p.f_ext).norm();

  for (int iter = 0; iter < p.options.iteration_cap; ++iter) {
    rve_pass(p);
    const Eigen::VectorXd residual =
        cons.T().transpose() * (p.f_ext - macro_internal_force(p));
    stats.iterations = iter + 1;
    stats.residual = residual.norm();
    if (iter == 0) stats.reference = std::max(f_ext_norm, stats.residual);

    const bool converged = (stats.reference > 0.0)
                               ? stats.residual <= p.options.tolerance * stats.reference
                               : stats.residual <= 1e-12;
    if (converged) {
      stats.converged = true;
      return stats;
    }

    std::vector<Eigen::Matrix3d> C(static_cast<std::size_t>(p.num_elements()));
    for (int e = 0; e < p.num_elements(); ++e)
      C[static_cast<std::size_t>(e)] = p.bindings[static_cast<std::size_t>(e)].effective.C;
    const SpMat K = assemble_stiffness(p.geometry, C, p.n_dofs());
    solver.factorize(cons.reduce_matrix(K));
    p.u += cons.T() * solver.solve(residual);
  }

  throw NonConvergenceError("macro step at t = " + std::to_string(t_days) +
                            " d did not converge in " +
                            std::to_string(p.options.iteration_cap) +
                            " iterations (residual " + std::to_string(stats.residual) +
                            ", reference " + std::to_string(stats.reference) + ")");
}

Eigen::Matrix2d mean_macro_strain(const MacroProblem& p) {
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  double total = 0.0;
  for (int e = 0; e < p.num_elements(); ++e) {
    const ElementGeometry& g = p.geometry[static_cast<std::size_t>(e)];
    const Eigen::Matrix2d F = macro_gradient(g, p.u);
    const Eigen::Matrix2d strain =
        0.5 * (F + F.transpose()) - Eigen::Matrix2d::Identity();
    acc += g.area * strain;
    total += g.area;
  }
  return acc / total;
}

std::vector<StepStats> fe2_time_march(MacroProblem& p, double t_end_days,
                                      double dt_days, const StepObserver& observer) {
  std::vector<StepStats> stats;
  if (t_end_days <= 0.0) return stats;
  if (!(dt_days > 0.0)) throw ConfigError("fe2_time_march: dt must be positive");

  const auto n_steps = static_cast<long>(std::llround(t_end_days / dt_days));
  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt_days;
    stats.push_back(fe2_step(p, t));
    if (observer) observer(p, stats.back());
  }
  return stats;
}

} // namespace asrfe2
