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

#include "asrfe2/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "asrfe2/errors.hpp"

namespace asrfe2 {

double crack_area(double element_area, double eps_volumetric, bool damaged) {
  if (!damaged) return 0.0;
  return element_area * std::max(eps_volumetric, 0.0);
}

double crack_density(const RveProblem& rve, const std::vector<Eigen::Vector3d>& strain,
                     Phase phase) {
  double area = 0.0;
  double cracks = 0.0;
  for (int e = 0; e < rve.num_elements(); ++e) {
    if (rve.phases[static_cast<std::size_t>(e)] != phase) continue;
    const ElementState& st = rve.states[static_cast<std::size_t>(e)];
    const double a = rve.geometry[static_cast<std::size_t>(e)].area;
    area += a;
    const Eigen::Vector3d& eps = strain[static_cast<std::size_t>(e)];
    cracks += crack_area(a, eps(0) + eps(1), st.step > 0);
  }
  if (!(area > 0.0)) throw ConfigError("crack_density: phase has no area");
  return cracks / area;
}

namespace {

struct ProbeFaces {
  std::vector<int> fixed_nodes;   // held face
  std::vector<int> moved_nodes;   // displaced face
};

ProbeFaces probe_faces(const TriMesh& mesh, int axis) {
  const double limit = (axis == 0) ? mesh.width : mesh.height;
  const double tol = 1e-9 * std::max(mesh.width, mesh.height);
  ProbeFaces f;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const double c = (axis == 0) ? mesh.nodes[static_cast<std::size_t>(n)].x()
                                 : mesh.nodes[static_cast<std::size_t>(n)].y();
    if (std::abs(c) < tol) f.fixed_nodes.push_back(n);
    else if (std::abs(c - limit) < tol) f.moved_nodes.push_back(n);
  }
  return f;
}

/// Reaction integral of the probe configuration at the current states.
double probe_reaction(RveProblem& rve, int axis, double displacement) {
  const ProbeFaces faces = probe_faces(rve.mesh, axis);
  Constraints cons(2 * rve.mesh.num_nodes());
  for (int n : faces.fixed_nodes) cons.prescribe(2 * n + axis, 0.0);
  for (int n : faces.moved_nodes) cons.prescribe(2 * n + axis, displacement);
  // Pin the transverse direction at one corner against rigid translation.
  cons.prescribe(2 * faces.fixed_nodes.front() + (1 - axis), 0.0);
  cons.finalize();

  RveSystem sys(rve, std::move(cons));
  const MesoSolution sol = sys.solve_with_closure(/*with_eigen_load=*/false);
  const Eigen::VectorXd f_int = sys.internal_force(sol);
  double reaction = 0.0;
  for (int n : faces.moved_nodes) reaction += f_int[2 * n + axis];
  return reaction;
}

} // namespace

double relative_stiffness(RveProblem& rve, int axis, TestMode mode,
                          double probe_strain) {
  const double size = (axis == 0) ? rve.mesh.width : rve.mesh.height;
  const double sign = (mode == TestMode::Compression) ? -1.0 : 1.0;
  const double displacement = sign * probe_strain * size;

  std::vector<bool> saved_flags(static_cast<std::size_t>(rve.num_elements()));
  for (int e = 0; e < rve.num_elements(); ++e)
    saved_flags[static_cast<std::size_t>(e)] = rve.states[static_cast<std::size_t>(e)].closed;

  const double current = probe_reaction(rve, axis, displacement);

  for (int e = 0; e < rve.num_elements(); ++e)
    rve.states[static_cast<std::size_t>(e)].closed = saved_flags[static_cast<std::size_t>(e)];

  // Pristine reference: same probe with damage masked out.
  std::vector<ElementState> saved_states = rve.states;
  for (auto& st : rve.states) {
    st.cracked = false;
    st.closed = false;
    st.damage = 0.0;
  }
  const double pristine = probe_reaction(rve, axis, displacement);
  rve.states = std::move(saved_states);

  return 100.0 * current / pristine;
}

std::vector<double> orientation_histogram(const RveProblem& rve,
                                          const std::vector<Eigen::Vector3d>& strain,
                                          int bins) {
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  double total = 0.0;
  for (int e = 0; e < rve.num_elements(); ++e) {
    const ElementState& st = rve.states[static_cast<std::size_t>(e)];
    if (!st.cracked || st.step == 0) continue;
    const Eigen::Vector3d& eps = strain[static_cast<std::size_t>(e)];
    const double w = crack_area(rve.geometry[static_cast<std::size_t>(e)].area,
                                eps(0) + eps(1), true);
    if (w <= 0.0) continue;
    double angle = std::fmod(st.crack_angle, std::numbers::pi);
    if (angle < 0.0) angle += std::numbers::pi;
    auto b = static_cast<std::size_t>(angle / std::numbers::pi * bins);
    if (b >= hist.size()) b = hist.size() - 1;
    hist[b] += w;
    total += w;
  }
  if (total > 0.0)
    for (auto& v : hist) v /= total;
  return hist;
}

} // namespace asrfe2
