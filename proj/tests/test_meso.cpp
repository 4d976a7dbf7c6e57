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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "asrfe2/errors.hpp"
#include "asrfe2/meso.hpp"

using namespace asrfe2;

namespace {

PhaseMaterials table_materials() {
  PhaseMaterials m;
  m.mortar = IsotropicElastic::from_E_nu(12e9, 0.3);
  m.aggregate = IsotropicElastic::from_E_nu(59e9, 0.3);
  m.asr_product = IsotropicElastic::from_E_nu(11e9, 0.18);
  m.mortar_fracture = FractureParams{60.0, 3e6, 1.0};
  m.aggregate_fracture = FractureParams{160.0, 10e6, 1.0};
  return m;
}

RveProblem mortar_rve(double size, double h, std::vector<int> site_elements = {},
                      double lambda_factor = 1e-12) {
  TriMesh mesh = build_structured_mesh(size, size, h);
  std::vector<Phase> phases(static_cast<std::size_t>(mesh.num_elements()),
                            Phase::Mortar);
  for (int e : site_elements) phases[static_cast<std::size_t>(e)] = Phase::AsrSite;
  PhaseMaterials mats = table_materials();
  mats.mortar_fracture.weibull_lambda_factor = lambda_factor;
  mats.aggregate_fracture.weibull_lambda_factor = lambda_factor;
  return make_rve(std::move(mesh), std::move(phases), mats, SolverOptions{}, 42);
}

/// Bottom rollers, one horizontal pin; optional top traction.
RveSystem specimen_system(RveProblem& rve, double top_traction_pa = 0.0) {
  Constraints cons(rve.n_dofs());
  const double tol = 1e-9;
  int pin = -1;
  std::vector<std::pair<int, int>> top_edges;
  const int top_base = rve.mesh.ny * (rve.mesh.nx + 1);
  for (int i = 0; i < rve.mesh.nx; ++i)
    top_edges.emplace_back(top_base + i, top_base + i + 1);
  for (int n = 0; n < rve.mesh.num_nodes(); ++n) {
    if (rve.mesh.nodes[static_cast<std::size_t>(n)].y() < tol) {
      cons.prescribe(2 * n + 1, 0.0);
      if (pin < 0) {
        pin = n;
        cons.prescribe(2 * n, 0.0);
      }
    }
  }
  cons.finalize();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(rve.n_dofs());
  if (top_traction_pa != 0.0)
    add_edge_tractions(rve.mesh, top_edges, Eigen::Vector2d(0.0, top_traction_pa), f);
  return RveSystem(rve, std::move(cons), std::move(f));
}

double max_principal(const Eigen::Vector3d& s) {
  const double mean = 0.5 * (s(0) + s(1));
  return mean + std::hypot(0.5 * (s(0) - s(1)), s(2));
}

} // namespace

TEST_CASE("damage loop: nothing happens without load or expansion") {
  RveProblem rve = mortar_rve(4.0, 1.0, {5});
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const MesoSolution sol = sys.run_damage_loop();
  CHECK(sol.passes == 0);
  CHECK(rve.damaged_count() == 0);
  CHECK(sol.u.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("damage loop: expansion threshold matches the linear-elastic estimate") {
  const RveProblem reference = mortar_rve(8.0, 1.0, {37});

  // Linear oracle: stresses scale with the imposed expansion, so the first
  // failure happens at scale min_e f_t(e) / s1(e) of a unit expansion.
  RveProblem probe = reference;
  const double unit = 1e-4;
  probe.eigen_level = unit * Eigen::Matrix2d::Identity();
  RveSystem probe_sys = RveSystem::periodic(probe, Eigen::Matrix2d::Identity());
  const MesoSolution elastic = probe_sys.solve_elastic();
  double scale_at_failure = 1e300;
  for (int e = 0; e < probe.num_elements(); ++e) {
    if (probe.phases[static_cast<std::size_t>(e)] == Phase::AsrSite) continue;
    const double s1 = max_principal(elastic.stress[static_cast<std::size_t>(e)]);
    if (s1 <= 0.0) continue;
    scale_at_failure =
        std::min(scale_at_failure,
                 probe.states[static_cast<std::size_t>(e)].f_t_current / s1);
  }
  const double estimate = unit * scale_at_failure;

  auto damages = [&](double eps) {
    RveProblem trial = reference;
    trial.eigen_level = eps * Eigen::Matrix2d::Identity();
    RveSystem sys = RveSystem::periodic(trial, Eigen::Matrix2d::Identity());
    sys.run_damage_loop();
    return trial.damaged_count() > 0;
  };
  CHECK_FALSE(damages(0.5 * estimate));
  CHECK(damages(2.0 * estimate));

  double lo = 0.5 * estimate, hi = 2.0 * estimate;
  for (int i = 0; i < 24; ++i) {
    const double mid = 0.5 * (lo + hi);
    (damages(mid) ? hi : lo) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(estimate).epsilon(0.10));
}

TEST_CASE("damage loop: count is monotone across an expansion ramp") {
  RveProblem rve = mortar_rve(8.0, 1.0, {20, 90}, 0.2);
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  int prev = 0;
  std::vector<int> steps;
  for (double eps = 0.0; eps <= 0.03; eps += 0.003) {
    rve.eigen_level = eps * Eigen::Matrix2d::Identity();
    sys.run_damage_loop();
    const int damaged = rve.damaged_count();
    CHECK(damaged >= prev);
    prev = damaged;
    for (const auto& st : rve.states) steps.push_back(st.step);
  }
  CHECK(prev > 0);

  SUBCASE("per-element reduction steps never decrease and angles are frozen") {
    std::vector<double> angles;
    for (const auto& st : rve.states) angles.push_back(st.crack_angle);
    rve.eigen_level = 0.05 * Eigen::Matrix2d::Identity();
    sys.run_damage_loop();
    for (int e = 0; e < rve.num_elements(); ++e) {
      const auto& st = rve.states[static_cast<std::size_t>(e)];
      CHECK(st.step >=
            steps[steps.size() - static_cast<std::size_t>(rve.num_elements()) +
                  static_cast<std::size_t>(e)]);
      if (angles[static_cast<std::size_t>(e)] != 0.0)
        CHECK(st.crack_angle == angles[static_cast<std::size_t>(e)]);
    }
  }
}

TEST_CASE("damage loop: converged states satisfy the strength criterion") {
  RveProblem rve = mortar_rve(8.0, 1.0, {27}, 0.2);
  rve.eigen_level = 0.02 * Eigen::Matrix2d::Identity();
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const MesoSolution sol = sys.run_damage_loop();
  for (int e = 0; e < rve.num_elements(); ++e) {
    if (rve.phases[static_cast<std::size_t>(e)] == Phase::AsrSite) continue;
    const auto& st = rve.states[static_cast<std::size_t>(e)];
    if (st.step >= rve.options.sla.cap_step) continue;  // frozen at the cap
    CHECK(max_principal(sol.stress[static_cast<std::size_t>(e)]) <=
          st.f_t_current * (1.0 + 2e-6));
  }

  SUBCASE("equilibrium holds on unconstrained nodes") {
    const Eigen::VectorXd f_int = sys.internal_force(sol);
    std::vector<bool> constrained(static_cast<std::size_t>(rve.mesh.num_nodes()), false);
    for (int c : rve.pairing.corners) constrained[static_cast<std::size_t>(c)] = true;
    for (auto [s, m] : rve.pairing.right_left) {
      constrained[static_cast<std::size_t>(s)] = true;
      constrained[static_cast<std::size_t>(m)] = true;
    }
    for (auto [s, m] : rve.pairing.top_bottom) {
      constrained[static_cast<std::size_t>(s)] = true;
      constrained[static_cast<std::size_t>(m)] = true;
    }
    double residual = 0.0;
    double scale = f_int.cwiseAbs().maxCoeff();
    for (int n = 0; n < rve.mesh.num_nodes(); ++n) {
      if (constrained[static_cast<std::size_t>(n)]) continue;
      residual = std::max({residual, std::abs(f_int[2 * n]), std::abs(f_int[2 * n + 1])});
    }
    CHECK(residual <= 1e-8 * scale);
  }
}

TEST_CASE("damage loop: deterministic damage sequence") {
  auto run = [] {
    RveProblem rve = mortar_rve(8.0, 1.0, {20, 90}, 0.2);
    rve.eigen_level = 0.02 * Eigen::Matrix2d::Identity();
    RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
    sys.run_damage_loop();
    std::vector<double> out;
    for (const auto& st : rve.states) {
      out.push_back(st.damage);
      out.push_back(st.crack_angle);
    }
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("damage loop: pass cap raises a diagnosis") {
  RveProblem rve = mortar_rve(8.0, 1.0, {27}, 0.2);
  rve.options.pass_cap = 1;
  rve.eigen_level = 0.05 * Eigen::Matrix2d::Identity();
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  CHECK_THROWS_AS(sys.run_damage_loop(), NonConvergenceError);
}

TEST_CASE("closure fixed point: horizontal crack closes under compression") {
  RveProblem rve = mortar_rve(2.0, 1.0);
  ElementState& st = rve.states[0];
  st.cracked = true;
  st.crack_angle = std::numbers::pi / 2;  // crack plane horizontal
  st.step = 1;
  st.damage = 0.5;
  rve.options.damage_enabled = false;

  SUBCASE("vertical compression closes it in one sweep") {
    RveSystem sys = specimen_system(rve, -1e6);
    const MesoSolution sol = sys.solve_with_closure();
    CHECK(sol.closure_iterations == 1);
    CHECK(rve.states[0].closed);
  }
  SUBCASE("vertical tension keeps it open") {
    RveSystem sys = specimen_system(rve, +1e6);
    const MesoSolution sol = sys.solve_with_closure();
    CHECK(sol.closure_iterations == 0);
    CHECK_FALSE(rve.states[0].closed);
  }
  SUBCASE("no cracked elements, no iterations") {
    rve.states[0] = ElementState{};
    rve.states[0].phase = Phase::Mortar;
    RveSystem sys = specimen_system(rve, -1e6);
    const MesoSolution sol = sys.solve_with_closure();
    CHECK(sol.closure_iterations == 0);
  }
}

TEST_CASE("saw-tooth energy: single-element tension dissipates the band energy") {
  // One 1x1 mm square (two triangles), displacement-driven uniaxial tension.
  RveProblem rve = mortar_rve(1.0, 1.0);
  const double eps_u_reg = rve.states[0].envelope.eps_u_reg;

  const double tol = 1e-12;
  std::vector<int> left, right;
  for (int n = 0; n < rve.mesh.num_nodes(); ++n) {
    const auto& x = rve.mesh.nodes[static_cast<std::size_t>(n)];
    if (x.x() < tol) left.push_back(n);
    if (x.x() > 1.0 - tol) right.push_back(n);
  }

  const int n_steps = 400;
  const double u_end = 1.3 * eps_u_reg;  // strain; length 1 mm
  double work = 0.0;
  double prev_force = 0.0, prev_u = 0.0;
  double final_force = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    const double u = u_end * k / n_steps;
    Constraints cons(rve.n_dofs());
    for (int n : left) cons.prescribe(2 * n, 0.0);
    for (int n : right) cons.prescribe(2 * n, u);
    cons.prescribe(2 * left.front() + 1, 0.0);
    cons.finalize();
    RveSystem sys(rve, std::move(cons));
    const MesoSolution sol = sys.run_damage_loop();
    const Eigen::VectorXd f_int = sys.internal_force(sol);
    double force = 0.0;
    for (int n : right) force += f_int[2 * n];
    work += 0.5 * (prev_force + force) * (u - prev_u);
    prev_force = force;
    prev_u = u;
    final_force = force;
  }
  REQUIRE(rve.states[0].step == rve.options.sla.cap_step);
  const double stored = 0.5 * final_force * prev_u;
  const double dissipated = work - stored;
  const double expected = 60.0 / (1.0e-3) * 1.0;  // G_c/w_c times band area
  CHECK(dissipated >= 0.8 * expected);
  CHECK(dissipated <= 1.2 * expected);
}
