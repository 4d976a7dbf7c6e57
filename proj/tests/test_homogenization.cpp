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
#include <vector>

#include "asrfe2/geometry.hpp"
#include "asrfe2/homogenization.hpp"
#include "asrfe2/meso.hpp"
#include "asrfe2/rng.hpp"

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

RveProblem homogeneous_rve(double size, double h) {
  TriMesh mesh = build_structured_mesh(size, size, h);
  std::vector<Phase> phases(static_cast<std::size_t>(mesh.num_elements()),
                            Phase::Mortar);
  PhaseMaterials mats = table_materials();
  mats.mortar_fracture.weibull_lambda_factor = 1e-12;
  return make_rve(std::move(mesh), std::move(phases), mats, SolverOptions{}, 3);
}

RveProblem concrete_rve(double size, double h, std::uint64_t seed) {
  TriMesh mesh = build_structured_mesh(size, size, h);
  const auto diameters =
      sample_aggregate_diameters(1.0, 5.0, 0.4, size * size, derive_seed(seed, 1));
  const auto packing =
      place_aggregates(diameters, size, size, 3000, derive_seed(seed, 2));
  auto phases = assign_phases(mesh, packing.circles, 0.06, derive_seed(seed, 3));
  return make_rve(std::move(mesh), std::move(phases), table_materials(),
                  SolverOptions{}, derive_seed(seed, 4));
}

Eigen::Matrix3d mortar_plane_stress() {
  return isotropic_stiffness(IsotropicElastic::from_E_nu(12e9, 0.3),
                             PlaneAssumption::PlaneStress);
}

double hill_mandel_gap(RveProblem& rve, const Eigen::Matrix2d& F) {
  RveSystem sys = RveSystem::periodic(rve, F);
  const MesoSolution sol = sys.solve_elastic();
  double energy_avg = 0.0;
  double area = 0.0;
  for (int e = 0; e < rve.num_elements(); ++e) {
    const double a = rve.geometry[static_cast<std::size_t>(e)].area;
    energy_avg += a * sol.stress[static_cast<std::size_t>(e)].dot(
                          sol.strain[static_cast<std::size_t>(e)]);
    area += a;
  }
  energy_avg /= area;
  const Eigen::Matrix2d sigma = average_stress(rve, sol.stress);
  const Eigen::Matrix2d eps = 0.5 * (F + F.transpose()) - Eigen::Matrix2d::Identity();
  const double product = (sigma.array() * eps.array()).sum();
  return std::abs(energy_avg - product) / std::abs(product);
}

/// Boundary form of the averaged stress from nodal reactions: the volume
/// average must match it for periodic solutions.
Eigen::Matrix2d boundary_stress_form(RveProblem& rve, RveSystem& sys,
                                     const MesoSolution& sol) {
  const Eigen::VectorXd f_int = sys.internal_force(sol);
  const double tol = 1e-9 * rve.mesh.width;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (int n = 0; n < rve.mesh.num_nodes(); ++n) {
    const auto& x = rve.mesh.nodes[static_cast<std::size_t>(n)];
    const bool boundary = x.x() < tol || x.x() > rve.mesh.width - tol ||
                          x.y() < tol || x.y() > rve.mesh.height - tol;
    if (!boundary) continue;
    const Eigen::Vector2d r(f_int[2 * n], f_int[2 * n + 1]);
    acc += r * x.transpose();
  }
  acc /= rve.mesh.width * rve.mesh.height;
  return 0.5 * (acc + acc.transpose());
}

} // namespace

TEST_CASE("average stress: uniform field and unloaded cell") {
  RveProblem rve = homogeneous_rve(4.0, 1.0);
  std::vector<Eigen::Vector3d> uniform(static_cast<std::size_t>(rve.num_elements()),
                                       Eigen::Vector3d(3e6, -1e6, 0.5e6));
  const Eigen::Matrix2d s = average_stress(rve, uniform);
  CHECK(s(0, 0) == doctest::Approx(3e6));
  CHECK(s(1, 1) == doctest::Approx(-1e6));
  CHECK(s(0, 1) == doctest::Approx(0.5e6));

  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const MesoSolution sol = sys.solve_elastic();
  CHECK(average_stress(rve, sol.stress).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("test mode selection from the hydrostatic sign") {
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  s(0, 0) = 1e6;
  s(1, 1) = -0.5e6;
  CHECK(select_test_mode(s) == TestMode::Tension);
  s(0, 0) = -3e6;
  s(1, 1) = 1e6;
  CHECK(select_test_mode(s) == TestMode::Compression);
  CHECK(select_test_mode(Eigen::Matrix2d::Zero()) == TestMode::Tension);
}

TEST_CASE("virtual tests reproduce the closed-form stiffness of a uniform cell") {
  RveProblem rve = homogeneous_rve(4.0, 0.5);
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const Eigen::Matrix3d expected = mortar_plane_stress();
  for (TestMode mode : {TestMode::Tension, TestMode::Compression}) {
    const Eigen::Matrix3d C = virtual_test_stiffness(sys, mode, 1e-4);
    CHECK((C - expected).cwiseAbs().maxCoeff() <= 1e-8 * expected(0, 0));
  }
}

TEST_CASE("virtual tests are linear in the probe amplitude on frozen states") {
  RveProblem rve = concrete_rve(8.0, 1.0, 17);
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const Eigen::Matrix3d a = virtual_test_stiffness(sys, TestMode::Tension, 1e-4);
  const Eigen::Matrix3d b = virtual_test_stiffness(sys, TestMode::Tension, 2e-4);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("Hill-Mandel identity on elastic cells") {
  std::mt19937_64 rng(9);
  RveProblem heterogeneous = concrete_rve(8.0, 1.0, 5);
  RveProblem uniform = homogeneous_rve(6.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
    F(0, 0) += uniform_real(rng, -3e-4, 3e-4);
    F(1, 1) += uniform_real(rng, -3e-4, 3e-4);
    F(0, 1) += uniform_real(rng, -2e-4, 2e-4);
    F(1, 0) += uniform_real(rng, -2e-4, 2e-4);
    CHECK(hill_mandel_gap(heterogeneous, F) <= 1e-8);
    CHECK(hill_mandel_gap(uniform, F) <= 1e-8);
  }
}

TEST_CASE("volume-average stress equals the boundary reaction form") {
  RveProblem rve = concrete_rve(8.0, 1.0, 23);
  // Converge a damaged state first so the check covers a non-trivial field.
  rve.eigen_level = 0.01 * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
  F(0, 0) += 2e-4;
  RveSystem sys = RveSystem::periodic(rve, F);
  const MesoSolution sol = sys.run_damage_loop();
  CHECK(rve.damaged_count() > 0);

  const Eigen::Matrix2d volume = average_stress(rve, sol.stress);
  const Eigen::Matrix2d boundary = boundary_stress_form(rve, sys, sol);
  CHECK((volume - boundary).cwiseAbs().maxCoeff() <=
        1e-8 * volume.cwiseAbs().maxCoeff());
}

TEST_CASE("synthetic vertical crack band: anisotropy and recovery") {
  RveProblem rve = homogeneous_rve(10.0, 1.0);
  // One full column of elements fully damaged with vertical crack planes.
  for (int e = 0; e < rve.num_elements(); ++e) {
    const Eigen::Vector2d c = rve.mesh.centroid(e);
    if (c.x() < 5.0 || c.x() > 6.0) continue;
    ElementState& st = rve.states[static_cast<std::size_t>(e)];
    st.cracked = true;
    st.crack_angle = 0.0;
    st.step = rve.options.sla.cap_step;
    st.damage = rve.options.sla.d_max;
  }
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const Eigen::Matrix3d pristine = mortar_plane_stress();
  const Eigen::Matrix3d tension = virtual_test_stiffness(sys, TestMode::Tension);
  const Eigen::Matrix3d compression =
      virtual_test_stiffness(sys, TestMode::Compression);

  CHECK(tension(0, 0) <= 0.5 * pristine(0, 0));
  CHECK(tension(1, 1) >= 0.9 * pristine(1, 1));
  CHECK(compression(0, 0) >= tension(0, 0));
  // Closed cracks recover the normal stiffness almost completely.
  CHECK(compression(0, 0) >= 0.9 * pristine(0, 0));

  SUBCASE("closure flags restored after the probes") {
    for (const auto& st : rve.states) CHECK_FALSE(st.closed);
  }
  SUBCASE("compression minus tension stiffness has non-negative diagonal") {
    for (int i = 0; i < 3; ++i)
      CHECK(compression(i, i) - tension(i, i) >= -1e-9 * pristine(0, 0));
  }
}

TEST_CASE("homogenize bundles stress, mode and stiffness consistently") {
  RveProblem rve = concrete_rve(8.0, 1.0, 31);
  int sites = 0;
  for (auto ph : rve.phases) sites += (ph == Phase::AsrSite);
  REQUIRE(sites >= 1);
  rve.eigen_level = 0.005 * Eigen::Matrix2d::Identity();
  RveSystem sys = RveSystem::periodic(rve, Eigen::Matrix2d::Identity());
  const MesoSolution sol = sys.run_damage_loop();
  const EffectiveState eff = homogenize(sys, sol);

  CHECK(eff.mode == select_test_mode(eff.sigma));
  CHECK((eff.C - eff.C.transpose()).cwiseAbs().maxCoeff() <=
        1e-9 * eff.C.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(eff.C);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  // Expansion against a held frame pushes the cell into compression.
  CHECK(eff.sigma(0, 0) < 0.0);
  CHECK(eff.mode == TestMode::Compression);
}
