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

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "asrfe2/materials.hpp"
#include "asrfe2/rng.hpp"

using namespace asrfe2;

namespace {

const IsotropicElastic kMortar = IsotropicElastic::from_E_nu(12e9, 0.3);

ElementState cracked_state(double damage, double angle) {
  ElementState st;
  st.cracked = damage > 0.0;
  st.damage = damage;
  st.crack_angle = angle;
  return st;
}

Eigen::Matrix3d plane_stress_isotropic(double E, double nu) {
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  const double f = E / (1.0 - nu * nu);
  C(0, 0) = C(1, 1) = f;
  C(0, 1) = C(1, 0) = nu * f;
  C(2, 2) = E / (2.0 * (1.0 + nu));
  return C;
}

Eigen::Matrix3d plane_strain_isotropic(double E, double nu) {
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  C(0, 0) = C(1, 1) = f * (1.0 - nu);
  C(0, 1) = C(1, 0) = f * nu;
  C(2, 2) = E / (2.0 * (1.0 + nu));
  return C;
}

/// Independent oracle: expand the Voigt matrix to a full 4th-order plane
/// tensor, rotate index by index with the rotation matrix, re-pack.
Eigen::Matrix3d rotate_by_tensor_oracle(const Eigen::Matrix3d& C_voigt, double angle) {
  double T[2][2][2][2];
  const auto vi = [](int i, int j) { return (i == j) ? (i == 0 ? 0 : 1) : 2; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          T[i][j][k][l] = C_voigt(vi(i, j), vi(k, l));

  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  double Tr[2][2][2][2] = {};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double acc = 0.0;
          for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
              for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s)
                  acc += R(i, p) * R(j, q) * R(k, r) * R(l, s) * T[p][q][r][s];
          Tr[i][j][k][l] = acc;
        }

  Eigen::Matrix3d out;
  out << Tr[0][0][0][0], Tr[0][0][1][1], Tr[0][0][0][1],
         Tr[1][1][0][0], Tr[1][1][1][1], Tr[1][1][0][1],
         Tr[0][1][0][0], Tr[0][1][1][1], Tr[0][1][0][1];
  return out;
}

double max_rel_diff(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("undamaged stiffness equals the plane-stress closed form") {
  const Eigen::Matrix3d C =
      orthotropic_stiffness(ElementState{}, kMortar, CrackMode::Open,
                            PlaneAssumption::PlaneStress);
  CHECK(C(0, 0) == doctest::Approx(13.1868e9).epsilon(1e-4));
  CHECK(C(0, 1) == doctest::Approx(3.956e9).epsilon(1e-4));
  CHECK(C(2, 2) == doctest::Approx(4.6154e9).epsilon(1e-4));
  CHECK(max_rel_diff(C, plane_stress_isotropic(12e9, 0.3)) < 1e-14);
}

TEST_CASE("undamaged stiffness equals the plane-strain closed form") {
  const Eigen::Matrix3d C =
      orthotropic_stiffness(ElementState{}, kMortar, CrackMode::Open,
                            PlaneAssumption::PlaneStrain);
  CHECK(max_rel_diff(C, plane_strain_isotropic(12e9, 0.3)) < 1e-14);
}

TEST_CASE("isotropy is rotation invariant for any crack angle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const double angle = uniform_real(rng, 0.0, std::numbers::pi);
    const ElementState st = cracked_state(0.0, angle);
    ElementState with_angle = st;
    with_angle.cracked = true;  // angle applies, damage zero
    const Eigen::Matrix3d C = orthotropic_stiffness(
        with_angle, kMortar, CrackMode::Open, PlaneAssumption::PlaneStress);
    CHECK(max_rel_diff(C, plane_stress_isotropic(12e9, 0.3)) < 1e-12);
  }
}

TEST_CASE("zero angle keeps the condensed matrix unrotated") {
  const ElementState st = cracked_state(0.5, 0.0);
  const Eigen::Matrix3d C = orthotropic_stiffness(st, kMortar, CrackMode::Open,
                                                  PlaneAssumption::PlaneStress);
  CHECK(C(0, 2) == 0.0);
  CHECK(C(1, 2) == 0.0);
  CHECK(C(2, 2) == doctest::Approx(kMortar.mu * 0.5));
}

TEST_CASE("rotation matches the fourth-order tensor oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const double d = uniform_real(rng, 0.0, 0.9999);
    const double angle = uniform_real(rng, 0.0, std::numbers::pi);
    const ElementState at_zero = cracked_state(d, 0.0);
    const ElementState rotated = cracked_state(d, angle);
    for (CrackMode mode : {CrackMode::Open, CrackMode::Closed}) {
      const Eigen::Matrix3d C0 = orthotropic_stiffness(at_zero, kMortar, mode,
                                                       PlaneAssumption::PlaneStress);
      const Eigen::Matrix3d C = orthotropic_stiffness(rotated, kMortar, mode,
                                                      PlaneAssumption::PlaneStress);
      CHECK(max_rel_diff(C, rotate_by_tensor_oracle(C0, angle)) < 1e-12);
    }
  }
}

TEST_CASE("stiffness stays symmetric and positive semi-definite over damage") {
  std::mt19937_64 rng(31);
  for (double d : {0.0, 0.25, 0.5, 0.875, 0.96875, 0.999, 0.9999}) {
    for (int i = 0; i < 8; ++i) {
      const double angle = uniform_real(rng, 0.0, std::numbers::pi);
      for (CrackMode mode : {CrackMode::Open, CrackMode::Closed}) {
        const Eigen::Matrix3d C = orthotropic_stiffness(
            cracked_state(d, angle), kMortar, mode, PlaneAssumption::PlaneStress);
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * C.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(C);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * C.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("closure recovery never softens") {
  for (double d : {0.5, 0.96875, 0.9999}) {
    for (double angle : {0.0, 0.3, std::numbers::pi / 4, 1.2}) {
      const ElementState st = cracked_state(d, angle);
      const Eigen::Matrix3d open = orthotropic_stiffness(
          st, kMortar, CrackMode::Open, PlaneAssumption::PlaneStress);
      const Eigen::Matrix3d closed = orthotropic_stiffness(
          st, kMortar, CrackMode::Closed, PlaneAssumption::PlaneStress);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(closed - open);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * closed.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("closed mode recovers normal stiffness but not shear") {
  const ElementState st = cracked_state(0.9999, 0.0);
  const Eigen::Matrix3d closed = orthotropic_stiffness(
      st, kMortar, CrackMode::Closed, PlaneAssumption::PlaneStress);
  const Eigen::Matrix3d pristine = plane_stress_isotropic(12e9, 0.3);
  CHECK(closed(0, 0) == doctest::Approx(pristine(0, 0)).epsilon(1e-12));
  CHECK(closed(0, 1) == doctest::Approx(pristine(0, 1)).epsilon(1e-12));
  CHECK(closed(2, 2) == doctest::Approx(kMortar.mu * 1e-4).epsilon(1e-9));
}

TEST_CASE("fully damaged open crack carries almost no normal stiffness") {
  const ElementState st = cracked_state(0.9999, 0.0);
  const Eigen::Matrix3d C = orthotropic_stiffness(st, kMortar, CrackMode::Open,
                                                  PlaneAssumption::PlaneStress);
  CHECK(C(0, 0) < 2e-4 * 13.19e9);
  CHECK(C(1, 1) > 0.5 * 13.19e9);  // transverse direction keeps carrying load
}
