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

#include "asrfe2/homogenization.hpp"

#include <vector>

namespace asrfe2 {

Eigen::Matrix2d average_stress(const RveProblem& rve,
                               const std::vector<Eigen::Vector3d>& stress_voigt) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  double total = 0.0;
  for (int e = 0; e < rve.num_elements(); ++e) {
    const double a = rve.geometry[static_cast<std::size_t>(e)].area;
    acc += a * stress_voigt[static_cast<std::size_t>(e)];
    total += a;
  }
  acc /= total;
  Eigen::Matrix2d s;
  s << acc(0), acc(2), acc(2), acc(1);
  return s;
}

TestMode select_test_mode(const Eigen::Matrix2d& sigma) {
  const double hydrostatic = 0.5 * (sigma(0, 0) + sigma(1, 1));
  return hydrostatic < 0.0 ? TestMode::Compression : TestMode::Tension;
}

Eigen::Matrix3d virtual_test_stiffness(RveSystem& sys, TestMode mode, double delta) {
  RveProblem& rve = sys.rve();
  std::vector<bool> saved_flags(static_cast<std::size_t>(rve.num_elements()));
  for (int e = 0; e < rve.num_elements(); ++e)
    saved_flags[static_cast<std::size_t>(e)] = rve.states[static_cast<std::size_t>(e)].closed;
  const Eigen::Matrix2d F_entry = sys.deformation();

  const double s = (mode == TestMode::Compression) ? -delta : delta;
  struct Test {
    Eigen::Matrix2d F;
    double strain;  // applied Voigt strain amplitude of this column
    int column;
  };
  Eigen::Matrix2d Fx = Eigen::Matrix2d::Identity();
  Fx(0, 0) += s;
  Eigen::Matrix2d Fy = Eigen::Matrix2d::Identity();
  Fy(1, 1) += s;
  Eigen::Matrix2d Fs = Eigen::Matrix2d::Identity();
  Fs(0, 1) += delta;
  Fs(1, 0) += delta;  // engineering shear 2*delta
  const Test tests[3] = {{Fx, s, 0}, {Fy, s, 1}, {Fs, 2.0 * delta, 2}};

  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  for (const Test& t : tests) {
    sys.set_deformation(t.F);
    const MesoSolution sol = sys.solve_with_closure(/*with_eigen_load=*/false);
    const Eigen::Matrix2d sigma = average_stress(rve, sol.stress);
    C(0, t.column) = sigma(0, 0) / t.strain;
    C(1, t.column) = sigma(1, 1) / t.strain;
    C(2, t.column) = sigma(0, 1) / t.strain;
    for (int e = 0; e < rve.num_elements(); ++e)
      rve.states[static_cast<std::size_t>(e)].closed =
          saved_flags[static_cast<std::size_t>(e)];
  }

  sys.set_deformation(F_entry);
  return 0.5 * (C + C.transpose());
}

EffectiveState homogenize(RveSystem& sys, const MesoSolution& converged, double delta) {
  EffectiveState eff;
  eff.sigma = average_stress(sys.rve(), converged.stress);
  eff.mode = select_test_mode(eff.sigma);
  eff.C = virtual_test_stiffness(sys, eff.mode, delta);
  return eff;
}

} // namespace asrfe2
