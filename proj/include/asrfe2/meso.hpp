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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "asrfe2/fem.hpp"
#include "asrfe2/geometry.hpp"
#include "asrfe2/materials.hpp"

namespace asrfe2 {

struct PhaseMaterials {
  IsotropicElastic mortar;
  IsotropicElastic aggregate;
  IsotropicElastic asr_product;
  FractureParams mortar_fracture;
  FractureParams aggregate_fracture;

  const IsotropicElastic& elastic(Phase p) const {
    switch (p) {
      case Phase::Aggregate: return aggregate;
      case Phase::AsrSite: return asr_product;
      default: return mortar;
    }
  }
  const FractureParams& fracture(Phase p) const {
    return p == Phase::Aggregate ? aggregate_fracture : mortar_fracture;
  }
};

struct SolverOptions {
  SlaParams sla;
  double criterion_tol = 1e-6;   // strength violation tolerance in the loop
  int pass_cap = 20000;
  int closure_cap = 5;
  bool classical_sla = false;    // reduce only the worst element per pass
  bool damage_enabled = true;
  PlaneAssumption plane = PlaneAssumption::PlaneStress;
};

/// A meso specimen or RVE: mesh, phases, per-element constitutive memory and
/// the current expansion level of the reactive sites. Owned by exactly one
/// worker at a time; all solves are single-threaded.
struct RveProblem {
  TriMesh mesh;
  std::vector<Phase> phases;
  std::vector<ElementState> states;
  PeriodicPairing pairing;
  Eigen::Matrix2d eigen_level = Eigen::Matrix2d::Zero();
  double temperature_K = 0.0;
  PhaseMaterials materials;
  SolverOptions options;
  bool eigenstrain_everywhere = false;  // synthetic: expansion in all elements

  std::vector<ElementGeometry> geometry;  // precomputed kinematics

  int num_elements() const { return mesh.num_elements(); }
  int n_dofs() const { return 2 * mesh.num_nodes(); }
  int damaged_count() const;
  double phase_area(Phase p) const;
};

/// Assembles states (Weibull strengths, saw-tooth envelopes) and kinematics.
/// Strengths are drawn per element in ascending index order from
/// strength_seed, one uniform variate per non-site element.
RveProblem make_rve(TriMesh mesh, std::vector<Phase> phases,
                    const PhaseMaterials& materials, const SolverOptions& options,
                    std::uint64_t strength_seed, bool periodic = true);

/// Current in-plane stiffness of one element (phase + damage + closure).
Eigen::Matrix3d element_stiffness(const RveProblem& rve, int e);

/// Voigt eigenstrain [xx, yy, 2*xy] applied to element e (zero off sites).
Eigen::Vector3d element_eigenstrain(const RveProblem& rve, int e);

struct MesoSolution {
  Eigen::VectorXd u;                      // full-length nodal displacements
  std::vector<Eigen::Vector3d> strain;    // Voigt, engineering shear
  std::vector<Eigen::Vector3d> stress;    // Voigt
  int passes = 0;                         // SLA passes executed
  int closure_iterations = 0;             // closure sweeps across all passes
  int closure_cap_hits = 0;
};

/// One RVE bound to one constraint structure. Keeps the factorization
/// pattern across reassemblies; the deformation gradient can be updated
/// in place for periodic systems.
class RveSystem {
public:
  /// cons must be finalized; f_ext sized to rve.n_dofs() (empty -> zero).
  RveSystem(RveProblem& rve, Constraints cons, Eigen::VectorXd f_ext = {});

  static RveSystem periodic(RveProblem& rve, const Eigen::Matrix2d& F);

  void set_deformation(const Eigen::Matrix2d& F);
  const Eigen::Matrix2d& deformation() const { return F_; }

  /// Single linear solve at the current states; no flag or damage updates.
  MesoSolution solve_elastic(bool with_eigen_load = true);

  /// Linear solve plus the closure fixed point (flags may change; damage
  /// does not evolve). Used by the stiffness probes and virtual tests.
  MesoSolution solve_with_closure(bool with_eigen_load = true);

  /// Saw-tooth damage loop: repeat {solve, resolve closure, reduce all
  /// elements violating the strength criterion} until no element changes.
  MesoSolution run_damage_loop();

  RveProblem& rve() { return *rve_; }
  const Constraints& constraints() const { return cons_; }
  Constraints& constraints() { return cons_; }
  const Eigen::VectorXd& external_load() const { return f_ext_; }

  /// Internal nodal forces assembled from the solution's element stresses.
  Eigen::VectorXd internal_force(const MesoSolution& sol) const;

private:
  void assemble_(bool with_eigen_load);
  MesoSolution solve_assembled_();
  void recover_fields_(MesoSolution& sol) const;
  /// One sweep of closure flag updates; returns number of flips.
  int update_closure_flags_(const MesoSolution& sol);
  int closure_fixed_point_(MesoSolution& sol, bool with_eigen_load, int* cap_hits);

  RveProblem* rve_;
  Constraints cons_;
  Eigen::VectorXd f_ext_;
  Eigen::Matrix2d F_ = Eigen::Matrix2d::Identity();
  bool is_periodic_ = false;
  SpMat K_;
  Eigen::VectorXd f_eig_;
  bool with_eigen_ = true;
  SparseSolver solver_;
  std::vector<Eigen::Matrix3d> C_;  // scratch, per-element stiffness
};

} // namespace asrfe2
