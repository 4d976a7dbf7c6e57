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

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "asrfe2/geometry.hpp"

namespace asrfe2 {

using SpMat = Eigen::SparseMatrix<double>;

/// Per-element constant-strain-triangle kinematics, precomputed once.
struct ElementGeometry {
  Eigen::Matrix<double, 3, 6> B;       // strain Voigt [xx, yy, xy(eng)] from u
  Eigen::Matrix<double, 3, 2> grad_N;  // shape function gradients
  double area = 0.0;                   // mm^2
  std::array<int, 6> dofs{};           // (2*n0, 2*n0+1, ...)
};

/// Throws MeshError on non-positive element areas.
std::vector<ElementGeometry> precompute_element_geometry(const TriMesh& mesh);

/// K = sum_e A_e B_e^T C_e B_e over all elements (unit thickness).
SpMat assemble_stiffness(const std::vector<ElementGeometry>& geom,
                         const std::vector<Eigen::Matrix3d>& C, int n_dofs);

/// Nodal load equivalent to the stress-free strain field:
/// f += A_e B_e^T C_e eps_voigt_e.
Eigen::VectorXd assemble_eigenstrain_load(const std::vector<ElementGeometry>& geom,
                                          const std::vector<Eigen::Matrix3d>& C,
                                          const std::vector<Eigen::Vector3d>& eps_voigt,
                                          int n_dofs);

/// Internal nodal forces from per-element stresses: sum A_e B_e^T sigma_e.
Eigen::VectorXd assemble_internal_force(const std::vector<ElementGeometry>& geom,
                                        const std::vector<Eigen::Vector3d>& stress_voigt,
                                        int n_dofs);

/// Linear constraints handled by master-slave elimination: u = T u_red + g.
/// Free dofs map to reduced unknowns, prescribed dofs carry a value, slave
/// dofs follow a free master with a constant offset. The reduced operator
/// T^T K T stays symmetric positive definite.
class Constraints {
public:
  explicit Constraints(int n_dofs);

  void prescribe(int dof, double value);
  void tie(int slave_dof, int master_dof, double offset);

  /// Build T and the free-dof numbering; call once after all prescribe/tie
  /// declarations. Values may still be updated afterwards.
  void finalize();

  void set_prescribed_value(int dof, double value);
  void set_tie_offset(int slave_dof, double offset);

  int n_dofs() const { return n_dofs_; }
  int n_free() const { return n_free_; }
  bool finalized() const { return finalized_; }
  const SpMat& T() const { return T_; }
  const Eigen::VectorXd& g() const { return g_; }

  Eigen::VectorXd reduce_rhs(const SpMat& K, const Eigen::VectorXd& f) const;
  SpMat reduce_matrix(const SpMat& K) const;
  Eigen::VectorXd expand(const Eigen::VectorXd& u_red) const;

private:
  enum class Kind : std::uint8_t { Free, Prescribed, Slave };
  int n_dofs_ = 0;
  int n_free_ = 0;
  bool finalized_ = false;
  std::vector<Kind> kind_;
  std::vector<int> master_;
  SpMat T_;
  Eigen::VectorXd g_;
};

/// Corner nodes and opposite-edge node pairs of a rectangular mesh.
/// Pairs are (slave, master): right follows left, top follows bottom.
struct PeriodicPairing {
  std::array<int, 4> corners{};  // (0,0), (W,0), (W,H), (0,H)
  std::vector<std::pair<int, int>> right_left;
  std::vector<std::pair<int, int>> top_bottom;
};

/// Matches boundary nodes by coordinate; throws PairingError when an edge
/// node has no exact counterpart.
PeriodicPairing find_periodic_pairs(const TriMesh& mesh);

/// Corner displacements prescribed to (F - I) x, opposite edges tied with
/// the matching corner offsets.
Constraints make_periodic_constraints(const TriMesh& mesh, const PeriodicPairing& pairing,
                                      const Eigen::Matrix2d& F);

/// Refresh the prescribed values / tie offsets of an existing periodic
/// constraint set for a new deformation gradient (structure unchanged).
void update_periodic_values(Constraints& cons, const TriMesh& mesh,
                            const PeriodicPairing& pairing, const Eigen::Matrix2d& F);

/// Direct sparse SPD solver with pattern reuse across refactorizations.
class SparseSolver {
public:
  SparseSolver();
  void factorize(const SpMat& K_red);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool analyzed() const { return analyzed_; }

private:
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;  // not movable itself
  bool analyzed_ = false;
};

/// Consistent nodal loads for a constant traction on a list of boundary
/// edges (node index pairs); adds t * L / 2 to each end node.
void add_edge_tractions(const TriMesh& mesh,
                        const std::vector<std::pair<int, int>>& edges,
                        const Eigen::Vector2d& traction, Eigen::VectorXd& f);

} // namespace asrfe2
