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

#include "asrfe2/fem.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "asrfe2/errors.hpp"

namespace asrfe2 {

std::vector<ElementGeometry> precompute_element_geometry(const TriMesh& mesh) {
  std::vector<ElementGeometry> geom(static_cast<std::size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.triangles[static_cast<std::size_t>(e)];
    const Eigen::Vector2d p0 = mesh.nodes[static_cast<std::size_t>(t[0])];
    const Eigen::Vector2d p1 = mesh.nodes[static_cast<std::size_t>(t[1])];
    const Eigen::Vector2d p2 = mesh.nodes[static_cast<std::size_t>(t[2])];
    const double two_a = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                         (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (!(two_a > 0.0))
      throw MeshError("element " + std::to_string(e) + " has non-positive area");

    ElementGeometry& g = geom[static_cast<std::size_t>(e)];
    g.area = 0.5 * two_a;
    const double b[3] = {p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y()};
    const double c[3] = {p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x()};
    g.B.setZero();
    for (int i = 0; i < 3; ++i) {
      const double bi = b[i] / two_a;
      const double ci = c[i] / two_a;
      g.grad_N(i, 0) = bi;
      g.grad_N(i, 1) = ci;
      g.B(0, 2 * i) = bi;
      g.B(1, 2 * i + 1) = ci;
      g.B(2, 2 * i) = ci;
      g.B(2, 2 * i + 1) = bi;
      g.dofs[static_cast<std::size_t>(2 * i)] = 2 * t[static_cast<std::size_t>(i)];
      g.dofs[static_cast<std::size_t>(2 * i + 1)] = 2 * t[static_cast<std::size_t>(i)] + 1;
    }
  }
  return geom;
}

SpMat assemble_stiffness(const std::vector<ElementGeometry>& geom,
                         const std::vector<Eigen::Matrix3d>& C, int n_dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(geom.size() * 36);
  for (std::size_t e = 0; e < geom.size(); ++e) {
    const ElementGeometry& g = geom[e];
    const Eigen::Matrix<double, 6, 6> Ke = g.area * g.B.transpose() * C[e] * g.B;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        trip.emplace_back(g.dofs[static_cast<std::size_t>(i)],
                          g.dofs[static_cast<std::size_t>(j)], Ke(i, j));
  }
  SpMat K(n_dofs, n_dofs);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd assemble_eigenstrain_load(const std::vector<ElementGeometry>& geom,
                                          const std::vector<Eigen::Matrix3d>& C,
                                          const std::vector<Eigen::Vector3d>& eps_voigt,
                                          int n_dofs) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dofs);
  for (std::size_t e = 0; e < geom.size(); ++e) {
    if (eps_voigt[e].isZero()) continue;
    const ElementGeometry& g = geom[e];
    const Eigen::Matrix<double, 6, 1> fe =
        g.area * g.B.transpose() * (C[e] * eps_voigt[e]);
    for (int i = 0; i < 6; ++i) f[g.dofs[static_cast<std::size_t>(i)]] += fe(i);
  }
  return f;
}

Eigen::VectorXd assemble_internal_force(const std::vector<ElementGeometry>& geom,
                                        const std::vector<Eigen::Vector3d>& stress_voigt,
                                        int n_dofs) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dofs);
  for (std::size_t e = 0; e < geom.size(); ++e) {
    const ElementGeometry& g = geom[e];
    const Eigen::Matrix<double, 6, 1> fe = g.area * g.B.transpose() * stress_voigt[e];
    for (int i = 0; i < 6; ++i) f[g.dofs[static_cast<std::size_t>(i)]] += fe(i);
  }
  return f;
}

Constraints::Constraints(int n_dofs)
    : n_dofs_(n_dofs),
      kind_(static_cast<std::size_t>(n_dofs), Kind::Free),
      master_(static_cast<std::size_t>(n_dofs), -1),
      g_(Eigen::VectorXd::Zero(n_dofs)) {}

void Constraints::prescribe(int dof, double value) {
  if (finalized_) throw MeshError("Constraints: prescribe after finalize");
  kind_[static_cast<std::size_t>(dof)] = Kind::Prescribed;
  g_[dof] = value;
}

void Constraints::tie(int slave_dof, int master_dof, double offset) {
  if (finalized_) throw MeshError("Constraints: tie after finalize");
  kind_[static_cast<std::size_t>(slave_dof)] = Kind::Slave;
  master_[static_cast<std::size_t>(slave_dof)] = master_dof;
  g_[slave_dof] = offset;
}

void Constraints::finalize() {
  std::vector<int> reduced(static_cast<std::size_t>(n_dofs_), -1);
  n_free_ = 0;
  for (int d = 0; d < n_dofs_; ++d)
    if (kind_[static_cast<std::size_t>(d)] == Kind::Free) reduced[static_cast<std::size_t>(d)] = n_free_++;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_dofs_));
  for (int d = 0; d < n_dofs_; ++d) {
    switch (kind_[static_cast<std::size_t>(d)]) {
      case Kind::Free:
        trip.emplace_back(d, reduced[static_cast<std::size_t>(d)], 1.0);
        break;
      case Kind::Slave: {
        const int m = master_[static_cast<std::size_t>(d)];
        if (kind_[static_cast<std::size_t>(m)] != Kind::Free)
          throw MeshError("Constraints: slave tied to a non-free master dof");
        trip.emplace_back(d, reduced[static_cast<std::size_t>(m)], 1.0);
        break;
      }
      case Kind::Prescribed:
        break;
    }
  }
  T_.resize(n_dofs_, n_free_);
  T_.setFromTriplets(trip.begin(), trip.end());
  finalized_ = true;
}

void Constraints::set_prescribed_value(int dof, double value) {
  if (kind_[static_cast<std::size_t>(dof)] != Kind::Prescribed)
    throw MeshError("Constraints: dof is not prescribed");
  g_[dof] = value;
}

void Constraints::set_tie_offset(int slave_dof, double offset) {
  if (kind_[static_cast<std::size_t>(slave_dof)] != Kind::Slave)
    throw MeshError("Constraints: dof is not a slave");
  g_[slave_dof] = offset;
}

Eigen::VectorXd Constraints::reduce_rhs(const SpMat& K, const Eigen::VectorXd& f) const {
  return T_.transpose() * (f - K * g_);
}

SpMat Constraints::reduce_matrix(const SpMat& K) const {
  SpMat Kt = K * T_;
  SpMat K_red = T_.transpose() * Kt;
  return K_red;
}

Eigen::VectorXd Constraints::expand(const Eigen::VectorXd& u_red) const {
  return T_ * u_red + g_;
}

PeriodicPairing find_periodic_pairs(const TriMesh& mesh) {
  const double W = mesh.width, H = mesh.height;
  const double tol = 1e-9 * std::max(W, H);
  PeriodicPairing p;
  std::vector<std::pair<double, int>> left, right, bottom, top;
  std::array<int, 4> corners{-1, -1, -1, -1};

  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Eigen::Vector2d& x = mesh.nodes[static_cast<std::size_t>(n)];
    const bool on_l = std::abs(x.x()) < tol;
    const bool on_r = std::abs(x.x() - W) < tol;
    const bool on_b = std::abs(x.y()) < tol;
    const bool on_t = std::abs(x.y() - H) < tol;
    if (on_l && on_b) corners[0] = n;
    else if (on_r && on_b) corners[1] = n;
    else if (on_r && on_t) corners[2] = n;
    else if (on_l && on_t) corners[3] = n;
    else if (on_l) left.emplace_back(x.y(), n);
    else if (on_r) right.emplace_back(x.y(), n);
    else if (on_b) bottom.emplace_back(x.x(), n);
    else if (on_t) top.emplace_back(x.x(), n);
  }
  for (int c : corners)
    if (c < 0) throw PairingError("mesh has no node at a rectangle corner");
  p.corners = corners;

  auto match = [tol](std::vector<std::pair<double, int>>& a,
                     std::vector<std::pair<double, int>>& b,
                     std::vector<std::pair<int, int>>& out, const char* what) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() != b.size())
      throw PairingError(std::string("unequal node counts on opposite ") + what);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].first - b[i].first) > tol)
        throw PairingError(std::string("non-matching node coordinates on ") + what);
      out.emplace_back(a[i].second, b[i].second);  // (slave, master)
    }
  };
  match(right, left, p.right_left, "left/right edges");
  match(top, bottom, p.top_bottom, "bottom/top edges");
  return p;
}

Constraints make_periodic_constraints(const TriMesh& mesh, const PeriodicPairing& pairing,
                                      const Eigen::Matrix2d& F) {
  Constraints cons(2 * mesh.num_nodes());
  const Eigen::Matrix2d A = F - Eigen::Matrix2d::Identity();
  for (int c : pairing.corners) {
    const Eigen::Vector2d u = A * mesh.nodes[static_cast<std::size_t>(c)];
    cons.prescribe(2 * c, u.x());
    cons.prescribe(2 * c + 1, u.y());
  }
  auto tie_pairs = [&](const std::vector<std::pair<int, int>>& pairs) {
    for (auto [slave, master] : pairs) {
      const Eigen::Vector2d off = A * (mesh.nodes[static_cast<std::size_t>(slave)] -
                                       mesh.nodes[static_cast<std::size_t>(master)]);
      cons.tie(2 * slave, 2 * master, off.x());
      cons.tie(2 * slave + 1, 2 * master + 1, off.y());
    }
  };
  tie_pairs(pairing.right_left);
  tie_pairs(pairing.top_bottom);
  cons.finalize();
  return cons;
}

void update_periodic_values(Constraints& cons, const TriMesh& mesh,
                            const PeriodicPairing& pairing, const Eigen::Matrix2d& F) {
  const Eigen::Matrix2d A = F - Eigen::Matrix2d::Identity();
  for (int c : pairing.corners) {
    const Eigen::Vector2d u = A * mesh.nodes[static_cast<std::size_t>(c)];
    cons.set_prescribed_value(2 * c, u.x());
    cons.set_prescribed_value(2 * c + 1, u.y());
  }
  auto update_pairs = [&](const std::vector<std::pair<int, int>>& pairs) {
    for (auto [slave, master] : pairs) {
      const Eigen::Vector2d off = A * (mesh.nodes[static_cast<std::size_t>(slave)] -
                                       mesh.nodes[static_cast<std::size_t>(master)]);
      cons.set_tie_offset(2 * slave, off.x());
      cons.set_tie_offset(2 * slave + 1, off.y());
    }
  };
  update_pairs(pairing.right_left);
  update_pairs(pairing.top_bottom);
}

SparseSolver::SparseSolver()
    : ldlt_(std::make_unique<Eigen::SimplicialLDLT<SpMat>>()) {}

void SparseSolver::factorize(const SpMat& K_red) {
  if (!analyzed_) {
    ldlt_->analyzePattern(K_red);
    analyzed_ = true;
  }
  ldlt_->factorize(K_red);
  if (ldlt_->info() != Eigen::Success)
    throw SingularSystemError("sparse factorization failed", -1);
}

Eigen::VectorXd SparseSolver::solve(const Eigen::VectorXd& rhs) const {
  return ldlt_->solve(rhs);
}

void add_edge_tractions(const TriMesh& mesh,
                        const std::vector<std::pair<int, int>>& edges,
                        const Eigen::Vector2d& traction, Eigen::VectorXd& f) {
  for (auto [a, b] : edges) {
    const double L = (mesh.nodes[static_cast<std::size_t>(a)] -
                      mesh.nodes[static_cast<std::size_t>(b)])
                         .norm();
    const Eigen::Vector2d half = 0.5 * L * traction;
    f[2 * a] += half.x();
    f[2 * a + 1] += half.y();
    f[2 * b] += half.x();
    f[2 * b + 1] += half.y();
  }
}

} // namespace asrfe2
