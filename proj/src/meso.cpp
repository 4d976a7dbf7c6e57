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

#include "asrfe2/meso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asrfe2/errors.hpp"
#include "asrfe2/rng.hpp"

namespace asrfe2 {

int RveProblem::damaged_count() const {
  int n = 0;
  for (const auto& s : states) n += (s.step > 0);
  return n;
}

double RveProblem::phase_area(Phase p) const {
  double a = 0.0;
  for (int e = 0; e < num_elements(); ++e)
    if (phases[static_cast<std::size_t>(e)] == p)
      a += geometry[static_cast<std::size_t>(e)].area;
  return a;
}

RveProblem make_rve(TriMesh mesh, std::vector<Phase> phases,
                    const PhaseMaterials& materials, const SolverOptions& options,
                    std::uint64_t strength_seed, bool periodic) {
  RveProblem rve;
  rve.mesh = std::move(mesh);
  rve.phases = std::move(phases);
  rve.materials = materials;
  rve.options = options;
  rve.geometry = precompute_element_geometry(rve.mesh);
  if (periodic) rve.pairing = find_periodic_pairs(rve.mesh);

  std::mt19937_64 rng(strength_seed);
  rve.states.resize(static_cast<std::size_t>(rve.num_elements()));
  for (int e = 0; e < rve.num_elements(); ++e) {
    ElementState& st = rve.states[static_cast<std::size_t>(e)];
    st.phase = rve.phases[static_cast<std::size_t>(e)];
    if (st.phase == Phase::AsrSite) continue;  // reactive sites stay elastic
    const FractureParams& fr = materials.fracture(st.phase);
    const IsotropicElastic& el = materials.elastic(st.phase);
    st.f_t_initial = sample_tensile_strength(fr.f_t0, fr.weibull_k,
                                             fr.weibull_lambda_factor, rng);
    st.f_t_current = st.f_t_initial;
    st.eps_u = ultimate_strain(fr.G_c, fr.w_c_mm, st.f_t_initial);
    st.envelope = calibrate_sawtooth(el.E, st.f_t_initial, st.eps_u, options.sla);
  }
  return rve;
}

Eigen::Matrix3d element_stiffness(const RveProblem& rve, int e) {
  const Phase phase = rve.phases[static_cast<std::size_t>(e)];
  const ElementState& st = rve.states[static_cast<std::size_t>(e)];
  const IsotropicElastic& el = rve.materials.elastic(phase);
  if (phase == Phase::AsrSite)
    return isotropic_stiffness(el, rve.options.plane);
  const CrackMode mode = st.closed ? CrackMode::Closed : CrackMode::Open;
  return orthotropic_stiffness(st, el, mode, rve.options.plane);
}

Eigen::Vector3d element_eigenstrain(const RveProblem& rve, int e) {
  const bool active = rve.eigenstrain_everywhere ||
                      rve.phases[static_cast<std::size_t>(e)] == Phase::AsrSite;
  if (!active) return Eigen::Vector3d::Zero();
  const Eigen::Matrix2d& eps = rve.eigen_level;
  return {eps(0, 0), eps(1, 1), 2.0 * eps(0, 1)};
}

RveSystem::RveSystem(RveProblem& rve, Constraints cons, Eigen::VectorXd f_ext)
    : rve_(&rve), cons_(std::move(cons)), f_ext_(std::move(f_ext)) {
  if (!cons_.finalized()) throw MeshError("RveSystem: constraints not finalized");
  if (f_ext_.size() == 0) f_ext_ = Eigen::VectorXd::Zero(rve.n_dofs());
  C_.resize(static_cast<std::size_t>(rve.num_elements()));
}

RveSystem RveSystem::periodic(RveProblem& rve, const Eigen::Matrix2d& F) {
  RveSystem sys(rve, make_periodic_constraints(rve.mesh, rve.pairing, F));
  sys.F_ = F;
  sys.is_periodic_ = true;
  return sys;
}

void RveSystem::set_deformation(const Eigen::Matrix2d& F) {
  if (!is_periodic_) throw MeshError("set_deformation on a non-periodic system");
  F_ = F;
  update_periodic_values(cons_, rve_->mesh, rve_->pairing, F);
}

void RveSystem::assemble_(bool with_eigen_load) {
  const int n = rve_->num_elements();
  with_eigen_ = with_eigen_load;
  std::vector<Eigen::Vector3d> eig(static_cast<std::size_t>(n), Eigen::Vector3d::Zero());
  for (int e = 0; e < n; ++e) {
    C_[static_cast<std::size_t>(e)] = element_stiffness(*rve_, e);
    if (with_eigen_load) eig[static_cast<std::size_t>(e)] = element_eigenstrain(*rve_, e);
  }
  K_ = assemble_stiffness(rve_->geometry, C_, rve_->n_dofs());
  f_eig_ = assemble_eigenstrain_load(rve_->geometry, C_, eig, rve_->n_dofs());
}

MesoSolution RveSystem::solve_assembled_() {
  MesoSolution sol;
  const Eigen::VectorXd f = f_ext_ + f_eig_;
  if (cons_.n_free() > 0) {
    const SpMat K_red = cons_.reduce_matrix(K_);
    const Eigen::VectorXd f_red = cons_.reduce_rhs(K_, f);
    try {
      solver_.factorize(K_red);
    } catch (const SingularSystemError&) {
      int worst = 0;
      for (int e = 0; e < rve_->num_elements(); ++e)
        if (rve_->states[static_cast<std::size_t>(e)].damage >
            rve_->states[static_cast<std::size_t>(worst)].damage)
          worst = e;
      throw SingularSystemError(
          "meso system factorization failed; most damaged element " +
              std::to_string(worst),
          worst);
    }
    sol.u = cons_.expand(solver_.solve(f_red));
  } else {
    sol.u = cons_.g();
  }
  recover_fields_(sol);
  return sol;
}

void RveSystem::recover_fields_(MesoSolution& sol) const {
  const int n = rve_->num_elements();
  sol.strain.resize(static_cast<std::size_t>(n));
  sol.stress.resize(static_cast<std::size_t>(n));
  Eigen::Matrix<double, 6, 1> ue;
  for (int e = 0; e < n; ++e) {
    const ElementGeometry& g = rve_->geometry[static_cast<std::size_t>(e)];
    for (int i = 0; i < 6; ++i) ue(i) = sol.u[g.dofs[static_cast<std::size_t>(i)]];
    const Eigen::Vector3d eps = g.B * ue;
    sol.strain[static_cast<std::size_t>(e)] = eps;
    // A solve that omits the eigenstrain load treats the material as purely
    // elastic; the recovered stress must match that assumption.
    sol.stress[static_cast<std::size_t>(e)] =
        with_eigen_ ? Eigen::Vector3d(C_[static_cast<std::size_t>(e)] *
                                      (eps - element_eigenstrain(*rve_, e)))
                    : Eigen::Vector3d(C_[static_cast<std::size_t>(e)] * eps);
  }
}

MesoSolution RveSystem::solve_elastic(bool with_eigen_load) {
  assemble_(with_eigen_load);
  return solve_assembled_();
}

int RveSystem::update_closure_flags_(const MesoSolution& sol) {
  int flips = 0;
  for (int e = 0; e < rve_->num_elements(); ++e) {
    ElementState& st = rve_->states[static_cast<std::size_t>(e)];
    if (!st.cracked) continue;
    const Eigen::Vector3d& s = sol.stress[static_cast<std::size_t>(e)];
    Eigen::Matrix2d sigma;
    sigma << s(0), s(2), s(2), s(1);
    const bool closed = closure_check(st, sigma) == CrackMode::Closed;
    if (closed != st.closed) {
      st.closed = closed;
      ++flips;
    }
  }
  return flips;
}

int RveSystem::closure_fixed_point_(MesoSolution& sol, bool with_eigen_load,
                                    int* cap_hits) {
  int iterations = 0;
  for (int it = 0; it < rve_->options.closure_cap; ++it) {
    if (update_closure_flags_(sol) == 0) return iterations;
    ++iterations;
    assemble_(with_eigen_load);
    sol = solve_assembled_();
  }
  // Cap reached: keep the flags of the last resolve, count the event.
  int mismatches = 0;
  for (int e = 0; e < rve_->num_elements(); ++e) {
    const ElementState& st = rve_->states[static_cast<std::size_t>(e)];
    if (!st.cracked) continue;
    const Eigen::Vector3d& s = sol.stress[static_cast<std::size_t>(e)];
    Eigen::Matrix2d sigma;
    sigma << s(0), s(2), s(2), s(1);
    mismatches += ((closure_check(st, sigma) == CrackMode::Closed) != st.closed);
  }
  if (mismatches > 0 && cap_hits) ++(*cap_hits);
  return iterations;
}

MesoSolution RveSystem::solve_with_closure(bool with_eigen_load) {
  MesoSolution sol = solve_elastic(with_eigen_load);
  int cap_hits = 0;
  sol.closure_iterations = closure_fixed_point_(sol, with_eigen_load, &cap_hits);
  sol.closure_cap_hits = cap_hits;
  return sol;
}

MesoSolution RveSystem::run_damage_loop() {
  const SolverOptions& opt = rve_->options;
  MesoSolution sol = solve_elastic(true);
  int closure_total = 0;
  int cap_hits = 0;
  closure_total += closure_fixed_point_(sol, true, &cap_hits);
  if (!opt.damage_enabled) {
    sol.closure_iterations = closure_total;
    sol.closure_cap_hits = cap_hits;
    return sol;
  }

  int passes = 0;
  while (true) {
    // Elements violating the principal-stress criterion, ascending index.
    // Elements frozen at d_max cannot change and are skipped.
    std::vector<int> violating;
    double worst_ratio = 1.0;
    int worst = -1;
    for (int e = 0; e < rve_->num_elements(); ++e) {
      ElementState& st = rve_->states[static_cast<std::size_t>(e)];
      if (rve_->phases[static_cast<std::size_t>(e)] == Phase::AsrSite ||
          st.step >= opt.sla.cap_step)
        continue;
      const Eigen::Vector3d& s = sol.stress[static_cast<std::size_t>(e)];
      Eigen::Matrix2d sigma;
      sigma << s(0), s(2), s(2), s(1);
      const auto angle = check_failure(sigma, st.f_t_current, opt.criterion_tol);
      if (!angle) continue;
      violating.push_back(e);
      const double mean = 0.5 * (sigma(0, 0) + sigma(1, 1));
      const double radius = std::hypot(0.5 * (sigma(0, 0) - sigma(1, 1)), sigma(0, 1));
      const double ratio = (mean + radius) / st.f_t_current;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = e;
      }
      if (!st.cracked) {
        st.cracked = true;
        st.crack_angle = *angle;  // fixed for the rest of the simulation
      }
    }
    if (violating.empty()) break;

    if (opt.classical_sla && worst >= 0) violating.assign(1, worst);
    for (int e : violating)
      sla_reduce(rve_->states[static_cast<std::size_t>(e)],
                 rve_->materials.elastic(rve_->phases[static_cast<std::size_t>(e)]),
                 opt.sla);

    ++passes;
    if (passes > opt.pass_cap)
      throw NonConvergenceError(
          "damage loop exceeded " + std::to_string(opt.pass_cap) + " passes (" +
          std::to_string(violating.size()) + " elements still violating, worst ratio " +
          std::to_string(worst_ratio) + ")");

    sol = solve_elastic(true);
    closure_total += closure_fixed_point_(sol, true, &cap_hits);
  }

  sol.passes = passes;
  sol.closure_iterations = closure_total;
  sol.closure_cap_hits = cap_hits;
  return sol;
}

Eigen::VectorXd RveSystem::internal_force(const MesoSolution& sol) const {
  return assemble_internal_force(rve_->geometry, sol.stress, rve_->n_dofs());
}

} // namespace asrfe2
