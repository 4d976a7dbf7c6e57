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
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "asrfe2/geometry.hpp"

namespace asrfe2 {

struct IsotropicElastic {
  double E = 0.0;   // Pa
  double nu = 0.0;
  double mu = 0.0;  // Pa, E / (2 (1 + nu))

  static IsotropicElastic from_E_nu(double E, double nu);
};

struct FractureParams {
  double G_c = 0.0;                    // J/m^2
  double f_t0 = 0.0;                   // Pa, reference tensile strength
  double w_c_mm = 0.0;                 // crack band width, mm
  double weibull_k = 5.0;
  double weibull_lambda_factor = 0.2;  // scale as a fraction of f_t0
};

/// Sigmoidal reaction-extent kinetics with Arrhenius-shifted latency and
/// characteristic times.
struct AsrLaw {
  double tau_lat0_days = 0.0;  // latency time at T0
  double tau_ch0_days = 0.0;   // characteristic time at T0
  double U_C = 0.0;            // K, shifts the characteristic time
  double U_L = 0.0;            // K, shifts the latency time
  double T0_K = 0.0;
  double eps_inf = 0.0;        // asymptotic expansion strain
};

double characteristic_time(double T_K, const AsrLaw& law);
double latency_time(double T_K, const AsrLaw& law);

/// Reaction extent in [0, 1), zero at t = 0, saturating to 1.
double reaction_extent(double t_days, double T_K, const AsrLaw& law);

/// Stress-free expansion strain: eps_inf * zeta(t, T) * I.
Eigen::Matrix2d eigenstrain(double t_days, double T_K, const AsrLaw& law);

/// Shifted Weibull draw: f_t = 0.8 f_t0 + lambda (-ln(1-u))^(1/k),
/// lambda = lambda_factor * f_t0.
double sample_tensile_strength_from_u(double f_t0, double k, double lambda_factor,
                                      double u);
double sample_tensile_strength(double f_t0, double k, double lambda_factor,
                               std::mt19937_64& rng);

struct SlaParams {
  double a = 2.0;          // stiffness reduction factor per step
  int cap_step = 10;       // step at which damage jumps to d_max and freezes
  double d_max = 0.9999;
};

/// d = 1 - a^(-i) for i < cap_step, d_max from cap_step on.
double damage_value(int i, double a, int cap_step = 10, double d_max = 0.9999);

/// 2 G_c / (w_c f_t); w_c handed over in mm, converted to m internally.
double ultimate_strain(double G_c, double w_c_mm, double f_t);

/// Per-element saw-tooth envelope. eps_u_reg scales the nominal ultimate
/// strain so that the discrete tooth sequence dissipates exactly G_c/w_c
/// (the combined strength/strain regularization); E_t_reg is the matching
/// envelope tangent. Both fixed at initialization and reused for every step.
struct SawtoothEnvelope {
  double eps_u_reg = 0.0;
  double E_t_reg = 0.0;  // Pa
};

/// Energy dissipated by the full tooth sequence of an element with initial
/// modulus E, strength f_t and envelope ultimate strain eps_u (per unit
/// volume). The first drop happens at the elastic limit f_t / E.
double sawtooth_dissipation(double E, double f_t, double eps_u, const SlaParams& p);

/// Scale eps_u (bisection) so sawtooth_dissipation == 0.5 * f_t * eps_u_base.
SawtoothEnvelope calibrate_sawtooth(double E, double f_t, double eps_u_base,
                                    const SlaParams& p);

struct ElementState {
  Phase phase = Phase::Mortar;
  double f_t_initial = 0.0;   // Pa, sampled strength
  bool cracked = false;
  double crack_angle = 0.0;   // rad, normal of the crack plane; fixed at initiation
  int step = 0;               // reduction count i
  double damage = 0.0;
  double f_t_current = 0.0;   // Pa
  bool closed = false;
  double eps_u = 0.0;         // nominal ultimate strain
  SawtoothEnvelope envelope;  // regularized saw-tooth envelope
};

/// One saw-tooth reduction: increments the step, updates damage and the
/// current strength on the regularized envelope. Returns false (no-op) when
/// the element already sits at d_max.
bool sla_reduce(ElementState& state, const IsotropicElastic& base, const SlaParams& p);

/// Largest principal stress vs. the current strength. Returns the angle of
/// the major principal direction (the crack normal) when violated.
std::optional<double> check_failure(const Eigen::Matrix2d& sigma, double f_t_current,
                                    double tol = 1e-9);

enum class CrackMode { Open, Closed };
enum class PlaneAssumption { PlaneStress, PlaneStrain };

/// In-plane stiffness, Voigt [xx, yy, xy] with engineering shear strain.
/// Builds the three-dimensional orthotropic matrix in crack axes (axis 1 =
/// crack normal), condenses it to the plane assumption and rotates it by the
/// crack angle. Open: E1, nu12, nu13, mu12, mu13 scaled by (1-d). Closed:
/// Young's moduli and Poisson's ratios restored, shear moduli kept reduced.
Eigen::Matrix3d orthotropic_stiffness(const ElementState& state,
                                      const IsotropicElastic& base, CrackMode mode,
                                      PlaneAssumption plane);

/// Isotropic special case (also what orthotropic_stiffness yields at d = 0).
Eigen::Matrix3d isotropic_stiffness(const IsotropicElastic& mat, PlaneAssumption plane);

/// Closed iff the normal stress across the crack plane is negative;
/// exactly zero counts as Open.
CrackMode closure_check(const ElementState& state, const Eigen::Matrix2d& sigma);

/// Rotate a Voigt stiffness matrix whose material axis 1 sits at `angle`
/// from the global x-axis into global coordinates.
Eigen::Matrix3d rotate_stiffness(const Eigen::Matrix3d& C_material, double angle);

} // namespace asrfe2
