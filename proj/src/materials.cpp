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

#include "asrfe2/materials.hpp"

#include <cmath>
#include <numbers>

#include "asrfe2/errors.hpp"
#include "asrfe2/rng.hpp"

namespace asrfe2 {

IsotropicElastic IsotropicElastic::from_E_nu(double E, double nu) {
  if (!(E > 0.0)) throw ConstitutiveError("Young's modulus must be positive");
  if (!(nu >= 0.0) || !(nu < 0.5))
    throw ConstitutiveError("Poisson's ratio must be in [0, 0.5)");
  return IsotropicElastic{E, nu, E / (2.0 * (1.0 + nu))};
}

double characteristic_time(double T_K, const AsrLaw& law) {
  return law.tau_ch0_days * std::exp(law.U_C * (1.0 / T_K - 1.0 / law.T0_K));
}

double latency_time(double T_K, const AsrLaw& law) {
  return law.tau_lat0_days * std::exp(law.U_L * (1.0 / T_K - 1.0 / law.T0_K));
}

double reaction_extent(double t_days, double T_K, const AsrLaw& law) {
  if (t_days <= 0.0) return 0.0;
  const double tau_ch = characteristic_time(T_K, law);
  const double tau_lat = latency_time(T_K, law);
  const double num = 1.0 - std::exp(-t_days / tau_ch);
  const double den = 1.0 + std::exp(-t_days / tau_ch + tau_lat / tau_ch);
  return num / den;
}

Eigen::Matrix2d eigenstrain(double t_days, double T_K, const AsrLaw& law) {
  return law.eps_inf * reaction_extent(t_days, T_K, law) * Eigen::Matrix2d::Identity();
}

double sample_tensile_strength_from_u(double f_t0, double k, double lambda_factor,
                                      double u) {
  const double lambda = lambda_factor * f_t0;
  return 0.8 * f_t0 + lambda * std::pow(-std::log1p(-u), 1.0 / k);
}

double sample_tensile_strength(double f_t0, double k, double lambda_factor,
                               std::mt19937_64& rng) {
  return sample_tensile_strength_from_u(f_t0, k, lambda_factor, uniform01(rng));
}

double damage_value(int i, double a, int cap_step, double d_max) {
  if (i <= 0) return 0.0;
  if (i >= cap_step) return d_max;
  return 1.0 - std::pow(a, -static_cast<double>(i));
}

double ultimate_strain(double G_c, double w_c_mm, double f_t) {
  if (!(G_c > 0.0) || !(w_c_mm > 0.0) || !(f_t > 0.0))
    throw ConstitutiveError("ultimate_strain: all arguments must be positive");
  return 2.0 * G_c / (w_c_mm * 1e-3 * f_t);
}

double sawtooth_dissipation(double E, double f_t, double eps_u, const SlaParams& p) {
  const double E_t = f_t / (eps_u - f_t / E);
  if (!(E_t > 0.0))
    throw ConstitutiveError("saw-tooth envelope needs eps_u > f_t / E");
  double dissipated = 0.0;
  for (int i = 0; i < p.cap_step; ++i) {
    const double E_i = E * (1.0 - damage_value(i, p.a, p.cap_step, p.d_max));
    const double E_n = E * (1.0 - damage_value(i + 1, p.a, p.cap_step, p.d_max));
    const double eps_i = (i == 0) ? f_t / E : eps_u * E_t / (E_i + E_t);
    dissipated += 0.5 * (E_i - E_n) * eps_i * eps_i;
  }
  return dissipated;
}

SawtoothEnvelope calibrate_sawtooth(double E, double f_t, double eps_u_base,
                                    const SlaParams& p) {
  const double target = 0.5 * f_t * eps_u_base;  // == G_c / w_c by construction
  double lo = 1.0, hi = 16.0;
  if (sawtooth_dissipation(E, f_t, hi * eps_u_base, p) < target)
    throw ConstitutiveError("saw-tooth calibration out of range");
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sawtooth_dissipation(E, f_t, mid * eps_u_base, p) < target)
      lo = mid;
    else
      hi = mid;
  }
  SawtoothEnvelope env;
  env.eps_u_reg = 0.5 * (lo + hi) * eps_u_base;
  env.E_t_reg = f_t / (env.eps_u_reg - f_t / E);
  return env;
}

bool sla_reduce(ElementState& state, const IsotropicElastic& base, const SlaParams& p) {
  if (state.step >= p.cap_step) return false;
  state.step += 1;
  state.damage = damage_value(state.step, p.a, p.cap_step, p.d_max);
  const double E_i = base.E * (1.0 - state.damage);
  const double E_t = state.envelope.E_t_reg;
  state.f_t_current = state.envelope.eps_u_reg * E_i * E_t / (E_i + E_t);
  return true;
}

std::optional<double> check_failure(const Eigen::Matrix2d& sigma, double f_t_current,
                                    double tol) {
  const double mean = 0.5 * (sigma(0, 0) + sigma(1, 1));
  const double dev = 0.5 * (sigma(0, 0) - sigma(1, 1));
  const double radius = std::hypot(dev, sigma(0, 1));
  const double s1 = mean + radius;
  if (s1 <= f_t_current * (1.0 + tol)) return std::nullopt;
  double angle = 0.5 * std::atan2(2.0 * sigma(0, 1), sigma(0, 0) - sigma(1, 1));
  if (angle < 0.0) angle += std::numbers::pi;  // report in [0, pi)
  return angle;
}

Eigen::Matrix3d rotate_stiffness(const Eigen::Matrix3d& C_material, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // Strain transformation global -> material for [exx, eyy, gxy] Voigt.
  Eigen::Matrix3d Te;
  Te << c * c, s * s, c * s,
        s * s, c * c, -c * s,
        -2.0 * c * s, 2.0 * c * s, c * c - s * s;
  return Te.transpose() * C_material * Te;
}

namespace {

Eigen::Matrix3d condense(double c11, double c22, double c33, double c12, double c13,
                         double c23, double c66, PlaneAssumption plane) {
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  if (plane == PlaneAssumption::PlaneStress) {
    // Static condensation of the out-of-plane normal component.
    C(0, 0) = c11 - c13 * c13 / c33;
    C(1, 1) = c22 - c23 * c23 / c33;
    C(0, 1) = C(1, 0) = c12 - c13 * c23 / c33;
  } else {
    C(0, 0) = c11;
    C(1, 1) = c22;
    C(0, 1) = C(1, 0) = c12;
  }
  C(2, 2) = c66;
  return C;
}

} // namespace

Eigen::Matrix3d isotropic_stiffness(const IsotropicElastic& mat, PlaneAssumption plane) {
  ElementState pristine;
  return orthotropic_stiffness(pristine, mat, CrackMode::Open, plane);
}

Eigen::Matrix3d orthotropic_stiffness(const ElementState& state,
                                      const IsotropicElastic& base, CrackMode mode,
                                      PlaneAssumption plane) {
  const double E = base.E;
  const double nu = base.nu;
  const double mu = base.mu;
  const double d = state.cracked ? state.damage : 0.0;

  // Crack axes: 1 = crack normal (in-plane), 2 = in-plane tangent, 3 = out of
  // plane. Directions 2 and 3 keep their pristine constants.
  double E1 = E, nu12 = nu, nu13 = nu, nu21 = nu, nu31 = nu;
  double mu12 = mu;
  const double E2 = E, E3 = E, nu23 = nu, nu32 = nu;

  if (d > 0.0) {
    if (mode == CrackMode::Open) {
      E1 = E * (1.0 - d);
      nu12 = nu * (1.0 - d);
      nu13 = nu * (1.0 - d);
      nu21 = nu12 * E2 / E1;  // symmetry of the compliance couplings
      nu31 = nu13 * E3 / E1;
      mu12 = mu * (1.0 - d);
    } else {
      mu12 = mu * (1.0 - d);  // normal moduli and Poisson's ratios recovered
    }
  }

  const double den = 1.0 - nu12 * nu21 - nu23 * nu32 - nu31 * nu13 -
                     2.0 * nu21 * nu32 * nu13;
  if (!(den > 0.0))
    throw ConstitutiveError("orthotropic stiffness: inadmissible Poisson couplings");
  const double g = 1.0 / den;

  const double c11 = E1 * (1.0 - nu23 * nu32) * g;
  const double c22 = E2 * (1.0 - nu13 * nu31) * g;
  const double c33 = E3 * (1.0 - nu12 * nu21) * g;
  const double c12 = E1 * (nu21 + nu31 * nu23) * g;
  const double c13 = E1 * (nu31 + nu21 * nu32) * g;
  const double c23 = E2 * (nu32 + nu12 * nu31) * g;
  const double c66 = mu12;  // in-plane shear

  const Eigen::Matrix3d Cp = condense(c11, c22, c33, c12, c13, c23, c66, plane);
  if (!state.cracked || state.crack_angle == 0.0) return Cp;
  return rotate_stiffness(Cp, state.crack_angle);
}

CrackMode closure_check(const ElementState& state, const Eigen::Matrix2d& sigma) {
  const Eigen::Vector2d n(std::cos(state.crack_angle), std::sin(state.crack_angle));
  const double sigma_n = n.dot(sigma * n);
  return sigma_n < 0.0 ? CrackMode::Closed : CrackMode::Open;
}

} // namespace asrfe2
