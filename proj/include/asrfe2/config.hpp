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
#include <string>

#include "asrfe2/macro.hpp"
#include "asrfe2/materials.hpp"
#include "asrfe2/meso.hpp"

namespace asrfe2 {

enum class Scenario { MesoFree, MesoLoaded, Fe2Free, Fe2Loaded };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// Flat `key = value` run configuration. Physics, geometry, schedule and seed
/// keys are mandatory in config files (no silent defaults); numerics and
/// output keys fall back to the documented defaults below. Unknown keys are
/// a hard error. Temperatures are stored in kelvin internally.
struct RunConfig {
  Scenario scenario = Scenario::MesoFree;

  // geometry
  double domain_size_mm = 0.0;   // square specimen / RVE edge
  double element_size_mm = 0.0;  // h
  double d_min_mm = 0.0;
  double d_max_mm = 0.0;
  double packing_fraction = 0.0;
  double asr_site_ratio = 0.0;
  int placement_max_attempts = 5000;
  int macro_cols = 2;            // macro squares per direction (fe2 scenarios)
  int macro_rows = 4;

  // materials
  double aggregate_E_pa = 0.0, aggregate_nu = 0.0;
  double aggregate_Gc_J_m2 = 0.0, aggregate_ft0_pa = 0.0;
  double mortar_E_pa = 0.0, mortar_nu = 0.0;
  double mortar_Gc_J_m2 = 0.0, mortar_ft0_pa = 0.0;
  double asr_product_E_pa = 0.0, asr_product_nu = 0.0;
  double weibull_k = 5.0, weibull_lambda_factor = 0.2;
  double crack_band_width_mm = 0.0;

  // reaction kinetics
  double asr_tau_lat_days = 0.0, asr_tau_ch_days = 0.0;
  double asr_U_C_K = 0.0, asr_U_L_K = 0.0;
  double asr_T0_K = 0.0;
  double asr_eps_inf = 0.0;

  // loading and schedule
  double load_pa = 0.0;
  double t_end_days = 0.0, dt_days = 0.0;
  double temperature_K = 0.0;

  // seeds
  std::uint64_t seed_geometry = 0, seed_strength = 0, seed_sites = 0;

  // numerics (optional keys)
  PlaneAssumption plane = PlaneAssumption::PlaneStress;
  bool classical_sla = false;
  double sla_reduction_factor = 2.0;
  int sla_cap_step = 10;
  double damage_max = 0.9999;
  int sla_pass_cap = 20000;
  double criterion_tolerance = 1e-6;
  int closure_iteration_cap = 5;
  double virtual_test_delta = 1e-4;
  double macro_tolerance = 1e-4;
  int macro_iteration_cap = 50;
  bool damage_enabled = true;
  unsigned workers = 0;

  // outputs (optional keys)
  int record_every = 1;
  std::string output_dir = "out";
  bool vtk_output = false;
  bool geometry_dump = false;
  int checkpoint_every = 0;

  PhaseMaterials phase_materials() const;
  SolverOptions solver_options() const;
  AsrLaw asr_law() const;
  Fe2Options fe2_options() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Scale presets: "desk" (35 mm, h = 1 mm, 45% packing, 1% site ratio) and
/// "paper" (70 mm, h = 0.5 mm, 70% packing, 0.1% site ratio). Overrides the
/// corresponding geometry keys of an already-parsed config.
void apply_profile(RunConfig& cfg, const std::string& profile);

/// Fully populated reference configuration (desk scale, free expansion) used
/// by tests and as a template for new run configs.
RunConfig default_config();

/// Serialize back to `key = value` text (all keys, full precision).
std::string config_to_text(const RunConfig& cfg);

} // namespace asrfe2
