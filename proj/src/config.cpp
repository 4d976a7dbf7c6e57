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

#include "asrfe2/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "asrfe2/errors.hpp"

namespace asrfe2 {

namespace {

constexpr double kKelvinOffset = 273.15;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double_value(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' has a non-numeric value '" + v + "'");
  return x;
}

bool parse_bool_value(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: key '" + key + "' must be true/false");
}

} // namespace

Scenario scenario_from_string(const std::string& s) {
  if (s == "meso_free") return Scenario::MesoFree;
  if (s == "meso_loaded") return Scenario::MesoLoaded;
  if (s == "fe2_free") return Scenario::Fe2Free;
  if (s == "fe2_loaded") return Scenario::Fe2Loaded;
  throw ConfigError("config: unknown scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::MesoFree: return "meso_free";
    case Scenario::MesoLoaded: return "meso_loaded";
    case Scenario::Fe2Free: return "fe2_free";
    case Scenario::Fe2Loaded: return "fe2_loaded";
  }
  return "meso_free";
}

PhaseMaterials RunConfig::phase_materials() const {
  PhaseMaterials m;
  m.mortar = IsotropicElastic::from_E_nu(mortar_E_pa, mortar_nu);
  m.aggregate = IsotropicElastic::from_E_nu(aggregate_E_pa, aggregate_nu);
  m.asr_product = IsotropicElastic::from_E_nu(asr_product_E_pa, asr_product_nu);
  m.mortar_fracture = FractureParams{mortar_Gc_J_m2, mortar_ft0_pa,
                                     crack_band_width_mm, weibull_k,
                                     weibull_lambda_factor};
  m.aggregate_fracture = FractureParams{aggregate_Gc_J_m2, aggregate_ft0_pa,
                                        crack_band_width_mm, weibull_k,
                                        weibull_lambda_factor};
  return m;
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.sla = SlaParams{sla_reduction_factor, sla_cap_step, damage_max};
  o.criterion_tol = criterion_tolerance;
  o.pass_cap = sla_pass_cap;
  o.closure_cap = closure_iteration_cap;
  o.classical_sla = classical_sla;
  o.damage_enabled = damage_enabled;
  o.plane = plane;
  return o;
}

AsrLaw RunConfig::asr_law() const {
  return AsrLaw{asr_tau_lat_days, asr_tau_ch_days, asr_U_C_K, asr_U_L_K,
                asr_T0_K, asr_eps_inf};
}

Fe2Options RunConfig::fe2_options() const {
  Fe2Options o;
  o.tolerance = macro_tolerance;
  o.iteration_cap = macro_iteration_cap;
  o.virtual_test_delta = virtual_test_delta;
  o.workers = workers;
  return o;
}

namespace {

struct KeyTable {
  std::map<std::string, std::function<void(RunConfig&, const std::string&)>> setters;
  std::vector<std::string> required;

  void req(const std::string& key,
           std::function<void(RunConfig&, const std::string&)> fn) {
    setters[key] = std::move(fn);
    required.push_back(key);
  }
  void opt(const std::string& key,
           std::function<void(RunConfig&, const std::string&)> fn) {
    setters[key] = std::move(fn);
  }
};

const KeyTable& key_table() {
  static const KeyTable table = [] {
    KeyTable t;
    auto dbl = [](double RunConfig::*field) {
      return [field](RunConfig& c, const std::string& v) {
        c.*field = parse_double_value("", v);
      };
    };
    auto integer = [](int RunConfig::*field) {
      return [field](RunConfig& c, const std::string& v) {
        c.*field = static_cast<int>(parse_double_value("", v));
      };
    };
    auto seed = [](std::uint64_t RunConfig::*field) {
      return [field](RunConfig& c, const std::string& v) {
        c.*field = std::strtoull(v.c_str(), nullptr, 10);
      };
    };
    auto boolean = [](bool RunConfig::*field) {
      return [field](RunConfig& c, const std::string& v) {
        c.*field = parse_bool_value("", v);
      };
    };

    t.req("scenario", [](RunConfig& c, const std::string& v) {
      c.scenario = scenario_from_string(v);
    });
    t.req("domain_size_mm", dbl(&RunConfig::domain_size_mm));
    t.req("element_size_mm", dbl(&RunConfig::element_size_mm));
    t.req("d_min_mm", dbl(&RunConfig::d_min_mm));
    t.req("d_max_mm", dbl(&RunConfig::d_max_mm));
    t.req("packing_fraction", dbl(&RunConfig::packing_fraction));
    t.req("asr_site_ratio", dbl(&RunConfig::asr_site_ratio));
    t.opt("placement_max_attempts", integer(&RunConfig::placement_max_attempts));
    t.req("macro_cols", integer(&RunConfig::macro_cols));
    t.req("macro_rows", integer(&RunConfig::macro_rows));

    t.req("aggregate_E_pa", dbl(&RunConfig::aggregate_E_pa));
    t.req("aggregate_nu", dbl(&RunConfig::aggregate_nu));
    t.req("aggregate_Gc_J_m2", dbl(&RunConfig::aggregate_Gc_J_m2));
    t.req("aggregate_ft0_pa", dbl(&RunConfig::aggregate_ft0_pa));
    t.req("mortar_E_pa", dbl(&RunConfig::mortar_E_pa));
    t.req("mortar_nu", dbl(&RunConfig::mortar_nu));
    t.req("mortar_Gc_J_m2", dbl(&RunConfig::mortar_Gc_J_m2));
    t.req("mortar_ft0_pa", dbl(&RunConfig::mortar_ft0_pa));
    t.req("asr_product_E_pa", dbl(&RunConfig::asr_product_E_pa));
    t.req("asr_product_nu", dbl(&RunConfig::asr_product_nu));
    t.req("weibull_k", dbl(&RunConfig::weibull_k));
    t.req("weibull_lambda_factor", dbl(&RunConfig::weibull_lambda_factor));
    t.req("crack_band_width_mm", dbl(&RunConfig::crack_band_width_mm));

    t.req("asr_tau_lat_days", dbl(&RunConfig::asr_tau_lat_days));
    t.req("asr_tau_ch_days", dbl(&RunConfig::asr_tau_ch_days));
    t.req("asr_U_C_K", dbl(&RunConfig::asr_U_C_K));
    t.req("asr_U_L_K", dbl(&RunConfig::asr_U_L_K));
    t.req("asr_T0_C", [](RunConfig& c, const std::string& v) {
      c.asr_T0_K = parse_double_value("asr_T0_C", v) + kKelvinOffset;
    });
    t.req("asr_eps_inf", dbl(&RunConfig::asr_eps_inf));

    t.req("load_pa", dbl(&RunConfig::load_pa));
    t.req("t_end_days", dbl(&RunConfig::t_end_days));
    t.req("dt_days", dbl(&RunConfig::dt_days));
    t.req("temperature_C", [](RunConfig& c, const std::string& v) {
      c.temperature_K = parse_double_value("temperature_C", v) + kKelvinOffset;
    });

    t.req("seed_geometry", seed(&RunConfig::seed_geometry));
    t.req("seed_strength", seed(&RunConfig::seed_strength));
    t.req("seed_sites", seed(&RunConfig::seed_sites));

    t.opt("plane_assumption", [](RunConfig& c, const std::string& v) {
      if (v == "plane_stress") c.plane = PlaneAssumption::PlaneStress;
      else if (v == "plane_strain") c.plane = PlaneAssumption::PlaneStrain;
      else throw ConfigError("config: plane_assumption must be plane_stress or plane_strain");
    });
    t.opt("sla_mode", [](RunConfig& c, const std::string& v) {
      if (v == "modified") c.classical_sla = false;
      else if (v == "classical") c.classical_sla = true;
      else throw ConfigError("config: sla_mode must be modified or classical");
    });
    t.opt("sla_reduction_factor", dbl(&RunConfig::sla_reduction_factor));
    t.opt("sla_cap_step", integer(&RunConfig::sla_cap_step));
    t.opt("damage_max", dbl(&RunConfig::damage_max));
    t.opt("sla_pass_cap", integer(&RunConfig::sla_pass_cap));
    t.opt("criterion_tolerance", dbl(&RunConfig::criterion_tolerance));
    t.opt("closure_iteration_cap", integer(&RunConfig::closure_iteration_cap));
    t.opt("virtual_test_delta", dbl(&RunConfig::virtual_test_delta));
    t.opt("macro_tolerance", dbl(&RunConfig::macro_tolerance));
    t.opt("macro_iteration_cap", integer(&RunConfig::macro_iteration_cap));
    t.opt("damage_enabled", boolean(&RunConfig::damage_enabled));
    t.opt("workers", [](RunConfig& c, const std::string& v) {
      c.workers = static_cast<unsigned>(std::strtoul(v.c_str(), nullptr, 10));
    });
    t.opt("record_every", integer(&RunConfig::record_every));
    t.opt("output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; });
    t.opt("vtk_output", boolean(&RunConfig::vtk_output));
    t.opt("geometry_dump", boolean(&RunConfig::geometry_dump));
    t.opt("checkpoint_every", integer(&RunConfig::checkpoint_every));
    return t;
  }();
  return table;
}

} // namespace

RunConfig parse_config(const std::string& text) {
  const KeyTable& table = key_table();
  RunConfig cfg;
  std::map<std::string, bool> seen;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table.setters.find(key);
    if (it == table.setters.end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    if (seen[key])
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    seen[key] = true;
    try {
      it->second(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::string missing;
  for (const auto& key : table.required)
    if (!seen[key]) missing += (missing.empty() ? "" : ", ") + key;
  if (!missing.empty())
    throw ConfigError("config: missing required keys: " + missing);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_profile(RunConfig& cfg, const std::string& profile) {
  if (profile == "desk") {
    cfg.domain_size_mm = 35.0;
    cfg.element_size_mm = 1.0;
    cfg.crack_band_width_mm = 1.0;
    cfg.packing_fraction = 0.45;
    cfg.asr_site_ratio = 0.01;
  } else if (profile == "paper") {
    cfg.domain_size_mm = 70.0;
    cfg.element_size_mm = 0.5;
    cfg.crack_band_width_mm = 0.5;
    cfg.packing_fraction = 0.70;
    cfg.asr_site_ratio = 0.001;
  } else {
    throw ConfigError("unknown profile '" + profile + "' (expected desk or paper)");
  }
}

RunConfig default_config() {
  RunConfig c;
  c.scenario = Scenario::MesoFree;
  c.domain_size_mm = 35.0;
  c.element_size_mm = 1.0;
  c.d_min_mm = 1.0;
  c.d_max_mm = 16.0;
  c.packing_fraction = 0.45;
  c.asr_site_ratio = 0.01;
  c.macro_cols = 2;
  c.macro_rows = 4;
  c.aggregate_E_pa = 59e9;
  c.aggregate_nu = 0.3;
  c.aggregate_Gc_J_m2 = 160.0;
  c.aggregate_ft0_pa = 10e6;
  c.mortar_E_pa = 12e9;
  c.mortar_nu = 0.3;
  c.mortar_Gc_J_m2 = 60.0;
  c.mortar_ft0_pa = 3e6;
  c.asr_product_E_pa = 11e9;
  c.asr_product_nu = 0.18;
  c.weibull_k = 5.0;
  c.weibull_lambda_factor = 0.2;
  c.crack_band_width_mm = 1.0;
  c.asr_tau_lat_days = 30.0;
  c.asr_tau_ch_days = 60.0;
  c.asr_U_C_K = 5400.0;
  c.asr_U_L_K = 9700.0;
  c.asr_T0_K = 38.0 + kKelvinOffset;
  c.asr_eps_inf = 0.065;
  c.load_pa = 10e6;
  c.t_end_days = 450.0;
  c.dt_days = 0.5;
  c.temperature_K = 38.0 + kKelvinOffset;
  c.seed_geometry = 1001;
  c.seed_strength = 2002;
  c.seed_sites = 3003;
  c.record_every = 5;
  return c;
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  char buf[160];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s = %.17g\n", key, v);
    out << buf;
  };
  out << "scenario = " << to_string(c.scenario) << "\n";
  put("domain_size_mm", c.domain_size_mm);
  put("element_size_mm", c.element_size_mm);
  put("d_min_mm", c.d_min_mm);
  put("d_max_mm", c.d_max_mm);
  put("packing_fraction", c.packing_fraction);
  put("asr_site_ratio", c.asr_site_ratio);
  out << "placement_max_attempts = " << c.placement_max_attempts << "\n";
  out << "macro_cols = " << c.macro_cols << "\n";
  out << "macro_rows = " << c.macro_rows << "\n";
  put("aggregate_E_pa", c.aggregate_E_pa);
  put("aggregate_nu", c.aggregate_nu);
  put("aggregate_Gc_J_m2", c.aggregate_Gc_J_m2);
  put("aggregate_ft0_pa", c.aggregate_ft0_pa);
  put("mortar_E_pa", c.mortar_E_pa);
  put("mortar_nu", c.mortar_nu);
  put("mortar_Gc_J_m2", c.mortar_Gc_J_m2);
  put("mortar_ft0_pa", c.mortar_ft0_pa);
  put("asr_product_E_pa", c.asr_product_E_pa);
  put("asr_product_nu", c.asr_product_nu);
  put("weibull_k", c.weibull_k);
  put("weibull_lambda_factor", c.weibull_lambda_factor);
  put("crack_band_width_mm", c.crack_band_width_mm);
  put("asr_tau_lat_days", c.asr_tau_lat_days);
  put("asr_tau_ch_days", c.asr_tau_ch_days);
  put("asr_U_C_K", c.asr_U_C_K);
  put("asr_U_L_K", c.asr_U_L_K);
  put("asr_T0_C", c.asr_T0_K - kKelvinOffset);
  put("asr_eps_inf", c.asr_eps_inf);
  put("load_pa", c.load_pa);
  put("t_end_days", c.t_end_days);
  put("dt_days", c.dt_days);
  put("temperature_C", c.temperature_K - kKelvinOffset);
  out << "seed_geometry = " << c.seed_geometry << "\n";
  out << "seed_strength = " << c.seed_strength << "\n";
  out << "seed_sites = " << c.seed_sites << "\n";
  out << "plane_assumption = "
      << (c.plane == PlaneAssumption::PlaneStress ? "plane_stress" : "plane_strain")
      << "\n";
  out << "sla_mode = " << (c.classical_sla ? "classical" : "modified") << "\n";
  put("sla_reduction_factor", c.sla_reduction_factor);
  out << "sla_cap_step = " << c.sla_cap_step << "\n";
  put("damage_max", c.damage_max);
  out << "sla_pass_cap = " << c.sla_pass_cap << "\n";
  put("criterion_tolerance", c.criterion_tolerance);
  out << "closure_iteration_cap = " << c.closure_iteration_cap << "\n";
  put("virtual_test_delta", c.virtual_test_delta);
  put("macro_tolerance", c.macro_tolerance);
  out << "macro_iteration_cap = " << c.macro_iteration_cap << "\n";
  out << "damage_enabled = " << (c.damage_enabled ? "true" : "false") << "\n";
  out << "workers = " << c.workers << "\n";
  out << "record_every = " << c.record_every << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "vtk_output = " << (c.vtk_output ? "true" : "false") << "\n";
  out << "geometry_dump = " << (c.geometry_dump ? "true" : "false") << "\n";
  out << "checkpoint_every = " << c.checkpoint_every << "\n";
  return out.str();
}

} // namespace asrfe2
