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

#include <memory>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asrfe2/config.hpp"
#include "asrfe2/errors.hpp"
#include "asrfe2/homogenization.hpp"
#include "asrfe2/materials.hpp"
#include "asrfe2/meso.hpp"
#include "asrfe2/rng.hpp"
#include "asrfe2/scenarios.hpp"

namespace py = pybind11;
using namespace asrfe2;

namespace {

AsrLaw law_from_args(double tau_lat, double tau_ch, double U_C, double U_L,
                     double T0_K, double eps_inf) {
  return AsrLaw{tau_lat, tau_ch, U_C, U_L, T0_K, eps_inf};
}

/// Thin owning wrapper: a periodic RVE plus its bound system.
class PyRve {
public:
  PyRve(double size_mm, double h_mm, const RunConfig& cfg, std::uint64_t seed_geometry,
        std::uint64_t seed_strength, std::uint64_t seed_sites) {
    RunConfig local = cfg;
    local.domain_size_mm = size_mm;
    local.element_size_mm = h_mm;
    TriMesh mesh = build_structured_mesh(size_mm, size_mm, h_mm);
    std::vector<Circle> circles;
    if (local.packing_fraction > 0.0) {
      const auto diameters = sample_aggregate_diameters(
          local.d_min_mm, local.d_max_mm, local.packing_fraction, size_mm * size_mm,
          derive_seed(seed_geometry, 1));
      circles = place_aggregates(diameters, size_mm, size_mm,
                                 local.placement_max_attempts,
                                 derive_seed(seed_geometry, 2))
                    .circles;
    }
    auto phases = assign_phases(mesh, circles, local.asr_site_ratio, seed_sites);
    rve_ = std::make_unique<RveProblem>(make_rve(std::move(mesh), std::move(phases),
                                                 local.phase_materials(),
                                                 local.solver_options(), seed_strength));
    rve_->temperature_K = local.temperature_K;
    law_ = local.asr_law();
    system_ = std::make_unique<RveSystem>(
        RveSystem::periodic(*rve_, Eigen::Matrix2d::Identity()));
  }

  void set_deformation(const Eigen::Matrix2d& F) { system_->set_deformation(F); }
  void set_expansion_time(double t_days, double T_K) {
    rve_->eigen_level = eigenstrain(t_days, T_K, law_);
  }

  py::dict run_damage_loop() {
    last_ = system_->run_damage_loop();
    py::dict out;
    out["passes"] = last_.passes;
    out["closure_iterations"] = last_.closure_iterations;
    out["n_damaged"] = rve_->damaged_count();
    return out;
  }

  Eigen::Matrix2d average_stress() const {
    return asrfe2::average_stress(*rve_, last_.stress);
  }

  Eigen::Matrix3d virtual_test_stiffness(const std::string& mode, double delta) {
    const TestMode m = mode == "compression" ? TestMode::Compression : TestMode::Tension;
    return asrfe2::virtual_test_stiffness(*system_, m, delta);
  }

  std::vector<double> damage() const {
    std::vector<double> d(static_cast<std::size_t>(rve_->num_elements()));
    for (int e = 0; e < rve_->num_elements(); ++e)
      d[static_cast<std::size_t>(e)] = rve_->states[static_cast<std::size_t>(e)].damage;
    return d;
  }

  std::vector<int> phases() const {
    std::vector<int> p(static_cast<std::size_t>(rve_->num_elements()));
    for (int e = 0; e < rve_->num_elements(); ++e)
      p[static_cast<std::size_t>(e)] = static_cast<int>(rve_->phases[static_cast<std::size_t>(e)]);
    return p;
  }

private:
  std::unique_ptr<RveProblem> rve_;
  std::unique_ptr<RveSystem> system_;
  AsrLaw law_;
  MesoSolution last_;
};

py::dict record_to_dict(const HistoryRecord& r) {
  py::dict d;
  d["t_days"] = r.t_days;
  d["strain_x"] = r.strain_x;
  d["strain_y"] = r.strain_y;
  d["crack_density_aggregate"] = r.crack_density_aggregate;
  d["crack_density_mortar"] = r.crack_density_mortar;
  d["rel_stiffness_x"] = r.rel_stiffness_x;
  d["rel_stiffness_y"] = r.rel_stiffness_y;
  d["n_damaged"] = r.n_damaged;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-scale concrete expansion damage simulator (C++ core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError",
                                              PyExc_RuntimeError);

  py::class_<AsrLaw>(m, "AsrLaw")
      .def(py::init(&law_from_args), py::arg("tau_lat0_days"), py::arg("tau_ch0_days"),
           py::arg("U_C"), py::arg("U_L"), py::arg("T0_K"), py::arg("eps_inf"))
      .def_readwrite("tau_lat0_days", &AsrLaw::tau_lat0_days)
      .def_readwrite("tau_ch0_days", &AsrLaw::tau_ch0_days)
      .def_readwrite("U_C", &AsrLaw::U_C)
      .def_readwrite("U_L", &AsrLaw::U_L)
      .def_readwrite("T0_K", &AsrLaw::T0_K)
      .def_readwrite("eps_inf", &AsrLaw::eps_inf);

  m.def("reaction_extent", &reaction_extent, py::arg("t_days"), py::arg("T_K"),
        py::arg("law"));
  m.def("characteristic_time", &characteristic_time, py::arg("T_K"), py::arg("law"));
  m.def("latency_time", &latency_time, py::arg("T_K"), py::arg("law"));
  m.def("eigenstrain", &eigenstrain, py::arg("t_days"), py::arg("T_K"), py::arg("law"));
  m.def("damage_value", &damage_value, py::arg("i"), py::arg("a"),
        py::arg("cap_step") = 10, py::arg("d_max") = 0.9999);
  m.def("ultimate_strain", &ultimate_strain, py::arg("G_c"), py::arg("w_c_mm"),
        py::arg("f_t"));
  m.def("sample_tensile_strength", &sample_tensile_strength_from_u, py::arg("f_t0"),
        py::arg("k"), py::arg("lambda_factor"), py::arg("u"));

  m.def(
      "orthotropic_stiffness",
      [](double E, double nu, double damage, double angle, bool closed,
         const std::string& plane) {
        ElementState st;
        st.cracked = damage > 0.0;
        st.damage = damage;
        st.crack_angle = angle;
        const auto p = plane == "plane_strain" ? PlaneAssumption::PlaneStrain
                                               : PlaneAssumption::PlaneStress;
        return orthotropic_stiffness(st, IsotropicElastic::from_E_nu(E, nu),
                                     closed ? CrackMode::Closed : CrackMode::Open, p);
      },
      py::arg("E"), py::arg("nu"), py::arg("damage") = 0.0, py::arg("angle") = 0.0,
      py::arg("closed") = false, py::arg("plane") = "plane_stress");

  m.def("sample_aggregate_diameters", &sample_aggregate_diameters, py::arg("d_min"),
        py::arg("d_max"), py::arg("target_fraction"), py::arg("domain_area"),
        py::arg("seed"));
  m.def(
      "place_aggregates",
      [](const std::vector<double>& diameters, double width, double height,
         int max_attempts, std::uint64_t seed) {
        const PackingResult r =
            place_aggregates(diameters, width, height, max_attempts, seed);
        std::vector<std::tuple<double, double, double>> circles;
        circles.reserve(r.circles.size());
        for (const auto& c : r.circles)
          circles.emplace_back(c.center.x(), c.center.y(), c.radius);
        return py::make_tuple(circles, r.achieved_fraction, r.complete);
      },
      py::arg("diameters"), py::arg("width"), py::arg("height"),
      py::arg("max_attempts") = 5000, py::arg("seed") = 0);
  m.def(
      "structured_mesh_counts",
      [](double width, double height, double h) {
        const TriMesh mesh = build_structured_mesh(width, height, h);
        return py::make_tuple(mesh.num_nodes(), mesh.num_elements());
      },
      py::arg("width"), py::arg("height"), py::arg("h"));

  py::class_<PyRve>(m, "Rve")
      .def(py::init([](double size_mm, double h_mm, std::uint64_t seed_geometry,
                       std::uint64_t seed_strength, std::uint64_t seed_sites,
                       double packing_fraction, double asr_site_ratio) {
             RunConfig cfg = default_config();
             cfg.packing_fraction = packing_fraction;
             cfg.asr_site_ratio = asr_site_ratio;
             cfg.crack_band_width_mm = h_mm;
             return new PyRve(size_mm, h_mm, cfg, seed_geometry, seed_strength,
                              seed_sites);
           }),
           py::arg("size_mm"), py::arg("h_mm"), py::arg("seed_geometry") = 1,
           py::arg("seed_strength") = 2, py::arg("seed_sites") = 3,
           py::arg("packing_fraction") = 0.45, py::arg("asr_site_ratio") = 0.01)
      .def("set_deformation", &PyRve::set_deformation, py::arg("F"))
      .def("set_expansion_time", &PyRve::set_expansion_time, py::arg("t_days"),
           py::arg("T_K"))
      .def("run_damage_loop", &PyRve::run_damage_loop)
      .def("average_stress", &PyRve::average_stress)
      .def("virtual_test_stiffness", &PyRve::virtual_test_stiffness, py::arg("mode"),
           py::arg("delta") = 1e-4)
      .def("damage", &PyRve::damage)
      .def("phases", &PyRve::phases);

  m.def(
      "run_scenario",
      [](const std::string& config_path, const std::string& out_dir,
         const std::string& profile) {
        RunConfig cfg = load_config(config_path);
        if (!profile.empty()) apply_profile(cfg, profile);
        const ScenarioResult result =
            run_and_write(cfg, out_dir.empty() ? cfg.output_dir : out_dir);
        py::list history;
        for (const auto& r : result.history) history.append(record_to_dict(r));
        return history;
      },
      py::arg("config_path"), py::arg("out_dir") = "", py::arg("profile") = "");

  m.def("default_config_text", [] { return config_to_text(default_config()); });

  m.attr("__version__") = "0.1.0";
}
