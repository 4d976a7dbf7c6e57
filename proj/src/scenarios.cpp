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

#include "asrfe2/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "asrfe2/checkpoint.hpp"
#include "asrfe2/errors.hpp"
#include "asrfe2/parallel.hpp"
#include "asrfe2/rng.hpp"
#include "asrfe2/vtk.hpp"

namespace asrfe2 {

namespace {

struct BoundaryNodes {
  std::vector<int> left, right, bottom, top;
};

BoundaryNodes boundary_nodes(const TriMesh& mesh) {
  const double tol = 1e-9 * std::max(mesh.width, mesh.height);
  BoundaryNodes b;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const auto& x = mesh.nodes[static_cast<std::size_t>(n)];
    if (std::abs(x.x()) < tol) b.left.push_back(n);
    if (std::abs(x.x() - mesh.width) < tol) b.right.push_back(n);
    if (std::abs(x.y()) < tol) b.bottom.push_back(n);
    if (std::abs(x.y() - mesh.height) < tol) b.top.push_back(n);
  }
  return b;
}

double mean_component(const Eigen::VectorXd& u, const std::vector<int>& nodes, int comp) {
  double acc = 0.0;
  for (int n : nodes) acc += u[2 * n + comp];
  return acc / static_cast<double>(nodes.size());
}

/// Face-pair expansion measure: mean displacement difference over size.
Eigen::Vector2d boundary_strain(const TriMesh& mesh, const BoundaryNodes& b,
                                const Eigen::VectorXd& u) {
  const double ex =
      (mean_component(u, b.right, 0) - mean_component(u, b.left, 0)) / mesh.width;
  const double ey =
      (mean_component(u, b.top, 1) - mean_component(u, b.bottom, 1)) / mesh.height;
  return {ex, ey};
}

Eigen::Vector2d volume_average_strain(const RveProblem& rve,
                                      const std::vector<Eigen::Vector3d>& strain) {
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (int e = 0; e < rve.num_elements(); ++e) {
    const double a = rve.geometry[static_cast<std::size_t>(e)].area;
    acc += a * Eigen::Vector2d(strain[static_cast<std::size_t>(e)](0),
                               strain[static_cast<std::size_t>(e)](1));
    total += a;
  }
  return acc / total;
}

std::vector<std::pair<int, int>> top_edge_segments(const TriMesh& mesh) {
  // Structured grid: consecutive top-row nodes.
  std::vector<std::pair<int, int>> edges;
  const int base = mesh.ny * (mesh.nx + 1);
  for (int i = 0; i < mesh.nx; ++i) edges.emplace_back(base + i, base + i + 1);
  return edges;
}

struct SpecimenGeometry {
  TriMesh mesh;
  std::vector<Phase> phases;
  std::vector<Circle> circles;
  double achieved_packing = 0.0;
  bool packing_complete = true;
};

SpecimenGeometry build_specimen_geometry(const RunConfig& cfg, const SeedTriple& seeds) {
  SpecimenGeometry g;
  g.mesh = build_structured_mesh(cfg.domain_size_mm, cfg.domain_size_mm,
                                 cfg.element_size_mm);
  if (cfg.packing_fraction > 0.0) {
    const auto diameters = sample_aggregate_diameters(
        cfg.d_min_mm, cfg.d_max_mm, cfg.packing_fraction,
        cfg.domain_size_mm * cfg.domain_size_mm, derive_seed(seeds.geometry, 1));
    auto packing = place_aggregates(diameters, cfg.domain_size_mm, cfg.domain_size_mm,
                                    cfg.placement_max_attempts,
                                    derive_seed(seeds.geometry, 2));
    g.circles = std::move(packing.circles);
    g.achieved_packing = packing.achieved_fraction;
    g.packing_complete = packing.complete;
  }
  g.phases = assign_phases(g.mesh, g.circles, cfg.asr_site_ratio, seeds.sites);
  return g;
}

RveProblem make_problem(const RunConfig& cfg, SpecimenGeometry&& geometry,
                        std::uint64_t strength_seed) {
  RveProblem rve = make_rve(std::move(geometry.mesh), std::move(geometry.phases),
                            cfg.phase_materials(), cfg.solver_options(), strength_seed);
  rve.temperature_K = cfg.temperature_K;
  return rve;
}

long step_count(const RunConfig& cfg) {
  if (cfg.t_end_days <= 0.0) return -1;
  if (!(cfg.dt_days > 0.0)) throw ConfigError("dt_days must be positive");
  return std::llround(cfg.t_end_days / cfg.dt_days);
}

class RecordCadence {
public:
  RecordCadence(int every, long last) : every_(std::max(every, 1)), last_(last) {}
  bool operator()(long k) const { return k % every_ == 0 || k == last_; }

private:
  int every_;
  long last_;
};

} // namespace

ScenarioResult run_meso_scenario(const RunConfig& cfg) {
  if (cfg.scenario != Scenario::MesoFree && cfg.scenario != Scenario::MesoLoaded)
    throw ConfigError("run_meso_scenario: scenario must be meso_free or meso_loaded");
  const bool loaded = cfg.scenario == Scenario::MesoLoaded;

  SeedTriple seeds{cfg.seed_geometry, cfg.seed_strength, cfg.seed_sites};
  SpecimenGeometry geometry = build_specimen_geometry(cfg, seeds);

  ScenarioResult result;
  result.achieved_packing = geometry.achieved_packing;
  result.packing_complete = geometry.packing_complete;
  result.circles = geometry.circles;
  result.specimen = std::make_shared<RveProblem>(
      make_problem(cfg, std::move(geometry), seeds.strength));
  RveProblem& rve = *result.specimen;
  const BoundaryNodes bnodes = boundary_nodes(rve.mesh);

  // Bottom rollers plus a single horizontal pin at the bottom-left node.
  Constraints cons(rve.n_dofs());
  for (int n : bnodes.bottom) cons.prescribe(2 * n + 1, 0.0);
  cons.prescribe(2 * bnodes.bottom.front(), 0.0);
  cons.finalize();

  Eigen::VectorXd f_ext = Eigen::VectorXd::Zero(rve.n_dofs());
  if (loaded)
    add_edge_tractions(rve.mesh, top_edge_segments(rve.mesh),
                       Eigen::Vector2d(0.0, -cfg.load_pa), f_ext);

  RveSystem sys(rve, std::move(cons), std::move(f_ext));
  const AsrLaw law = cfg.asr_law();
  const long n_steps = step_count(cfg);
  const RecordCadence record(cfg.record_every, n_steps);
  const bool has_aggregate = rve.phase_area(Phase::Aggregate) > 0.0;

  Eigen::Vector2d base_boundary = Eigen::Vector2d::Zero();
  Eigen::Vector2d base_volavg = Eigen::Vector2d::Zero();
  MesoSolution sol;
  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt_days;
    rve.eigen_level = eigenstrain(t, cfg.temperature_K, law);
    sol = sys.run_damage_loop();
    const Eigen::Vector2d eb = boundary_strain(rve.mesh, bnodes, sol.u);
    const Eigen::Vector2d ev = volume_average_strain(rve, sol.strain);
    if (k == 0) {
      // Elastic response to the load application, removed from every record.
      base_boundary = eb;
      base_volavg = ev;
    }
    if (!record(k)) continue;

    HistoryRecord rec;
    rec.t_days = t;
    rec.strain_x = eb.x() - base_boundary.x();
    rec.strain_y = eb.y() - base_boundary.y();
    rec.crack_density_aggregate =
        has_aggregate ? crack_density(rve, sol.strain, Phase::Aggregate) : 0.0;
    rec.crack_density_mortar = crack_density(rve, sol.strain, Phase::Mortar);
    rec.rel_stiffness_x = relative_stiffness(rve, 0, TestMode::Compression);
    rec.rel_stiffness_y = relative_stiffness(rve, 1, TestMode::Compression);
    rec.n_damaged = rve.damaged_count();
    result.history.push_back(rec);

    HistoryRecord vol = rec;
    vol.strain_x = ev.x() - base_volavg.x();
    vol.strain_y = ev.y() - base_volavg.y();
    result.history_volavg.push_back(vol);
  }

  result.final_strain = sol.strain;
  result.orientation = orientation_histogram(rve, sol.strain, kOrientationBins);
  return result;
}

namespace {

struct Fe2Recorder {
  const RunConfig* cfg = nullptr;
  std::vector<HistoryRecord>* history = nullptr;
  std::vector<HistoryRecord>* history_volavg = nullptr;
  RecordCadence record;
  long step = 0;
  Eigen::Vector2d base_strain = Eigen::Vector2d::Zero();
  std::string checkpoint_dir;

  void operator()(const MacroProblem& p, const StepStats& stats) {
    const Eigen::Matrix2d strain = mean_macro_strain(p);
    if (step == 0) base_strain = {strain(0, 0), strain(1, 1)};

    if (cfg->checkpoint_every > 0 && step % cfg->checkpoint_every == 0 &&
        !checkpoint_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_%06ld.txt", step);
      write_checkpoint(checkpoint_dir + "/" + name, p, stats.t_days);
    }

    if (record(step)) {
      HistoryRecord rec;
      rec.t_days = stats.t_days;
      rec.strain_x = strain(0, 0) - base_strain.x();
      rec.strain_y = strain(1, 1) - base_strain.y();

      double crack_agg = 0.0, area_agg = 0.0, crack_mor = 0.0, area_mor = 0.0;
      double rel_x = 0.0, rel_y = 0.0;
      int damaged = 0;
      for (std::size_t e = 0; e < p.rves.size(); ++e) {
        const RveProblem& rve = p.rves[e];
        const RveBinding& b = p.bindings[e];
        for (int i = 0; i < rve.num_elements(); ++i) {
          const double a = rve.geometry[static_cast<std::size_t>(i)].area;
          const auto& eps = b.last_solution.strain[static_cast<std::size_t>(i)];
          const double ca =
              crack_area(a, eps(0) + eps(1),
                         rve.states[static_cast<std::size_t>(i)].step > 0);
          switch (rve.phases[static_cast<std::size_t>(i)]) {
            case Phase::Aggregate: crack_agg += ca; area_agg += a; break;
            case Phase::Mortar: crack_mor += ca; area_mor += a; break;
            case Phase::AsrSite: break;
          }
        }
        damaged += rve.damaged_count();
        // Stiffness indicator: current effective diagonal vs. the pristine one.
        rel_x += 100.0 * b.effective.C(0, 0) / b.pristine_C(0, 0);
        rel_y += 100.0 * b.effective.C(1, 1) / b.pristine_C(1, 1);
      }
      const auto n_rves = static_cast<double>(p.rves.size());
      rec.crack_density_aggregate = area_agg > 0.0 ? crack_agg / area_agg : 0.0;
      rec.crack_density_mortar = area_mor > 0.0 ? crack_mor / area_mor : 0.0;
      rec.rel_stiffness_x = rel_x / n_rves;
      rec.rel_stiffness_y = rel_y / n_rves;
      rec.n_damaged = damaged;
      history->push_back(rec);
      history_volavg->push_back(rec);  // macro strain is already volume-averaged
    }
    ++step;
  }
};

} // namespace

ScenarioResult run_fe2_scenario(const RunConfig& cfg) {
  if (cfg.scenario != Scenario::Fe2Free && cfg.scenario != Scenario::Fe2Loaded)
    throw ConfigError("run_fe2_scenario: scenario must be fe2_free or fe2_loaded");
  const bool loaded = cfg.scenario == Scenario::Fe2Loaded;

  MacroProblem problem;
  problem.mesh = build_structured_mesh(cfg.macro_cols * cfg.domain_size_mm,
                                       cfg.macro_rows * cfg.domain_size_mm,
                                       cfg.domain_size_mm);
  problem.temperature_K = cfg.temperature_K;
  problem.law = cfg.asr_law();
  problem.options = cfg.fe2_options();

  const BoundaryNodes bnodes = boundary_nodes(problem.mesh);
  for (int n : bnodes.bottom) problem.dirichlet.push_back({n, 1, 0.0});
  problem.dirichlet.push_back({bnodes.bottom.front(), 0, 0.0});
  if (loaded)
    for (auto [a, b] : top_edge_segments(problem.mesh))
      problem.tractions.push_back({a, b, Eigen::Vector2d(0.0, -cfg.load_pa)});

  ScenarioResult result;
  problem.rves.reserve(static_cast<std::size_t>(problem.num_elements()));
  for (int e = 0; e < problem.num_elements(); ++e) {
    SeedTriple seeds{derive_seed(cfg.seed_geometry, 100 + static_cast<std::uint64_t>(e)),
                     derive_seed(cfg.seed_strength, 100 + static_cast<std::uint64_t>(e)),
                     derive_seed(cfg.seed_sites, 100 + static_cast<std::uint64_t>(e))};
    SpecimenGeometry geometry = build_specimen_geometry(cfg, seeds);
    result.achieved_packing += geometry.achieved_packing;
    result.packing_complete = result.packing_complete && geometry.packing_complete;
    problem.rves.push_back(make_problem(cfg, std::move(geometry), seeds.strength));
  }
  result.achieved_packing /= static_cast<double>(problem.num_elements());

  initialize_macro(problem);

  Fe2Recorder recorder{&cfg, &result.history, &result.history_volavg,
                       RecordCadence(cfg.record_every, step_count(cfg)), 0,
                       Eigen::Vector2d::Zero(),
                       cfg.checkpoint_every > 0 ? cfg.output_dir : std::string()};
  if (cfg.checkpoint_every > 0) std::filesystem::create_directories(cfg.output_dir);
  fe2_time_march(problem, cfg.t_end_days, cfg.dt_days, std::ref(recorder));

  // Pool final crack orientations over all RVEs.
  std::vector<double> pooled(kOrientationBins, 0.0);
  double mass = 0.0;
  for (std::size_t e = 0; e < problem.rves.size(); ++e) {
    const auto hist = orientation_histogram(problem.rves[e],
                                            problem.bindings[e].last_solution.strain,
                                            kOrientationBins);
    double local = 0.0;
    for (double v : hist) local += v;
    if (local == 0.0) continue;
    for (int b = 0; b < kOrientationBins; ++b) pooled[static_cast<std::size_t>(b)] += hist[static_cast<std::size_t>(b)];
    mass += 1.0;
  }
  if (mass > 0.0)
    for (auto& v : pooled) v /= mass;
  result.orientation = std::move(pooled);

  if (cfg.vtk_output) {
    std::filesystem::create_directories(cfg.output_dir);
    for (std::size_t e = 0; e < problem.rves.size(); ++e) {
      char name[64];
      std::snprintf(name, sizeof(name), "rve_%03zu.vtk", e);
      write_vtk_fields(cfg.output_dir + "/" + name, problem.rves[e],
                       problem.bindings[e].last_solution.strain);
    }
  }
  return result;
}

ScenarioResult run_scenario(const RunConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::MesoFree:
    case Scenario::MesoLoaded:
      return run_meso_scenario(cfg);
    case Scenario::Fe2Free:
    case Scenario::Fe2Loaded:
      return run_fe2_scenario(cfg);
  }
  throw ConfigError("run_scenario: unknown scenario");
}

ScenarioResult run_and_write(const RunConfig& cfg, const std::string& out_dir) {
  RunConfig local = cfg;
  local.output_dir = out_dir;
  std::filesystem::create_directories(out_dir);

  ScenarioResult result = run_scenario(local);
  write_history_csv(out_dir + "/history.csv", result.history);
  write_history_csv(out_dir + "/history_volavg.csv", result.history_volavg);

  if (local.geometry_dump && result.specimen)
    write_geometry_file(out_dir + "/geometry.txt", result.circles);
  if (local.vtk_output && result.specimen)
    write_vtk_fields(out_dir + "/fields_final.vtk", *result.specimen,
                     result.final_strain);
  return result;
}

namespace {

HistoryRecord
final_or_empty(const std::vector<HistoryRecord>& history) {
  return history.empty() ? HistoryRecord{} : history.back();
}

} // namespace

std::string MonteCarloResult::runs_csv() const {
  std::string out =
      "run,seed_geometry,seed_strength,seed_sites,status,t_days,strain_x,strain_y,"
      "crack_density_aggregate,crack_density_mortar,rel_stiffness_x,rel_stiffness_y,"
      "n_damaged\n";
  char line[640];
  for (const auto& r : runs) {
    const auto& f = r.final_record;
    std::snprintf(line, sizeof(line),
                  "%d,%llu,%llu,%llu,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.run, static_cast<unsigned long long>(r.seeds.geometry),
                  static_cast<unsigned long long>(r.seeds.strength),
                  static_cast<unsigned long long>(r.seeds.sites),
                  r.ok ? "ok" : "failed", f.t_days, f.strain_x, f.strain_y,
                  f.crack_density_aggregate, f.crack_density_mortar, f.rel_stiffness_x,
                  f.rel_stiffness_y, f.n_damaged);
    out += line;
  }
  return out;
}

std::string MonteCarloResult::stats_csv() const {
  std::string out = "field,mean,std\n";
  char line[256];
  auto row = [&](const char* name, double m, double s) {
    std::snprintf(line, sizeof(line), "%s,%.17g,%.17g\n", name, m, s);
    out += line;
  };
  row("strain_x", stats.mean.strain_x, stats.stddev.strain_x);
  row("strain_y", stats.mean.strain_y, stats.stddev.strain_y);
  row("crack_density_aggregate", stats.mean.crack_density_aggregate,
      stats.stddev.crack_density_aggregate);
  row("crack_density_mortar", stats.mean.crack_density_mortar,
      stats.stddev.crack_density_mortar);
  row("rel_stiffness_x", stats.mean.rel_stiffness_x, stats.stddev.rel_stiffness_x);
  row("rel_stiffness_y", stats.mean.rel_stiffness_y, stats.stddev.rel_stiffness_y);
  return out;
}

MonteCarloResult monte_carlo_with_seeds(const RunConfig& cfg,
                                        const std::vector<SeedTriple>& seeds,
                                        bool keep_results) {
  if (seeds.size() < 2)
    throw ConfigError("monte_carlo: need at least 2 runs");

  MonteCarloResult result;
  result.runs.resize(seeds.size());
  result.results.resize(keep_results ? seeds.size() : 0);

  parallel_for(seeds.size(), cfg.workers, [&](std::size_t i) {
    MonteCarloRun& run = result.runs[i];
    run.run = static_cast<int>(i);
    run.seeds = seeds[i];
    RunConfig local = cfg;
    local.seed_geometry = seeds[i].geometry;
    local.seed_strength = seeds[i].strength;
    local.seed_sites = seeds[i].sites;
    local.workers = 1;  // one run per worker; inner solves stay serial
    try {
      ScenarioResult r = run_scenario(local);
      run.final_record = final_or_empty(r.history);
      run.ok = true;
      if (keep_results) result.results[i] = std::move(r);
    } catch (const std::exception& e) {
      run.ok = false;
      run.error = e.what();
    }
  });

  // Mean and standard deviation over the successful runs.
  auto accumulate = [&](auto field) {
    double mean = 0.0, m2 = 0.0;
    int n = 0;
    for (const auto& r : result.runs) {
      if (!r.ok) continue;
      ++n;
      const double v = field(r.final_record);
      const double delta = v - mean;
      mean += delta / n;
      m2 += delta * (v - mean);
    }
    const double var = n > 1 ? m2 / n : 0.0;
    return std::pair<double, double>(n > 0 ? mean : 0.0, std::sqrt(var));
  };
  auto& st = result.stats;
  std::tie(st.mean.strain_x, st.stddev.strain_x) =
      accumulate([](const HistoryRecord& r) { return r.strain_x; });
  std::tie(st.mean.strain_y, st.stddev.strain_y) =
      accumulate([](const HistoryRecord& r) { return r.strain_y; });
  std::tie(st.mean.crack_density_aggregate, st.stddev.crack_density_aggregate) =
      accumulate([](const HistoryRecord& r) { return r.crack_density_aggregate; });
  std::tie(st.mean.crack_density_mortar, st.stddev.crack_density_mortar) =
      accumulate([](const HistoryRecord& r) { return r.crack_density_mortar; });
  std::tie(st.mean.rel_stiffness_x, st.stddev.rel_stiffness_x) =
      accumulate([](const HistoryRecord& r) { return r.rel_stiffness_x; });
  std::tie(st.mean.rel_stiffness_y, st.stddev.rel_stiffness_y) =
      accumulate([](const HistoryRecord& r) { return r.rel_stiffness_y; });
  for (const auto& r : result.runs) (r.ok ? st.n_ok : st.n_failed)++;
  return result;
}

MonteCarloResult monte_carlo(const RunConfig& cfg, int n_runs, MonteCarloVary vary,
                             bool keep_results) {
  std::vector<SeedTriple> seeds(static_cast<std::size_t>(n_runs));
  for (int i = 0; i < n_runs; ++i) {
    const auto stream = static_cast<std::uint64_t>(i);
    seeds[static_cast<std::size_t>(i)] = SeedTriple{
        vary == MonteCarloVary::FullGeometry ? derive_seed(cfg.seed_geometry, stream)
                                             : cfg.seed_geometry,
        derive_seed(cfg.seed_strength, stream),
        derive_seed(cfg.seed_sites, stream)};
  }
  return monte_carlo_with_seeds(cfg, seeds, keep_results);
}

} // namespace asrfe2
