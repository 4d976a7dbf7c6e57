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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "asrfe2/config.hpp"
#include "asrfe2/errors.hpp"
#include "asrfe2/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParameterError = 2;
constexpr int kExitSolverError = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string profile;
  std::uint64_t seed_geometry = 0, seed_strength = 0, seed_sites = 0;
  bool has_seed_geometry = false, has_seed_strength = false, has_seed_sites = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--profile", args.profile, "scale preset: desk or paper");
  cmd->add_option("--seed-geometry", args.seed_geometry, "geometry seed override")
      ->each([&](const std::string&) { args.has_seed_geometry = true; });
  cmd->add_option("--seed-strength", args.seed_strength, "strength seed override")
      ->each([&](const std::string&) { args.has_seed_strength = true; });
  cmd->add_option("--seed-sites", args.seed_sites, "site seed override")
      ->each([&](const std::string&) { args.has_seed_sites = true; });
}

asrfe2::RunConfig make_config(const CommonArgs& args) {
  asrfe2::RunConfig cfg = asrfe2::load_config(args.config_path);
  if (!args.profile.empty()) asrfe2::apply_profile(cfg, args.profile);
  if (args.has_seed_geometry) cfg.seed_geometry = args.seed_geometry;
  if (args.has_seed_strength) cfg.seed_strength = args.seed_strength;
  if (args.has_seed_sites) cfg.seed_sites = args.seed_sites;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  return cfg;
}

int run_command(const CommonArgs& args) {
  const asrfe2::RunConfig cfg = make_config(args);
  const asrfe2::ScenarioResult result = asrfe2::run_and_write(cfg, cfg.output_dir);
  if (!result.packing_complete)
    std::fprintf(stderr,
                 "note: aggregate placement stalled at %.1f%% packing (target %.1f%%)\n",
                 100.0 * result.achieved_packing, 100.0 * cfg.packing_fraction);
  if (!result.history.empty()) {
    const auto& last = result.history.back();
    std::printf("final t = %g d, strain_x = %.6g, strain_y = %.6g, damaged = %d\n",
                last.t_days, last.strain_x, last.strain_y, last.n_damaged);
  }
  std::printf("history written to %s/history.csv\n", cfg.output_dir.c_str());
  return kExitOk;
}

int montecarlo_command(const CommonArgs& args, int runs, const std::string& vary_str) {
  const asrfe2::RunConfig cfg = make_config(args);
  asrfe2::MonteCarloVary vary;
  if (vary_str == "sites") vary = asrfe2::MonteCarloVary::SitesOnly;
  else if (vary_str == "geometry") vary = asrfe2::MonteCarloVary::FullGeometry;
  else throw asrfe2::ConfigError("--vary must be sites or geometry");

  const asrfe2::MonteCarloResult mc = asrfe2::monte_carlo(cfg, runs, vary);
  std::filesystem::create_directories(cfg.output_dir);
  {
    std::ofstream out(cfg.output_dir + "/montecarlo.csv");
    out << mc.runs_csv();
  }
  {
    std::ofstream out(cfg.output_dir + "/montecarlo_stats.csv");
    out << mc.stats_csv();
  }
  std::printf("%d/%zu runs succeeded; stats written to %s\n", mc.stats.n_ok,
              mc.runs.size(), cfg.output_dir.c_str());
  if (mc.stats.n_ok == 0) return kExitSolverError;
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-scale simulator for expansion-driven damage in concrete"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run one configured scenario");
  add_common(run, run_args);

  CommonArgs mc_args;
  int mc_runs = 5;
  std::string mc_vary = "sites";
  CLI::App* mc = app.add_subcommand("montecarlo", "repeated runs with varied seeds");
  add_common(mc, mc_args);
  mc->add_option("--runs", mc_runs, "number of runs")->required();
  mc->add_option("--vary", mc_vary, "what to re-sample: sites or geometry")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(run_args);
    if (mc->parsed()) return montecarlo_command(mc_args, mc_runs, mc_vary);
    return kExitParameterError;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParameterError;
  } catch (const asrfe2::ConfigError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitParameterError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitParameterError;
  } catch (const asrfe2::NonConvergenceError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolverError;
  } catch (const asrfe2::SingularSystemError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
