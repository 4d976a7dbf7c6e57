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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asrfe2/config.hpp"
#include "asrfe2/history.hpp"
#include "asrfe2/metrics.hpp"

namespace asrfe2 {

struct ScenarioResult {
  std::vector<HistoryRecord> history;         // boundary-strain expansion (primary)
  std::vector<HistoryRecord> history_volavg;  // volume-averaged strain variant
  std::vector<double> orientation;            // final area-weighted crack angles
  double achieved_packing = 0.0;
  bool packing_complete = true;

  // Final meso state (meso scenarios only).
  std::shared_ptr<RveProblem> specimen;
  std::vector<Eigen::Vector3d> final_strain;
  std::vector<Circle> circles;
};

inline constexpr int kOrientationBins = 16;

/// Single 2D specimen: rollers along the bottom edge plus one horizontal pin;
/// the loaded variant adds a uniform vertical traction on the top edge.
/// Marches t = 0 .. t_end in steps of dt; the t = 0 (elastic) strains are
/// subtracted from every record so histories are expansion-only.
ScenarioResult run_meso_scenario(const RunConfig& cfg);

/// Nested two-scale run on a macro_cols x macro_rows arrangement of square
/// macro cells (two triangles each), one RVE per macro element.
ScenarioResult run_fe2_scenario(const RunConfig& cfg);

ScenarioResult run_scenario(const RunConfig& cfg);

/// Runs the configured scenario and writes history.csv, history_volavg.csv
/// and the optional geometry/VTK dumps into out_dir.
ScenarioResult run_and_write(const RunConfig& cfg, const std::string& out_dir);

enum class MonteCarloVary { SitesOnly, FullGeometry };

struct SeedTriple {
  std::uint64_t geometry = 0;
  std::uint64_t strength = 0;
  std::uint64_t sites = 0;
};

struct MonteCarloRun {
  int run = 0;
  SeedTriple seeds;
  bool ok = false;
  std::string error;
  HistoryRecord final_record;
};

struct MonteCarloStats {
  HistoryRecord mean;
  HistoryRecord stddev;
  int n_ok = 0;
  int n_failed = 0;
};

struct MonteCarloResult {
  std::vector<MonteCarloRun> runs;
  MonteCarloStats stats;
  std::vector<ScenarioResult> results;  // populated when keep_results

  std::string runs_csv() const;
  std::string stats_csv() const;
};

/// Per-run seeds derived from the config's seed triple: SitesOnly keeps the
/// geometry fixed and redraws strength/site seeds, FullGeometry redraws all
/// three. Failed runs are recorded and excluded from the statistics. Runs
/// execute on the worker pool, one run per worker.
MonteCarloResult monte_carlo(const RunConfig& cfg, int n_runs, MonteCarloVary vary,
                             bool keep_results = false);

MonteCarloResult monte_carlo_with_seeds(const RunConfig& cfg,
                                        const std::vector<SeedTriple>& seeds,
                                        bool keep_results = false);

} // namespace asrfe2
